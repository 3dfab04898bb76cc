#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chebfd/kernels.hpp"

namespace chebfd {

enum class KernelKind { None, Fejer, Jackson, Lanczos };

struct Kernel {
    KernelKind kind = KernelKind::Lanczos;
    int mu = 2;  // Lanczos only

    std::string name() const;
    static Kernel parse(const std::string& s);
};

struct Interval {
    double lo = 0.0, hi = 0.0;
    double width() const { return hi - lo; }
    double half_width() const { return 0.5 * (hi - lo); }
    double center() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
};

/// Chebyshev window expansion coefficients c_0..c_Np for the rectangular
/// window on `target`, expanded on `bounds`.  Sign convention: c_0 > 0.
std::vector<double> window_coeffs(Interval target, Interval bounds, int degree);

/// Kernel damping factors g_0..g_Np.
std::vector<double> kernel_coeffs(Kernel kernel, int degree);

/// Kernel-damped polynomial filter; combined[n] = g_n * c_n.
struct FilterPolynomial {
    int degree = 0;                 // N_p
    std::vector<double> combined;   // size N_p + 1
    double alpha = 1.0, beta = 0.0; // affine map x -> alpha*x + beta into [-1,1]
    Interval target;
    Interval bounds;
    Kernel kernel;
};

FilterPolynomial make_filter(Interval target, Interval bounds, int degree, Kernel kernel);

/// Scalar evaluation via the three-term recurrence; x must lie in bounds.
double eval_scalar(const FilterPolynomial& p, double x);

/// Evaluate at many points (recurrence carried across the whole point set).
void eval_many(const FilterPolynomial& p, std::span<const double> x, std::span<double> out);

/// Plot-friendly dump: rows of (n, c_n, g_n, g_n*c_n).
void dump_filter_table(const FilterPolynomial& p, const std::string& path);

/// Per-column Chebyshev moments m(n,k) = <x_k, T_n(alpha*A+beta*I) x_k>
/// collected against the block at filter entry.
struct MomentTable {
    Index degree = 0;
    Index width = 0;
    std::vector<double> m;  // (degree+1) x width, row-major in n

    double& operator()(Index n, Index k) { return m[static_cast<size_t>(n * width + k)]; }
    double operator()(Index n, Index k) const { return m[static_cast<size_t>(n * width + k)]; }
};

/// Replace X by p[A] X using the blocked three-term recurrence: two explicit
/// start-up steps, then N_p - 2 fused spMMVM+axpy steps with pointer swaps.
/// Costs exactly N_p * n_b spMVMs.
template <class S>
std::optional<MomentTable> apply_filter(const SparseMatrix<S>& A, BlockVector<S>& X,
                                        const FilterPolynomial& p, bool want_moments = false) {
    if (A.dim() != X.dim()) throw std::invalid_argument("apply_filter: dimension mismatch");
    if (p.degree < 2) throw std::invalid_argument("apply_filter: degree must be >= 2");
    const Index nb = X.width();
    const double alpha = p.alpha, beta = p.beta;

    std::optional<MomentTable> moments;
    std::optional<BlockVector<S>> x0;
    if (want_moments) {
        moments = MomentTable{p.degree, nb,
                              std::vector<double>(static_cast<size_t>((p.degree + 1) * nb), 0.0)};
        x0 = X;  // moments are taken against the filter input
        auto d0 = column_dots(*x0, *x0);
        for (Index k = 0; k < nb; ++k) (*moments)(0, k) = ScalarTraits<S>::real(d0[k]);
    }

    // u = (alpha*A + beta)x ; w = 2(alpha*A + beta)u - x ; x = g0c0 x + g1c1 u + g2c2 w
    BlockVector<S> u = spmmvm(A, X, alpha, beta);
    BlockVector<S> w = spmmvm(A, u, 2.0 * alpha, 2.0 * beta);
    block_axpy_scal(w, X, X, 1.0, -1.0, 0.0);
    if (want_moments) {
        auto d1 = column_dots(*x0, u);
        auto d2 = column_dots(*x0, w);
        for (Index k = 0; k < nb; ++k) {
            (*moments)(1, k) = ScalarTraits<S>::real(d1[k]);
            (*moments)(2, k) = ScalarTraits<S>::real(d2[k]);
        }
    }
    block_axpy_scal(X, u, w, p.combined[0], p.combined[1], p.combined[2]);

    BlockVector<S>* pu = &u;
    BlockVector<S>* pw = &w;
    for (int n = 3; n <= p.degree; ++n) {
        std::swap(pu, pw);  // swap handles, never copies
        spmmvm_fused(A, *pu, *pw, X, alpha, beta, p.combined[n]);
        if (want_moments) {
            auto dn = column_dots(*x0, *pw);
            for (Index k = 0; k < nb; ++k) (*moments)(n, k) = ScalarTraits<S>::real(dn[k]);
        }
    }
    return moments;
}

}  // namespace chebfd
