#include "chebfd/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace chebfd {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> jackson_damping(int order) {
    Kernel k{KernelKind::Jackson, 0};
    return kernel_coeffs(k, std::max(order, 1));
}
}  // namespace

ChebSeriesDensity::ChebSeriesDensity(std::vector<double> moments, Interval bounds)
    : moments_(std::move(moments)), bounds_(bounds) {
    if (moments_.empty()) throw std::invalid_argument("ChebSeriesDensity: no moments");
    if (!(bounds.lo < bounds.hi)) throw std::invalid_argument("ChebSeriesDensity: bad bounds");
    alpha_ = 2.0 / (bounds.hi - bounds.lo);
    beta_ = (bounds.lo + bounds.hi) / (bounds.lo - bounds.hi);
    const auto g = jackson_damping(order());
    damped_.resize(moments_.size());
    for (size_t n = 0; n < moments_.size(); ++n) damped_[n] = g[n] * moments_[n];
}

double ChebSeriesDensity::density(double lambda) const {
    double x = alpha_ * lambda + beta_;
    x = std::clamp(x, -1.0 + 1e-12, 1.0 - 1e-12);
    double acc = damped_[0];
    double tm2 = 1.0, tm1 = x;
    if (damped_.size() > 1) acc += 2.0 * damped_[1] * x;
    for (size_t n = 2; n < damped_.size(); ++n) {
        const double tn = 2.0 * x * tm1 - tm2;
        acc += 2.0 * damped_[n] * tn;
        tm2 = tm1;
        tm1 = tn;
    }
    return alpha_ * acc / (kPi * std::sqrt(1.0 - x * x));
}

double ChebSeriesDensity::count(double lo, double hi) const {
    if (hi < lo) return -count(hi, lo);
    auto theta = [&](double lambda) {
        return std::acos(std::clamp(alpha_ * lambda + beta_, -1.0, 1.0));
    };
    const double th_lo = theta(lo);  // larger angle
    const double th_hi = theta(hi);
    double acc = damped_[0] * (th_lo - th_hi);
    for (size_t n = 1; n < damped_.size(); ++n)
        acc += 2.0 * damped_[n] * (std::sin(n * th_lo) - std::sin(n * th_hi)) / static_cast<double>(n);
    return acc / kPi;
}

DosEstimate DosEstimate::from_eigenvalues(std::span<const double> eigenvalues, Interval bounds,
                                          int order) {
    const double alpha = 2.0 / (bounds.hi - bounds.lo);
    const double beta = (bounds.lo + bounds.hi) / (bounds.lo - bounds.hi);
    std::vector<double> mu(static_cast<size_t>(order) + 1, 0.0);
    for (double lam : eigenvalues) {
        const double x = alpha * lam + beta;
        if (x < -1.0 || x > 1.0)
            throw std::invalid_argument("DosEstimate::from_eigenvalues: eigenvalue outside bounds");
        double tm2 = 1.0, tm1 = x;
        mu[0] += 1.0;
        if (order >= 1) mu[1] += x;
        for (int n = 2; n <= order; ++n) {
            const double tn = 2.0 * x * tm1 - tm2;
            mu[n] += tn;
            tm2 = tm1;
            tm1 = tn;
        }
    }
    return DosEstimate(std::move(mu), bounds, 0, static_cast<Index>(eigenvalues.size()));
}

WeightDensity weight_density(const MomentTable& moments, Interval bounds) {
    if (moments.width == 0 || moments.m.empty())
        throw std::invalid_argument("weight_density: empty moment table");
    std::vector<double> mu(static_cast<size_t>(moments.degree) + 1, 0.0);
    for (Index n = 0; n <= moments.degree; ++n)
        for (Index k = 0; k < moments.width; ++k) mu[n] += moments(n, k);
    return WeightDensity(std::move(mu), bounds);
}

double estimate_count(const DosEstimate& dos, Interval interval) {
    if (!dos.bounds().contains(interval))
        throw std::invalid_argument("estimate_count: interval outside DOS bounds");
    return dos.count(interval.lo, interval.hi);
}

template <class S>
Interval lanczos_bounds(const SparseMatrix<S>& A, int iters, std::uint64_t seed) {
    if (iters < 2) throw std::invalid_argument("lanczos_bounds: iters must be >= 2");
    const Index d = A.dim();
    const int m = static_cast<int>(std::min<Index>(iters, d));

    for (int restart = 0; restart < 4; ++restart) {
        BlockVector<S> v(d, 1);
        v.randomize(seed + 977 * restart);
        {
            const double nrm = column_norms(v)[0];
            for (Index i = 0; i < d; ++i) v(i, 0) /= nrm;
        }
        std::vector<BlockVector<S>> basis;
        std::vector<double> al, be;
        bool breakdown = false;
        for (int j = 0; j < m; ++j) {
            basis.push_back(v);
            BlockVector<S> w = spmmvm(A, v, 1.0, 0.0);
            // full reorthogonalization against all previous basis vectors
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : basis) {
                    const S h = column_dots(q, w)[0];
                    for (Index i = 0; i < d; ++i) w(i, 0) -= h * q(i, 0);
                    if (pass == 0 && &q == &basis.back()) al.push_back(ScalarTraits<S>::real(h));
                }
            const double b_j = column_norms(w)[0];
            if (j + 1 == m || static_cast<Index>(basis.size()) == d) break;
            if (b_j < 1e-14) {
                breakdown = true;
                break;
            }
            be.push_back(b_j);
            for (Index i = 0; i < d; ++i) w(i, 0) /= b_j;
            v = std::move(w);
        }
        // True breakdown with a usable tridiagonal means an exact invariant
        // subspace; retry on a near-trivial one, but accept it on the last
        // attempt (e.g. A = c*I breaks down at step 1 from any start vector).
        if (breakdown && al.size() < 2 && restart < 3) continue;
        if (al.empty()) continue;

        const int k = static_cast<int>(al.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
        for (int j = 0; j < k; ++j) {
            T(j, j) = al[j];
            if (j + 1 < k) T(j, j + 1) = T(j + 1, j) = be[j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
        const double rmin = es.eigenvalues().minCoeff();
        const double rmax = es.eigenvalues().maxCoeff();
        // absolute floor keeps degenerate spectra (zero Ritz spread) strictly
        // inside the returned interval despite rounding in the Ritz values
        const double pad =
            0.01 * (rmax - rmin) + 1e-12 * (1.0 + std::abs(rmin) + std::abs(rmax));
        return {rmin - pad, rmax + pad};
    }
    throw std::runtime_error("lanczos_bounds: repeated breakdown");
}

template <class S>
DosEstimate kpm_dos(const SparseMatrix<S>& A, Interval bounds, int order, int num_samples,
                    std::uint64_t seed) {
    if (order < 2) throw std::invalid_argument("kpm_dos: order must be >= 2");
    if (num_samples < 1) throw std::invalid_argument("kpm_dos: need at least one sample");
    const Index d = A.dim();
    const double alpha = 2.0 / (bounds.hi - bounds.lo);
    const double beta = (bounds.lo + bounds.hi) / (bounds.lo - bounds.hi);

    BlockVector<S> z(d, num_samples);
    z.randomize(seed);
    {
        auto nrm = column_norms(z);
        for (Index i = 0; i < d; ++i)
            for (Index k = 0; k < num_samples; ++k) z(i, k) /= nrm[k];
    }

    const double scale = static_cast<double>(d) / num_samples;
    std::vector<double> mu(static_cast<size_t>(order) + 1, 0.0);
    mu[0] = static_cast<double>(d);

    auto accumulate = [&](int n, const BlockVector<S>& w) {
        auto dots = column_dots(z, w);
        double s = 0.0;
        for (const auto& v : dots) s += ScalarTraits<S>::real(v);
        mu[n] = scale * s;
        if (!std::isfinite(mu[n]) || std::abs(mu[n]) > 4.0 * d)
            throw std::runtime_error("kpm_dos: moment growth indicates spectrum outside bounds");
    };

    BlockVector<S> u = spmmvm(A, z, alpha, beta);
    accumulate(1, u);
    BlockVector<S> w = z;
    recurrence_step(A, u, w, alpha, beta);  // w = 2*h*u - z = T_2 z
    accumulate(2, w);
    BlockVector<S>* pu = &u;
    BlockVector<S>* pw = &w;
    for (int n = 3; n <= order; ++n) {
        std::swap(pu, pw);
        recurrence_step(A, *pu, *pw, alpha, beta);
        accumulate(n, *pw);
        if (n % 128 == 0) {
            const auto nn = column_norms(*pw);
            for (double v : nn)
                if (!std::isfinite(v) || v > 4.0)
                    throw std::runtime_error("kpm_dos: recurrence growth, bounds violated");
        }
    }
    return DosEstimate(std::move(mu), bounds, num_samples, d);
}

template Interval lanczos_bounds<double>(const SparseMatrix<double>&, int, std::uint64_t);
template Interval lanczos_bounds<Complex>(const SparseMatrix<Complex>&, int, std::uint64_t);
template DosEstimate kpm_dos<double>(const SparseMatrix<double>&, Interval, int, int, std::uint64_t);
template DosEstimate kpm_dos<Complex>(const SparseMatrix<Complex>&, Interval, int, int, std::uint64_t);

}  // namespace chebfd
