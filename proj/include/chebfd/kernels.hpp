#pragma once

#include <stdexcept>
#include <vector>

#include "chebfd/block_vector.hpp"
#include "chebfd/parallel.hpp"
#include "chebfd/sparse_matrix.hpp"

namespace chebfd {

/// Compensated (Kahan) accumulator; used for all long scalar-product sums.
template <class T>
struct Kahan {
    T sum{};
    T comp{};
    void add(T v) {
        T y = v - comp;
        T t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

/// Small dense row-major matrix for Gram matrices and subspace rotations.
template <class S>
struct DenseMatrix {
    Index rows = 0, cols = 0;
    std::vector<S> a;

    DenseMatrix() = default;
    DenseMatrix(Index r, Index c) : rows(r), cols(c), a(static_cast<size_t>(r * c), S{}) {}
    S& operator()(Index i, Index j) { return a[static_cast<size_t>(i * cols + j)]; }
    const S& operator()(Index i, Index j) const { return a[static_cast<size_t>(i * cols + j)]; }
};

namespace detail {
template <class S>
void check_same_shape(const BlockVector<S>& x, const BlockVector<S>& y) {
    if (x.dim() != y.dim() || x.width() != y.width())
        throw std::invalid_argument("block vector shape mismatch");
}
}  // namespace detail

/// Y = (alpha*A + beta*I) * X, all n_b columns in one sweep.
template <class S>
BlockVector<S> spmmvm(const SparseMatrix<S>& A, const BlockVector<S>& X, double alpha, double beta) {
    if (A.dim() != X.dim()) throw std::invalid_argument("spmmvm: dimension mismatch");
    const Index nb = X.width();
    BlockVector<S> Y(X.dim(), nb);
    const auto& offs = A.row_offsets();
    const auto& cols = A.col_indices();
    const auto& vals = A.values();
    for_each_chunk(RowChunks(A.dim()), [&](int, Index r0, Index r1) {
        for (Index i = r0; i < r1; ++i) {
            S* yi = Y.row(i);
            for (Index p = offs[i]; p < offs[i + 1]; ++p) {
                const S av = vals[p] * alpha;
                const S* xj = X.row(cols[p]);
                for (Index k = 0; k < nb; ++k) yi[k] += av * xj[k];
            }
            if (beta != 0.0) {
                const S* xi = X.row(i);
                for (Index k = 0; k < nb; ++k) yi[k] += beta * xi[k];
            }
        }
    });
    return Y;
}

/// Fused recurrence step: W <- 2*(alpha*A + beta*I)*U - W, then X <- X + coeff*W.
/// If dots != nullptr it receives d_k = <x_k(before update), w_k(after update)>,
/// accumulated with Kahan compensation in fixed chunk order.
template <class S>
void spmmvm_fused(const SparseMatrix<S>& A, const BlockVector<S>& U, BlockVector<S>& W,
                  BlockVector<S>& X, double alpha, double beta, double coeff, S* dots = nullptr) {
    detail::check_same_shape(U, W);
    detail::check_same_shape(U, X);
    if (A.dim() != U.dim()) throw std::invalid_argument("spmmvm_fused: dimension mismatch");
    if (U.data() == W.data() || U.data() == X.data() || W.data() == X.data())
        throw std::invalid_argument("spmmvm_fused: U, W, X must not alias");
    const Index nb = U.width();
    const auto& offs = A.row_offsets();
    const auto& cols = A.col_indices();
    const auto& vals = A.values();
    const RowChunks chunks(A.dim());
    std::vector<Kahan<S>> partial;
    if (dots) partial.assign(static_cast<size_t>(chunks.count) * nb, Kahan<S>{});
    for_each_chunk(chunks, [&](int c, Index r0, Index r1) {
        std::vector<S> tmp(static_cast<size_t>(nb));
        Kahan<S>* acc = dots ? partial.data() + static_cast<size_t>(c) * nb : nullptr;
        for (Index i = r0; i < r1; ++i) {
            for (Index k = 0; k < nb; ++k) tmp[k] = S{};
            for (Index p = offs[i]; p < offs[i + 1]; ++p) {
                const S av = vals[p] * (2.0 * alpha);
                const S* uj = U.row(cols[p]);
                for (Index k = 0; k < nb; ++k) tmp[k] += av * uj[k];
            }
            S* wi = W.row(i);
            S* xi = X.row(i);
            const S* ui = U.row(i);
            for (Index k = 0; k < nb; ++k) {
                const S wnew = tmp[k] + (2.0 * beta) * ui[k] - wi[k];
                wi[k] = wnew;
                if (acc) acc[k].add(ScalarTraits<S>::conj(xi[k]) * wnew);
                xi[k] += coeff * wnew;
            }
        }
    });
    if (dots) {
        for (Index k = 0; k < nb; ++k) {
            Kahan<S> total;
            for (int c = 0; c < chunks.count; ++c)
                total.add(partial[static_cast<size_t>(c) * nb + k].sum);
            dots[k] = total.sum;
        }
    }
}

/// Bare recurrence step without accumulation: W <- 2*(alpha*A + beta*I)*U - W.
template <class S>
void recurrence_step(const SparseMatrix<S>& A, const BlockVector<S>& U, BlockVector<S>& W,
                     double alpha, double beta) {
    detail::check_same_shape(U, W);
    if (A.dim() != U.dim()) throw std::invalid_argument("recurrence_step: dimension mismatch");
    if (U.data() == W.data()) throw std::invalid_argument("recurrence_step: U and W must not alias");
    const Index nb = U.width();
    const auto& offs = A.row_offsets();
    const auto& cols = A.col_indices();
    const auto& vals = A.values();
    for_each_chunk(RowChunks(A.dim()), [&](int, Index r0, Index r1) {
        std::vector<S> tmp(static_cast<size_t>(nb));
        for (Index i = r0; i < r1; ++i) {
            for (Index k = 0; k < nb; ++k) tmp[k] = S{};
            for (Index p = offs[i]; p < offs[i + 1]; ++p) {
                const S av = vals[p] * (2.0 * alpha);
                const S* uj = U.row(cols[p]);
                for (Index k = 0; k < nb; ++k) tmp[k] += av * uj[k];
            }
            S* wi = W.row(i);
            const S* ui = U.row(i);
            for (Index k = 0; k < nb; ++k) wi[k] = tmp[k] + (2.0 * beta) * ui[k] - wi[k];
        }
    });
}

/// X <- c0*X + c1*U + c2*W.
template <class S>
void block_axpy_scal(BlockVector<S>& X, const BlockVector<S>& U, const BlockVector<S>& W,
                     double c0, double c1, double c2) {
    detail::check_same_shape(X, U);
    detail::check_same_shape(X, W);
    const Index nb = X.width();
    for_each_chunk(RowChunks(X.dim()), [&](int, Index r0, Index r1) {
        for (Index i = r0; i < r1; ++i) {
            S* xi = X.row(i);
            const S* ui = U.row(i);
            const S* wi = W.row(i);
            for (Index k = 0; k < nb; ++k) xi[k] = c0 * xi[k] + c1 * ui[k] + c2 * wi[k];
        }
    });
}

/// G(k,l) = <x_k, y_l>, Kahan-compensated, fixed accumulation order.
template <class S>
DenseMatrix<S> gram(const BlockVector<S>& X, const BlockVector<S>& Y) {
    if (X.dim() != Y.dim()) throw std::invalid_argument("gram: dimension mismatch");
    const Index nx = X.width(), ny = Y.width();
    const RowChunks chunks(X.dim());
    std::vector<Kahan<S>> partial(static_cast<size_t>(chunks.count) * nx * ny);
    for_each_chunk(chunks, [&](int c, Index r0, Index r1) {
        Kahan<S>* acc = partial.data() + static_cast<size_t>(c) * nx * ny;
        for (Index i = r0; i < r1; ++i) {
            const S* xi = X.row(i);
            const S* yi = Y.row(i);
            for (Index k = 0; k < nx; ++k) {
                const S xk = ScalarTraits<S>::conj(xi[k]);
                Kahan<S>* row = acc + k * ny;
                for (Index l = 0; l < ny; ++l) row[l].add(xk * yi[l]);
            }
        }
    });
    DenseMatrix<S> G(nx, ny);
    for (Index k = 0; k < nx; ++k)
        for (Index l = 0; l < ny; ++l) {
            Kahan<S> total;
            for (int c = 0; c < chunks.count; ++c)
                total.add(partial[static_cast<size_t>(c) * nx * ny + k * ny + l].sum);
            G(k, l) = total.sum;
        }
    return G;
}

/// Column-wise dots d_k = <x_k, y_k>; plain chunked accumulation (moment collection).
template <class S>
std::vector<S> column_dots(const BlockVector<S>& X, const BlockVector<S>& Y) {
    detail::check_same_shape(X, Y);
    const Index nb = X.width();
    const RowChunks chunks(X.dim());
    std::vector<S> partial(static_cast<size_t>(chunks.count) * nb, S{});
    for_each_chunk(chunks, [&](int c, Index r0, Index r1) {
        S* acc = partial.data() + static_cast<size_t>(c) * nb;
        for (Index i = r0; i < r1; ++i) {
            const S* xi = X.row(i);
            const S* yi = Y.row(i);
            for (Index k = 0; k < nb; ++k) acc[k] += ScalarTraits<S>::conj(xi[k]) * yi[k];
        }
    });
    std::vector<S> d(static_cast<size_t>(nb), S{});
    for (Index k = 0; k < nb; ++k)
        for (int c = 0; c < chunks.count; ++c) d[k] += partial[static_cast<size_t>(c) * nb + k];
    return d;
}

/// Y = X * B with a small dense matrix B (X.width x B.cols).
template <class S>
BlockVector<S> block_mult_small(const BlockVector<S>& X, const DenseMatrix<S>& B) {
    if (X.width() != B.rows) throw std::invalid_argument("block_mult_small: shape mismatch");
    BlockVector<S> Y(X.dim(), B.cols);
    for_each_chunk(RowChunks(X.dim()), [&](int, Index r0, Index r1) {
        for (Index i = r0; i < r1; ++i) {
            const S* xi = X.row(i);
            S* yi = Y.row(i);
            for (Index k = 0; k < X.width(); ++k) {
                const S xk = xi[k];
                const S* bk = &B(k, 0);
                for (Index j = 0; j < B.cols; ++j) yi[j] += xk * bk[j];
            }
        }
    });
    return Y;
}

template <class S>
std::vector<double> column_norms(const BlockVector<S>& X) {
    auto d = column_dots(X, X);
    std::vector<double> n(d.size());
    for (size_t k = 0; k < d.size(); ++k) n[k] = std::sqrt(ScalarTraits<S>::real(d[k]));
    return n;
}

}  // namespace chebfd
