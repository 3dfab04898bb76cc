#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "chebfd/kernels.hpp"
#include "chebfd/models.hpp"

using namespace chebfd;

namespace {

SparseMatrix<double> random_symmetric(Index d, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SparseMatrix<double>::Builder b(d);
    for (Index i = 0; i < d; ++i)
        for (Index j = i; j < d; ++j) {
            const double v = scale * u(rng);
            b.add(i, j, v);
            if (i != j) b.add(j, i, v);
        }
    return std::move(b).build(true);
}

// dense long-double oracle for Y = (alpha A + beta I) X
template <class S>
BlockVector<S> dense_oracle(const SparseMatrix<S>& A, const BlockVector<S>& X, double alpha,
                            double beta) {
    BlockVector<S> Y(X.dim(), X.width());
    const auto& offs = A.row_offsets();
    const auto& cols = A.col_indices();
    const auto& vals = A.values();
    for (Index i = 0; i < A.dim(); ++i)
        for (Index k = 0; k < X.width(); ++k) {
            S acc{};
            for (Index p = offs[i]; p < offs[i + 1]; ++p) acc += vals[p] * X(cols[p], k);
            Y(i, k) = alpha * acc + beta * X(i, k);
        }
    return Y;
}

template <class S>
double max_rel_diff(const BlockVector<S>& a, const BlockVector<S>& b) {
    double md = 0.0, mn = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        md = std::max(md, std::abs(a.data()[i] - b.data()[i]));
        mn = std::max(mn, std::abs(a.data()[i]));
    }
    return mn > 0 ? md / mn : md;
}

}  // namespace

TEST_CASE("spmmvm identity returns the input block") {
    std::vector<double> ones(4, 1.0);
    auto I4 = diagonal_matrix(ones);
    BlockVector<double> x(4, 3);
    x.randomize(5);
    auto y = spmmvm(I4, x, 1.0, 0.0);
    for (size_t i = 0; i < x.size(); ++i) CHECK(y.data()[i] == x.data()[i]);
}

TEST_CASE("spmmvm diagonal case scales rows by alpha*lambda + beta") {
    std::vector<double> d = {0.5, -1.0, 2.0, 0.0, 3.5};
    auto A = diagonal_matrix(d);
    BlockVector<double> x(5, 2);
    x.randomize(7);
    auto y = spmmvm(A, x, 0.3, -0.7);
    for (Index i = 0; i < 5; ++i)
        for (Index k = 0; k < 2; ++k)
            CHECK(y(i, k) == doctest::Approx((0.3 * d[i] - 0.7) * x(i, k)).epsilon(1e-15));
}

TEST_CASE("spmmvm matches dense column-by-column oracle on random 50x50") {
    auto A = random_symmetric(50, 11);
    BlockVector<double> x(50, 7);
    x.randomize(13);
    auto y = spmmvm(A, x, 1.0, 0.0);
    auto ref = dense_oracle(A, x, 1.0, 0.0);
    CHECK(max_rel_diff(y, ref) <= 1e-13);
}

TEST_CASE("spmmvm with a block equals independent single-vector products") {
    auto A = random_symmetric(64, 17);
    BlockVector<double> x(64, 5);
    x.randomize(19);
    auto y = spmmvm(A, x, 0.8, 0.1);
    for (Index k = 0; k < 5; ++k) {
        BlockVector<double> xk(64, 1);
        xk.set_column(0, x.column(k));
        auto yk = spmmvm(A, xk, 0.8, 0.1);
        for (Index i = 0; i < 64; ++i)
            CHECK(std::abs(y(i, k) - yk(i, 0)) <= 1e-13 * std::abs(yk(i, 0)) + 1e-300);
    }
}

TEST_CASE("fused step with coeff 0 follows the scalar recurrence on a diagonal") {
    std::vector<double> d = {-0.9, -0.3, 0.2, 0.8};
    auto A = diagonal_matrix(d);
    BlockVector<double> u(4, 1), w(4, 1), x(4, 1);
    for (Index i = 0; i < 4; ++i) {
        u(i, 0) = d[i];   // T_1(lambda_i)
        w(i, 0) = 1.0;    // T_0
        x(i, 0) = 0.5;
    }
    auto x_before = x;
    spmmvm_fused(A, u, w, x, 1.0, 0.0, 0.0);
    for (Index i = 0; i < 4; ++i) {
        CHECK(w(i, 0) == doctest::Approx(2.0 * d[i] * d[i] - 1.0).epsilon(1e-15));  // T_2
        CHECK(x(i, 0) == x_before(i, 0));
    }
}

TEST_CASE("fused dots on an eigenvector reproduce Chebyshev values") {
    std::vector<double> d = {-0.7, 0.1, 0.4, 0.9};
    auto A = diagonal_matrix(d);
    const Index pick = 2;
    BlockVector<double> x(4, 1), u(4, 1), w(4, 1);
    x(pick, 0) = 1.0;          // eigenvector e_pick
    u(pick, 0) = d[pick];      // T_1 e
    w(pick, 0) = 1.0;          // T_0 e
    double dot = 0.0;
    spmmvm_fused(A, u, w, x, 1.0, 0.0, 0.0, &dot);
    CHECK(dot == doctest::Approx(2.0 * d[pick] * d[pick] - 1.0).epsilon(1e-14));
}

TEST_CASE("fused kernel equals the unfused three-call sequence") {
    auto A = random_symmetric(64, 23, 0.1);
    BlockVector<double> u(64, 4), w(64, 4), x(64, 4);
    u.randomize(1);
    w.randomize(2);
    x.randomize(3);
    const double alpha = 0.37, beta = -0.21, coeff = 0.83;

    auto w_ref = spmmvm(A, u, 2.0 * alpha, 2.0 * beta);
    block_axpy_scal(w_ref, w, w, 1.0, -1.0, 0.0);  // w_ref = 2(aA+b)u - w
    auto x_ref = x;
    block_axpy_scal(x_ref, w_ref, w_ref, 1.0, coeff, 0.0);
    std::vector<double> dots_ref(4);
    {
        auto dd = column_dots(x, w_ref);
        for (int k = 0; k < 4; ++k) dots_ref[k] = dd[k];
    }

    std::vector<double> dots(4);
    spmmvm_fused(A, u, w, x, alpha, beta, coeff, dots.data());
    CHECK(max_rel_diff(w, w_ref) <= 1e-13);
    CHECK(max_rel_diff(x, x_ref) <= 1e-13);
    for (int k = 0; k < 4; ++k)
        CHECK(dots[k] == doctest::Approx(dots_ref[k]).epsilon(1e-12));
}

TEST_CASE("fused kernel rejects aliased blocks") {
    auto A = random_symmetric(8, 29);
    BlockVector<double> u(8, 2), w(8, 2);
    u.randomize(1);
    w.randomize(2);
    CHECK_THROWS_AS(spmmvm_fused(A, u, w, w, 1.0, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(spmmvm_fused(A, u, u, w, 1.0, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("block_axpy_scal trivial coefficient combinations") {
    BlockVector<double> x(16, 3), u(16, 3), w(16, 3);
    x.randomize(1);
    u.randomize(2);
    w.randomize(3);
    auto x0 = x;
    block_axpy_scal(x, u, w, 1.0, 0.0, 0.0);
    for (size_t i = 0; i < x.size(); ++i) CHECK(x.data()[i] == x0.data()[i]);
    block_axpy_scal(x, u, w, 0.0, 1.0, 0.0);
    for (size_t i = 0; i < x.size(); ++i) CHECK(x.data()[i] == u.data()[i]);
}

TEST_CASE("block_axpy_scal matches the elementwise oracle") {
    BlockVector<double> x(33, 4), u(33, 4), w(33, 4);
    x.randomize(4);
    u.randomize(5);
    w.randomize(6);
    auto x0 = x;
    block_axpy_scal(x, u, w, 0.2, -1.3, 0.7);
    for (size_t i = 0; i < x.size(); ++i) {
        const double ref = 0.2 * x0.data()[i] - 1.3 * u.data()[i] + 0.7 * w.data()[i];
        CHECK(std::abs(x.data()[i] - ref) <= 1e-15 * std::abs(ref) + 1e-300);
    }
}

TEST_CASE("gram of orthonormal columns is the identity") {
    BlockVector<double> x(256, 4);
    for (Index k = 0; k < 4; ++k)
        for (Index i = 0; i < 64; ++i) x(64 * k + i, k) = 1.0 / 8.0;
    auto g = gram(x, x);
    for (Index k = 0; k < 4; ++k)
        for (Index l = 0; l < 4; ++l)
            CHECK(std::abs(g(k, l) - (k == l ? 1.0 : 0.0)) <= 1e-14);
}

TEST_CASE("gram of a column of ones counts the dimension exactly") {
    BlockVector<double> x(1000, 1, 1.0);
    auto g = gram(x, x);
    CHECK(g(0, 0) == 1000.0);
}

TEST_CASE("compensated gram matches a long-double oracle on an ill-conditioned sum") {
    const Index d = 1000000;
    BlockVector<double> x(d, 1, 1e-8);
    x(d / 2, 0) = 1.0;
    // sum the small terms first so the long-double oracle is exact; folding
    // the 1.0 in during the loop loses more than the compensated sum does
    long double ref = 0.0L;
    for (Index i = 0; i < d; ++i)
        if (i != d / 2) ref += static_cast<long double>(x(i, 0)) * x(i, 0);
    ref += 1.0L;
    auto g = gram(x, x);
    const double expected = static_cast<double>(ref);
    CHECK(std::abs(g(0, 0) - expected) <= std::abs(expected) * 1e-15);
}

TEST_CASE("gram(X,X) is Hermitian positive semidefinite") {
    BlockVector<Complex> x(128, 6);
    x.randomize(31);
    auto g = gram(x, x);
    double trace = 0.0;
    for (Index k = 0; k < 6; ++k) trace += g(k, k).real();
    for (Index k = 0; k < 6; ++k)
        for (Index l = 0; l < 6; ++l)
            CHECK(std::abs(g(k, l) - std::conj(g(l, k))) <= 1e-12 * trace);
    // PSD via the quadratic form on random probes
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Complex> v(6);
        for (auto& c : v) c = Complex(nd(rng), nd(rng));
        Complex q{};
        for (Index k = 0; k < 6; ++k)
            for (Index l = 0; l < 6; ++l) q += std::conj(v[k]) * g(k, l) * v[l];
        CHECK(q.real() >= -1e-12 * trace);
    }
}

TEST_CASE("kernels are bitwise deterministic across repeated runs") {
    auto A = random_symmetric(200, 41);
    BlockVector<double> x(200, 6);
    x.randomize(42);
    auto y1 = spmmvm(A, x, 0.9, 0.05);
    auto y2 = spmmvm(A, x, 0.9, 0.05);
    for (size_t i = 0; i < y1.size(); ++i) CHECK(y1.data()[i] == y2.data()[i]);
    auto g1 = gram(x, x);
    auto g2 = gram(x, x);
    for (size_t i = 0; i < g1.a.size(); ++i) CHECK(g1.a[i] == g2.a[i]);
}

TEST_CASE("block_mult_small matches the naive product") {
    BlockVector<double> x(40, 3);
    x.randomize(55);
    DenseMatrix<double> b(3, 2);
    b(0, 0) = 1.0; b(0, 1) = -2.0;
    b(1, 0) = 0.5; b(1, 1) = 3.0;
    b(2, 0) = -1.5; b(2, 1) = 0.25;
    auto y = block_mult_small(x, b);
    for (Index i = 0; i < 40; ++i)
        for (Index j = 0; j < 2; ++j) {
            double ref = 0.0;
            for (Index k = 0; k < 3; ++k) ref += x(i, k) * b(k, j);
            CHECK(y(i, j) == doctest::Approx(ref).epsilon(1e-14));
        }
}

TEST_CASE("hermiticity scan accepts Hermitian and rejects broken matrices") {
    SparseMatrix<Complex>::Builder b(3);
    b.add(0, 1, Complex(1.0, 2.0));
    b.add(1, 0, Complex(1.0, -2.0));
    b.add(2, 2, Complex(5.0, 0.0));
    auto h = std::move(b).build(true);
    CHECK(h.is_hermitian());

    SparseMatrix<Complex>::Builder bad(3);
    bad.add(0, 1, Complex(1.0, 2.0));
    bad.add(1, 0, Complex(1.0, 2.0));  // not the conjugate
    auto nh = std::move(bad).build(true);
    CHECK_FALSE(nh.is_hermitian());
}
