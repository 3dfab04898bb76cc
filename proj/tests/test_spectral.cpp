#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "chebfd/models.hpp"
#include "chebfd/spectral.hpp"

using namespace chebfd;

namespace {

SparseMatrix<double> random_symmetric(Index d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SparseMatrix<double>::Builder b(d);
    for (Index i = 0; i < d; ++i)
        for (Index j = i; j < d; ++j) {
            const double v = u(rng) / std::sqrt(static_cast<double>(d));
            b.add(i, j, v);
            if (i != j) b.add(j, i, v);
        }
    return std::move(b).build(true);
}

}  // namespace

TEST_CASE("Lanczos bounds contain a known flat spectrum without overshooting") {
    auto A = diag_flat(2000, {-1.0, 1.0});
    auto b = lanczos_bounds(A, 30, 1);
    CHECK(b.lo <= -1.0 + 2.0 / 2001);  // smallest eigenvalue
    CHECK(b.hi >= 1.0 - 2.0 / 2001);
    CHECK(b.width() <= 1.05 * 2.0);
}

TEST_CASE("Lanczos bounds contain the dense spectrum of a random matrix") {
    auto A = random_symmetric(300, 7);
    auto b = lanczos_bounds(A, 30, 2);
    // power-iteration style residual check: dense extreme eigenvalues via many
    // Lanczos steps with a different seed serve as the oracle
    auto tight = lanczos_bounds(A, 300, 99);
    CHECK(b.lo <= tight.lo + 0.03 * tight.width());
    CHECK(b.hi >= tight.hi - 0.03 * tight.width());
}

TEST_CASE("Lanczos handles exact invariant subspaces (identity matrix)") {
    std::vector<double> ones(64, 1.0);
    auto I = diagonal_matrix(ones);
    auto b = lanczos_bounds(I, 20, 3);
    CHECK(b.lo <= 1.0);
    CHECK(b.hi >= 1.0);
}

TEST_CASE("stochastic DOS of an equidistant spectrum is flat in the interior") {
    auto A = diag_flat(1000, {-1.0, 1.0});
    auto dos = kpm_dos(A, {-1.05, 1.05}, 2000, 32, 4);
    // pointwise values resolve individual levels at this moment count, so
    // test window counts instead: each interior 0.2-window holds D * 0.1
    for (double lo = -0.8; lo < 0.75; lo += 0.2)
        CHECK(dos.count(lo, lo + 0.2) == doctest::Approx(100.0).epsilon(0.05));
}

TEST_CASE("stochastic DOS integrates to the matrix dimension") {
    auto A = diag_flat(1000, {-1.0, 1.0});
    auto dos = kpm_dos(A, {-1.05, 1.05}, 1000, 16, 5);
    CHECK(dos.count(-1.05, 1.05) == doctest::Approx(1000.0).epsilon(0.005));
}

TEST_CASE("count estimates: halves and additivity") {
    auto A = diag_flat(2000, {-1.0, 1.0});
    auto dos = kpm_dos(A, {-1.02, 1.02}, 2000, 32, 6);
    CHECK(estimate_count(dos, {-1.02, 0.0}) == doctest::Approx(1000.0).epsilon(0.02));
    const double a = estimate_count(dos, {-1.02, -0.3});
    const double b = estimate_count(dos, {-0.3, 0.55});
    const double c = estimate_count(dos, {0.55, 1.02});
    CHECK(a + b + c == doctest::Approx(estimate_count(dos, {-1.02, 1.02})).epsilon(1e-10));
    CHECK_THROWS(estimate_count(dos, {-2.0, 0.0}));
}

TEST_CASE("exact-moment DOS reproduces interval counts of the eigenvalue list") {
    std::vector<double> lam;
    for (int i = 1; i <= 4000; ++i) lam.push_back(-1.0 + 2.0 * i / 4001.0);
    auto dos = DosEstimate::from_eigenvalues(lam, {-1.0, 1.0}, 2000);
    CHECK(dos.count(-1.0, 1.0) == doctest::Approx(4000.0).epsilon(1e-6));
    CHECK(dos.count(-0.025, 0.025) == doctest::Approx(100.0).epsilon(0.02));
}

TEST_CASE("Jackson-damped reconstruction stays nonnegative") {
    auto A = diag_flat(500, {-1.0, 1.0});
    auto dos = kpm_dos(A, {-1.02, 1.02}, 500, 8, 7);
    const double floor = -1e-10 * 500 / 2.04;
    for (int i = 0; i <= 500; ++i) {
        const double lam = -1.02 + 2.04 * i / 500.0;
        CHECK(dos.density(lam) >= floor);
    }
}

TEST_CASE("DOS sampling is reproducible for a fixed seed") {
    auto A = diag_flat(300, {-1.0, 1.0});
    auto d1 = kpm_dos(A, {-1.02, 1.02}, 300, 8, 42);
    auto d2 = kpm_dos(A, {-1.02, 1.02}, 300, 8, 42);
    for (size_t n = 0; n < d1.moments().size(); ++n)
        CHECK(d1.moments()[n] == d2.moments()[n]);
}

TEST_CASE("recurrence growth check fires when the bounds miss the spectrum") {
    auto A = diag_flat(200, {-2.0, 2.0});
    CHECK_THROWS_AS(kpm_dos(A, {-1.0, 1.0}, 2000, 4, 8), std::runtime_error);
}

TEST_CASE("weight density of unit vectors integrates to the block width") {
    auto A = diag_flat(400, {-1.0, 1.0});
    auto p = make_filter({-0.1, 0.1}, {-1.02, 1.02}, 50, {KernelKind::Lanczos, 2});
    const Index ns = 8;
    BlockVector<double> x(400, ns);
    x.randomize(9);
    {
        auto nrm = column_norms(x);
        for (Index i = 0; i < 400; ++i)
            for (Index k = 0; k < ns; ++k) x(i, k) /= nrm[k];
    }
    auto moments = apply_filter(A, x, p, true);
    REQUIRE(moments.has_value());
    auto w = weight_density(*moments, {-1.02, 1.02});
    CHECK(w.integral() == doctest::Approx(static_cast<double>(ns)).epsilon(0.01));
    CHECK(w.count(-1.02, 1.02) == doctest::Approx(static_cast<double>(ns)).epsilon(0.01));
}

TEST_CASE("weight density of a single eigenvector is a unit-mass peak at its eigenvalue") {
    std::vector<double> lam;
    for (int i = 1; i <= 200; ++i) lam.push_back(-1.0 + 2.0 * i / 201.0);
    auto A = diagonal_matrix(lam);
    auto p = make_filter({-0.1, 0.1}, {-1.02, 1.02}, 400, {KernelKind::Lanczos, 2});
    const int pick = 120;
    BlockVector<double> x(200, 1);
    x(pick, 0) = 1.0;
    auto moments = apply_filter(A, x, p, true);
    auto w = weight_density(*moments, {-1.02, 1.02});
    CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-10));
    // mass concentrates around lambda_pick
    CHECK(w.count(lam[pick] - 0.05, lam[pick] + 0.05) == doctest::Approx(1.0).epsilon(0.02));
    // and the kernel-broadened peak sits at the right position
    double best_lam = 0.0, best = -1.0;
    for (int i = 0; i <= 2000; ++i) {
        const double t = -1.0 + 2.0 * i / 2000.0;
        const double v = w.density(t);
        if (v > best) {
            best = v;
            best_lam = t;
        }
    }
    CHECK(best_lam == doctest::Approx(lam[pick]).epsilon(0.02));
}
