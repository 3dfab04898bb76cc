#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chebfd/bench.hpp"
#include "chebfd/models.hpp"

using namespace chebfd;

TEST_CASE("arithmetic intensity: reference values for the two lattice models") {
    const auto topi = topi_intensity_params();
    CHECK(intensity_model(topi, 1) == doctest::Approx(146.0 / 340.0).epsilon(1e-12));
    CHECK(intensity_model(topi, 1 << 20) == doctest::Approx(146.0 / 80.0).epsilon(1e-4));
    const auto gra = graphene_intensity_params();
    CHECK(intensity_model(gra, 16) == doctest::Approx(19.0 / 43.0).epsilon(1e-12));
}

TEST_CASE("arithmetic intensity increases with block size toward its limit") {
    const auto p = topi_intensity_params();
    const double limit = 146.0 / 80.0;
    double prev = 0.0;
    for (int nb = 1; nb <= 1024; nb *= 2) {
        const double i = intensity_model(p, nb);
        CHECK(i > prev);
        CHECK(i < limit);
        prev = i;
    }
    CHECK_THROWS(intensity_model(p, 0));
}

TEST_CASE("custom intensity parameters follow the closed form") {
    IntensityParams p;
    p.n_nzr = 7.0;
    p.s_d = 8;
    p.s_i = 4;
    p.f_a = 1;
    p.f_m = 1;
    // numerator: 7*2 + ceil(9/2) + ceil(11/2) = 14 + 5 + 6 = 25
    // denominator at n_b = 2: 7/2*12 + 40 = 82
    CHECK(intensity_model(p, 2) == doctest::Approx(25.0 / 82.0).epsilon(1e-12));
}

TEST_CASE("bandwidth probe refuses cache-resident arrays") {
    CHECK_THROWS_AS(bandwidth_probe(bandwidth_probe_min_bytes() / 8), std::invalid_argument);
}

TEST_CASE("bandwidth probe reports a positive finite rate") {
    const double b = bandwidth_probe(bandwidth_probe_min_bytes(), 5);
    CHECK(b > 0.0);
    CHECK(std::isfinite(b));
    // self-consistency: doubling the array should not change the rate much in
    // the memory-bound regime; warn only, shared machines jitter
    const double b2 = bandwidth_probe(2 * bandwidth_probe_min_bytes(), 5);
    WARN_MESSAGE(std::abs(b2 - b) <= 0.10 * b,
                 "bandwidth drifted more than 10% between sizes: ", b, " vs ", b2);
}

TEST_CASE("filter benchmark: totals are internally consistent") {
    LatticeSpec spec;
    spec.lx = spec.ly = spec.lz = 8;
    spec.disorder = 1.0;
    auto A = topological_insulator(spec);
    auto rep = bench_filter(A, {1, 4}, 32, 50.0 /* fixed bandwidth, skip probe */);
    REQUIRE(rep.points.size() == 2);
    CHECK(rep.traffic_overhead == "not measured");
    for (const auto& p : rep.points) {
        CHECK(p.seconds > 0.0);
        CHECK(p.gflops > 0.0);
        CHECK(p.efficiency > 0.0);
        // Gflop/s x seconds = counted flops within 1%
        CHECK(p.gflops * p.seconds * 1e9 == doctest::Approx(p.flops).epsilon(0.01));
        CHECK(p.roofline == doctest::Approx(p.intensity * 50.0).epsilon(1e-12));
    }
    CHECK_THROWS(bench_filter(A, {1}, 8, 50.0));  // degree below the minimum
}
