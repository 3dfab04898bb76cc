#include "chebfd/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unistd.h>

#include "chebfd/spectral.hpp"

namespace chebfd {

namespace {

std::size_t llc_estimate() {
#ifdef _SC_LEVEL3_CACHE_SIZE
    const long l3 = sysconf(_SC_LEVEL3_CACHE_SIZE);
    if (l3 > 0) return static_cast<std::size_t>(l3);
#endif
    return 32u << 20;  // conservative fallback
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double per_row_flops(const IntensityParams& p) {
    return p.n_nzr * (p.f_a + p.f_m) + std::ceil(9.0 * p.f_a / 2.0) + std::ceil(11.0 * p.f_m / 2.0);
}

double per_row_bytes(const IntensityParams& p, int n_b) {
    return p.n_nzr / n_b * (p.s_d + p.s_i) + 5.0 * p.s_d;
}

}  // namespace

double intensity_model(const IntensityParams& p, int n_b) {
    if (n_b < 1) throw std::invalid_argument("intensity_model: block size must be >= 1");
    if (!(p.n_nzr > 0.0)) throw std::invalid_argument("intensity_model: N_nzr must be positive");
    return per_row_flops(p) / per_row_bytes(p, n_b);
}

std::size_t bandwidth_probe_min_bytes() { return 8 * llc_estimate(); }

double bandwidth_probe(std::size_t size_bytes, int reps) {
    reps = std::max(reps, 5);
    const std::size_t min_size = bandwidth_probe_min_bytes();
    if (size_bytes < min_size)
        throw std::invalid_argument("bandwidth_probe: array must be at least 8x the LLC size");
    const std::size_t n = size_bytes / sizeof(double);
    std::vector<double> data(n);
    for (std::size_t i = 0; i < n; ++i) data[i] = 1.0 + 1e-9 * static_cast<double>(i % 1024);

    std::vector<double> rates(reps);
    volatile double sink = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_seconds();
        double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) acc += data[i];
        const double dt = now_seconds() - t0;
        sink = sink + acc;
        rates[r] = static_cast<double>(n * sizeof(double)) / dt / 1e9;
    }
    (void)sink;
    std::nth_element(rates.begin(), rates.begin() + reps / 2, rates.end());
    return rates[reps / 2];
}

template <class S>
BenchReport bench_filter(const SparseMatrix<S>& a, const std::vector<int>& block_sizes,
                         int degree, double bandwidth_gbs) {
    if (degree < 16) throw std::invalid_argument("bench_filter: degree must be >= 16");
    if (block_sizes.empty()) throw std::invalid_argument("bench_filter: empty block-size sweep");

    BenchReport rep;
    rep.degree = degree;
    rep.dim = a.dim();
    rep.bandwidth_gbs =
        bandwidth_gbs > 0.0 ? bandwidth_gbs : bandwidth_probe(bandwidth_probe_min_bytes());

    const Interval bounds = lanczos_bounds(a, 30);
    const double hw = bounds.half_width();
    const Interval target{bounds.center() - 0.05 * hw, bounds.center() + 0.05 * hw};
    const FilterPolynomial filter =
        make_filter(target, bounds, degree, Kernel{KernelKind::Lanczos, 2});

    IntensityParams params{a.avg_nonzeros_per_row(), ScalarTraits<S>::data_bytes, 4,
                           ScalarTraits<S>::flops_add, ScalarTraits<S>::flops_mul};

    for (int nb : block_sizes) {
        if (nb < 1) throw std::invalid_argument("bench_filter: block size must be >= 1");
        BlockVector<S> x(a.dim(), nb);
        x.randomize(7);
        // warm up and size the repetition count off one application
        BlockVector<S> warm = x;
        double t0 = now_seconds();
        apply_filter(a, warm, filter, false);
        double dt = now_seconds() - t0;
        int runs = 1;
        if (dt < 0.1) {
            runs = static_cast<int>(std::ceil(0.1 / std::max(dt, 1e-6)));
            BlockVector<S> y = x;
            t0 = now_seconds();
            for (int r = 0; r < runs; ++r) {
                y = x;
                apply_filter(a, y, filter, false);
            }
            dt = now_seconds() - t0;
        }

        BenchPoint pt;
        pt.n_b = nb;
        pt.seconds = dt / runs;
        pt.flops = per_row_flops(params) * static_cast<double>(a.dim()) * nb * degree;
        pt.gflops = pt.flops / pt.seconds / 1e9;
        const double traffic = per_row_bytes(params, nb) * static_cast<double>(a.dim()) * nb * degree;
        pt.gbs_proxy = traffic / pt.seconds / 1e9;
        pt.intensity = intensity_model(params, nb);
        pt.roofline = pt.intensity * rep.bandwidth_gbs;
        pt.efficiency = pt.gflops / pt.roofline;
        rep.points.push_back(pt);
    }
    return rep;
}

template BenchReport bench_filter<double>(const SparseMatrix<double>&, const std::vector<int>&,
                                          int, double);
template BenchReport bench_filter<Complex>(const SparseMatrix<Complex>&, const std::vector<int>&,
                                           int, double);

}  // namespace chebfd
