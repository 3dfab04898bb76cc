#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chebfd/filter.hpp"
#include "chebfd/sparse_matrix.hpp"

namespace chebfd {

/// Per-row cost parameters of one blocked recurrence step: N_nzr average
/// nonzeros per row, matrix/index element sizes S_d/S_i in bytes, and
/// flops per scalar add/multiply F_a/F_m.
struct IntensityParams {
    double n_nzr = 0.0;
    int s_d = 8, s_i = 4;
    int f_a = 1, f_m = 1;
};

inline IntensityParams topi_intensity_params() { return {13.0, 16, 4, 2, 6}; }
inline IntensityParams graphene_intensity_params() { return {4.0, 8, 4, 1, 1}; }

/// Flops per byte of a blocked recurrence step at block size n_b assuming
/// perfect vector re-use:
///   I(n_b) = (N_nzr(F_a+F_m) + ceil(9 F_a/2) + ceil(11 F_m/2))
///          / (N_nzr/n_b (S_d+S_i) + 5 S_d)
double intensity_model(const IntensityParams& p, int n_b);

/// Smallest array the bandwidth probe accepts: 8x the last-level-cache
/// estimate (sysconf where available, 32 MiB fallback).
std::size_t bandwidth_probe_min_bytes();

/// Memory bandwidth from a read-only streaming reduction over `size_bytes`
/// of data.  Refuses sizes below bandwidth_probe_min_bytes(); repeats at
/// least `reps` (>= 5) times and reports the median GB/s.
double bandwidth_probe(std::size_t size_bytes, int reps = 5);

struct BenchPoint {
    int n_b = 0;
    double seconds = 0.0;
    double flops = 0.0;       // counted by the intensity-model convention
    double gflops = 0.0;
    double gbs_proxy = 0.0;   // model traffic / time
    double intensity = 0.0;   // I(n_b)
    double roofline = 0.0;    // P* = I(n_b) * b, Gflop/s
    double efficiency = 0.0;  // gflops / roofline
};

struct BenchReport {
    std::vector<BenchPoint> points;
    double bandwidth_gbs = 0.0;
    int degree = 0;
    Index dim = 0;
    std::string traffic_overhead = "not measured";  // needs hardware counters
};

/// Time the filter recurrence over a sweep of block sizes and compare
/// against the roofline bound.  `bandwidth_gbs` = 0 runs bandwidth_probe
/// internally.  Applications repeat until each timing exceeds 0.1 s.
template <class S>
BenchReport bench_filter(const SparseMatrix<S>& a, const std::vector<int>& block_sizes,
                         int degree, double bandwidth_gbs = 0.0);

}  // namespace chebfd
