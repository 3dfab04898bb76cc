#pragma once

#include <cstdint>
#include <vector>

#include "chebfd/filter.hpp"
#include "chebfd/filter_design.hpp"
#include "chebfd/spectral.hpp"

namespace chebfd {

struct SolverOptions {
    Interval target;
    double epsilon = 1e-10;       // absolute residual tolerance
    int n_search = 0;             // 0 = auto: 2 * ceil(N_T estimate)
    int degree = 0;               // 0 = auto via filter design
    Kernel kernel{KernelKind::Lanczos, 2};
    int max_iters = 40;
    std::uint64_t seed = 1;
    int dos_moments = 2000;
    int dos_samples = 32;
    bool deterministic = true;
    Interval bounds{0.0, 0.0};    // lo >= hi = auto via Lanczos
    bool collect_weight_density = true;
};

template <class S>
struct RitzSet {
    std::vector<double> values;          // ascending
    BlockVector<S> vectors;              // orthonormal columns
    std::vector<double> residual_norms;  // ||A v - lambda v||
    std::vector<bool> accepted;
};

struct IterationStat {
    int iteration = 0;
    double min_residual = 0.0;  // over non-ghost target Ritz pairs
    double max_residual = 0.0;
    int accepted_count = 0;
    double cumulative_spmvms = 0.0;
};

template <class S>
struct ConvergenceReport {
    bool converged = false;
    int iterations = 0;
    double total_spmvms = 0.0;  // N_iter * N_S * N_p (filter core only)
    int n_search = 0;
    int degree = 0;
    double sigma = 0.0;
    double eta = 0.0;
    Interval bounds;
    double matrix_norm_est = 0.0;
    double n_target_estimate = 0.0;
    RitzSet<S> ritz;
    std::vector<IterationStat> history;
    WeightDensity weight;
    bool have_weight = false;
    double seconds = 0.0;
};

/// SVQB: eigendecompose the Kahan Gram matrix, drop directions below
/// drop_tol relative to the largest eigenvalue, return Q = Y V L^{-1/2}.
template <class S>
struct SvqbResult {
    BlockVector<S> q;
    Index rank = 0;
};

template <class S>
SvqbResult<S> svqb_orthonormalize(const BlockVector<S>& y, double drop_tol = 1e-14);

/// Rayleigh-Ritz projection of A onto span(Q); Q must be orthonormal.
template <class S>
RitzSet<S> rayleigh_ritz(const SparseMatrix<S>& A, const BlockVector<S>& q);

/// Full ChebFD iteration: filter, SVQB (with rank repair), Rayleigh-Ritz,
/// ghost rejection, convergence check, block restart.
template <class S>
ConvergenceReport<S> solve(const SparseMatrix<S>& A, const SolverOptions& opts);

}  // namespace chebfd
