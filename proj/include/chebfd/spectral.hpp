#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chebfd/filter.hpp"
#include "chebfd/kernels.hpp"

namespace chebfd {

/// Jackson-damped Chebyshev-moment representation of a spectral density on
/// [a,b].  density() evaluates the reconstruction, count() integrates it
/// (closed form via the Chebyshev orthogonality weight).
class ChebSeriesDensity {
  public:
    ChebSeriesDensity() = default;
    ChebSeriesDensity(std::vector<double> moments, Interval bounds);

    const std::vector<double>& moments() const { return moments_; }
    Interval bounds() const { return bounds_; }
    int order() const { return static_cast<int>(moments_.size()) - 1; }

    double density(double lambda) const;
    double count(double lo, double hi) const;
    double total() const { return moments_.empty() ? 0.0 : moments_[0]; }

  private:
    std::vector<double> moments_;   // raw (undamped) moments
    std::vector<double> damped_;    // g_n * mu_n, Jackson
    Interval bounds_;
    double alpha_ = 1.0, beta_ = 0.0;
};

/// DOS estimate from stochastic KPM sampling (or exact eigenvalues).
class DosEstimate {
  public:
    DosEstimate() = default;
    DosEstimate(std::vector<double> moments, Interval bounds, int num_samples, Index dim)
        : series_(std::move(moments), bounds), num_samples_(num_samples), dim_(dim) {}

    /// Deterministic moments from known eigenvalues (tests, analytic models).
    static DosEstimate from_eigenvalues(std::span<const double> eigenvalues, Interval bounds,
                                        int order);

    double density(double lambda) const { return series_.density(lambda); }
    double count(double lo, double hi) const { return series_.count(lo, hi); }
    Interval bounds() const { return series_.bounds(); }
    const std::vector<double>& moments() const { return series_.moments(); }
    int num_samples() const { return num_samples_; }
    Index matrix_dim() const { return dim_; }

  private:
    ChebSeriesDensity series_;
    int num_samples_ = 0;
    Index dim_ = 0;
};

/// Search-space weight density w(lambda) accumulated from filter moments;
/// integrates to N_S over the full interval.
class WeightDensity {
  public:
    WeightDensity() = default;
    WeightDensity(std::vector<double> moments, Interval bounds)
        : series_(std::move(moments), bounds) {}

    double density(double lambda) const { return series_.density(lambda); }
    double count(double lo, double hi) const { return series_.count(lo, hi); }
    double integral() const { return series_.total(); }
    Interval bounds() const { return series_.bounds(); }
    const std::vector<double>& moments() const { return series_.moments(); }

  private:
    ChebSeriesDensity series_;
};

/// Sum per-vector moment arrays from apply_filter(want_moments) into w(lambda).
WeightDensity weight_density(const MomentTable& moments, Interval bounds);

/// Spectral interval from `iters` Lanczos steps with full reorthogonalization,
/// extreme Ritz values inflated outward by 1% of the Ritz spread.
template <class S>
Interval lanczos_bounds(const SparseMatrix<S>& A, int iters, std::uint64_t seed = 1);

/// Stochastic-trace KPM density of states with R Gaussian probe vectors.
template <class S>
DosEstimate kpm_dos(const SparseMatrix<S>& A, Interval bounds, int order, int num_samples,
                    std::uint64_t seed = 1);

/// Integrated eigenvalue count of a DOS estimate over an interval.
double estimate_count(const DosEstimate& dos, Interval interval);

}  // namespace chebfd
