#pragma once

#include <vector>

#include "chebfd/filter.hpp"

namespace chebfd {

class DosEstimate;

/// Target interval with search margin delta' inside expansion bounds [a,b].
struct IntervalConfig {
    Interval target;
    double delta_prime = 0.0;
    Interval bounds;

    double delta() const { return target.half_width(); }
    double center() const { return target.center(); }
    double spectral_half_width() const { return bounds.half_width(); }
    Interval search_interval() const { return {target.lo - delta_prime, target.hi + delta_prime}; }
    void validate() const;
};

struct DesignResult {
    int np_opt = 0;
    double eta_opt = 0.0;  // spMVMs per vector per decade of damping
    double sigma = 0.0;
    double predicted_mvms = 0.0;  // per search vector, eta_opt * (-log10 eps)
    int predicted_iters = 0;      // ceil(log10 eps / log10 sigma)
};

/// sigma = max_{x in [a,b]\I_S} |p(x)| / min_{x in I_T} |p(x)|.
/// Dense scan with >= 10 samples per polynomial oscillation plus local
/// golden-section refinement around the extrema.
double damping_factor(const FilterPolynomial& p, const IntervalConfig& cfg);

/// eta = -N_p / log10(sigma); requires 0 < sigma < 1.
double quality(int degree, double sigma);

/// Minimize eta over the polynomial degree: geometric grid (ratio 1.1)
/// bracketing the scaling-law seed, then integer refinement.
DesignResult optimize_degree(const IntervalConfig& cfg, Kernel kernel, double epsilon = 1e-12);

struct DesignPoint {
    int degree;
    double sigma;
    double eta;
};

/// eta(N_p) samples for plotting; degrees with sigma >= 1 get eta = inf.
std::vector<DesignPoint> design_curve(const IntervalConfig& cfg, Kernel kernel,
                                      const std::vector<int>& degrees);

struct ScalingFit {
    double eta0 = 0.0;
    double n0 = 0.0;
    double max_log_residual = 0.0;  // worst |log(sample/fit)|
    bool within_tolerance = true;   // residual <= 10%
};

/// Fit eta^opt = eta0 (S_w/delta)(delta/delta'), N_p^opt = N0 (S_w/delta)(delta/delta')
/// from optimize_degree runs at delta/S_w = 1e-3, delta'/delta in {0.5, 1, 2},
/// target centered at center_fraction * S_w.
ScalingFit fit_scaling_constants(Kernel kernel, double center_fraction);

enum class DosShape { Flat, Linear };

struct EffortPrediction {
    double eta_ns = 0.0;       // eta * N_S
    double mvm_estimate = 0.0; // eta * N_S * (-log10 eps)
};

EffortPrediction predict_effort(DosShape shape, double n_target, double n_search,
                                double sw_over_delta, double eta0, double epsilon);

struct ChosenParameters {
    IntervalConfig cfg;
    DesignResult design;
    double n_target_estimate = 0.0;
    bool below_recommended_search_space = false;  // N_S < 1.25 * N_T
};

/// Search margin delta' such that the DOS count over the symmetric extension
/// of `target` equals n_search (bisection, 1e-6 relative on the count).
double invert_search_margin(const DosEstimate& dos, Interval target, double n_search);

/// Derive the search margin delta' from the DOS (bisection on the count
/// integral) and pick the optimal degree for the resulting configuration.
ChosenParameters choose_parameters(const DosEstimate& dos, Interval target, double n_search,
                                   Kernel kernel, double epsilon = 1e-12);

}  // namespace chebfd
