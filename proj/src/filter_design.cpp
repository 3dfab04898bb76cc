#include "chebfd/filter_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "chebfd/spectral.hpp"

namespace chebfd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double theta_of(const FilterPolynomial& p, double x) {
    double t = p.alpha * x + p.beta;
    t = std::clamp(t, -1.0, 1.0);
    return std::acos(t);
}

double x_of_theta(const FilterPolynomial& p, double theta) {
    double x = (std::cos(theta) - p.beta) / p.alpha;
    return std::clamp(x, p.bounds.lo, p.bounds.hi);
}

double abs_p_theta(const FilterPolynomial& p, double theta) {
    return std::abs(eval_scalar(p, x_of_theta(p, theta)));
}

// Golden-section search for the extremum of |p| in theta on [lo, hi].
double golden_extremum(const FilterPolynomial& p, double lo, double hi, bool maximize) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = abs_p_theta(p, c), fd = abs_p_theta(p, d);
    for (int it = 0; it < 60 && (b - a) > 1e-13 * kPi; ++it) {
        const bool keep_left = maximize ? (fc > fd) : (fc < fd);
        if (keep_left) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = abs_p_theta(p, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = abs_p_theta(p, d);
        }
    }
    const double best = 0.5 * (a + b);
    double f = abs_p_theta(p, best);
    // keep the bracket endpoints in play; the extremum may sit on a clip boundary
    f = maximize ? std::max({f, abs_p_theta(p, lo), abs_p_theta(p, hi)})
                 : std::min({f, abs_p_theta(p, lo), abs_p_theta(p, hi)});
    return f;
}

struct ScanResult {
    double max_outside;
    double min_inside;
};

// Max of |p| over [lo, hi]: fine scan (argmax) + golden refinement of the
// bracketing sub-interval. Endpoints are always sampled exactly.
double refined_max(const FilterPolynomial& p, double lo, double hi, long n) {
    if (!(hi > lo)) return abs_p_theta(p, lo);
    const double step = (hi - lo) / static_cast<double>(n);
    long best = 0;
    double fbest = -1.0;
    for (long j = 0; j <= n; ++j) {
        const double f = abs_p_theta(p, lo + step * j);
        if (f > fbest) {
            fbest = f;
            best = j;
        }
    }
    const double a = std::max(lo, lo + step * (best - 1));
    const double b = std::min(hi, lo + step * (best + 1));
    return golden_extremum(p, a, b, true);
}

ScanResult scan_extrema(const FilterPolynomial& p, const IntervalConfig& cfg) {
    const Interval is = cfg.search_interval();
    // theta decreases with x
    const double th_nu_lo = theta_of(p, is.lo);   // right end of upper-theta branch
    const double th_nu_hi = theta_of(p, is.hi);   // left branch ends here
    const double th_t_lo = theta_of(p, cfg.target.lo);
    const double th_t_hi = theta_of(p, cfg.target.hi);

    // ---- max of |p| outside the search interval ----
    const long m = std::max<long>(10L * p.degree, 2000);
    const double h = kPi / static_cast<double>(m);
    std::vector<double> xs, thetas;
    xs.reserve(m + 1);
    for (long j = 0; j <= m; ++j) {
        const double th = h * j;
        if (th > th_nu_hi && th < th_nu_lo) continue;  // inside I_S
        thetas.push_back(th);
        xs.push_back(x_of_theta(p, th));
    }
    std::vector<double> vals(xs.size());
    eval_many(p, xs, vals);
    size_t best = 0;
    for (size_t j = 1; j < vals.size(); ++j)
        if (std::abs(vals[j]) > std::abs(vals[best])) best = j;
    double lo = thetas[best] - h, hi = thetas[best] + h;
    // clip the refinement bracket to the out-branch containing the best point
    if (thetas[best] <= th_nu_hi) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, th_nu_hi);
    } else {
        lo = std::max(lo, th_nu_lo);
        hi = std::min(hi, kPi);
    }
    double max_out = golden_extremum(p, lo, hi, true);
    // The global max usually hugs the search-interval edge, where the envelope
    // is steepest; a zero crossing next to the edge can hide that lobe from the
    // coarse grid entirely. Re-scan the two edge-adjacent lobes densely.
    const double lobe = kPi / static_cast<double>(std::max(p.degree, 1));
    const long fine = 256;
    max_out = std::max(max_out,
                       refined_max(p, std::max(0.0, th_nu_hi - 2.0 * lobe), th_nu_hi, fine));
    max_out = std::max(max_out,
                       refined_max(p, th_nu_lo, std::min(kPi, th_nu_lo + 2.0 * lobe), fine));

    // ---- min of |p| inside the target interval ----
    const double span = th_t_lo - th_t_hi;
    const long mt = std::max<long>(200, static_cast<long>(10.0 * p.degree * span / kPi) + 1);
    std::vector<double> xt(mt + 1), vt(mt + 1);
    for (long j = 0; j <= mt; ++j) xt[j] = x_of_theta(p, th_t_hi + span * j / mt);
    eval_many(p, xt, vt);
    size_t bmin = 0;
    for (size_t j = 1; j < vt.size(); ++j)
        if (std::abs(vt[j]) < std::abs(vt[bmin])) bmin = j;
    const double ht = span / mt;
    const double tlo = std::max(th_t_hi, th_t_hi + ht * (static_cast<double>(bmin) - 1));
    const double thi = std::min(th_t_lo, th_t_hi + ht * (static_cast<double>(bmin) + 1));
    const double min_in = golden_extremum(p, tlo, thi, false);

    return {max_out, min_in};
}

// eta with sigma >= 1 mapped to +inf (for grid searches).
double eta_or_inf(const IntervalConfig& cfg, Kernel kernel, int degree, double* sigma_out) {
    const FilterPolynomial p = make_filter(cfg.target, cfg.bounds, degree, kernel);
    const double sigma = damping_factor(p, cfg);
    if (sigma_out) *sigma_out = sigma;
    if (sigma >= 1.0) return kInf;
    return -static_cast<double>(degree) / std::log10(sigma);
}

double default_degree_seed(Kernel kernel) {
    switch (kernel.kind) {
        case KernelKind::None: return 1.5;
        case KernelKind::Fejer: return 4.0;
        case KernelKind::Jackson: return 7.0;
        case KernelKind::Lanczos: return 6.2;
    }
    return 6.0;
}

}  // namespace

void IntervalConfig::validate() const {
    if (!(target.lo < target.hi)) throw std::invalid_argument("IntervalConfig: degenerate target");
    if (!(delta_prime > 0.0)) throw std::invalid_argument("IntervalConfig: delta' must be > 0");
    const Interval is = search_interval();
    if (!(bounds.lo < is.lo && is.hi < bounds.hi))
        throw std::invalid_argument("IntervalConfig: search interval not strictly inside bounds");
}

double damping_factor(const FilterPolynomial& p, const IntervalConfig& cfg) {
    cfg.validate();
    const ScanResult s = scan_extrema(p, cfg);
    if (s.min_inside < 1e-300)
        throw std::runtime_error("damping_factor: filter vanishes on the target interval");
    return s.max_outside / s.min_inside;
}

double quality(int degree, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("quality: sigma must be positive");
    if (sigma >= 1.0) throw std::domain_error("quality: sigma >= 1, filter does not damp");
    return -static_cast<double>(degree) / std::log10(sigma);
}

std::vector<DesignPoint> design_curve(const IntervalConfig& cfg, Kernel kernel,
                                      const std::vector<int>& degrees) {
    std::vector<DesignPoint> out;
    out.reserve(degrees.size());
    for (int np : degrees) {
        double sigma = 0.0;
        const double eta = eta_or_inf(cfg, kernel, np, &sigma);
        out.push_back({np, sigma, eta});
    }
    return out;
}

DesignResult optimize_degree(const IntervalConfig& cfg, Kernel kernel, double epsilon) {
    cfg.validate();
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("optimize_degree: epsilon must be in (0,1)");

    const double seed = default_degree_seed(kernel) * cfg.spectral_half_width() / cfg.delta_prime;

    // geometric walk, ratio 1.1, from well below the seed until clearly past the minimum
    int best_np = 0;
    double best_eta = kInf;
    int rising = 0;
    int prev_np = 0;
    for (double g = std::max(4.0, seed / 8.0); g <= seed * 16.0; g *= 1.1) {
        const int np = std::max(prev_np + 1, static_cast<int>(std::lround(g)));
        prev_np = np;
        const double eta = eta_or_inf(cfg, kernel, np, nullptr);
        if (eta < best_eta) {
            best_eta = eta;
            best_np = np;
            rising = 0;
        } else if (std::isfinite(best_eta)) {
            ++rising;
            if (rising >= 4 && np > seed && eta > 1.2 * best_eta) break;
        }
    }
    if (!std::isfinite(best_eta))
        throw std::runtime_error("optimize_degree: no degree with sigma < 1 in search range");

    // integer refinement inside the bracketing grid cells
    int lo = std::max(2, static_cast<int>(std::lround(best_np / 1.1)));
    int hi = static_cast<int>(std::lround(best_np * 1.1));
    while (hi - lo > 2) {
        const int samples = 9;
        int arg = lo;
        double arg_eta = kInf;
        int prev = -1;
        std::vector<int> pts;
        for (int j = 0; j <= samples; ++j) {
            int np = lo + static_cast<int>(std::lround(static_cast<double>(hi - lo) * j / samples));
            if (np == prev) continue;
            prev = np;
            pts.push_back(np);
            const double eta = eta_or_inf(cfg, kernel, np, nullptr);
            if (eta < arg_eta) {
                arg_eta = eta;
                arg = np;
            }
        }
        best_np = arg;
        best_eta = arg_eta;
        auto it = std::find(pts.begin(), pts.end(), arg);
        const int new_lo = (it == pts.begin()) ? *it : *(it - 1);
        const int new_hi = (it + 1 == pts.end()) ? *it : *(it + 1);
        if (new_hi - new_lo >= hi - lo) break;
        lo = new_lo;
        hi = new_hi;
    }
    for (int np = lo; np <= hi; ++np) {
        const double eta = eta_or_inf(cfg, kernel, np, nullptr);
        if (eta < best_eta) {
            best_eta = eta;
            best_np = np;
        }
    }

    DesignResult r;
    r.np_opt = best_np;
    const FilterPolynomial p = make_filter(cfg.target, cfg.bounds, best_np, kernel);
    r.sigma = damping_factor(p, cfg);
    r.eta_opt = quality(best_np, r.sigma);
    r.predicted_mvms = r.eta_opt * (-std::log10(epsilon));
    r.predicted_iters = static_cast<int>(std::ceil(std::log10(epsilon) / std::log10(r.sigma)));
    return r;
}

ScalingFit fit_scaling_constants(Kernel kernel, double center_fraction) {
    if (!(std::abs(center_fraction) < 1.0))
        throw std::invalid_argument("fit_scaling_constants: |center_fraction| must be < 1");
    const double sw = 1.0;
    const double delta = 1e-3 * sw;
    const double c = center_fraction * sw;
    const std::vector<double> ratios = {0.5, 1.0, 2.0};

    double sum_log_eta0 = 0.0, sum_log_n0 = 0.0;
    std::vector<double> log_eta0s, log_n0s;
    for (double r : ratios) {
        IntervalConfig cfg;
        cfg.target = {c - delta, c + delta};
        cfg.delta_prime = r * delta;
        cfg.bounds = {-sw, sw};
        const DesignResult d = optimize_degree(cfg, kernel);
        const double scale = (sw / delta) * (delta / cfg.delta_prime);
        log_eta0s.push_back(std::log(d.eta_opt / scale));
        log_n0s.push_back(std::log(d.np_opt / scale));
        sum_log_eta0 += log_eta0s.back();
        sum_log_n0 += log_n0s.back();
    }
    ScalingFit fit;
    const double me = sum_log_eta0 / ratios.size();
    const double mn = sum_log_n0 / ratios.size();
    fit.eta0 = std::exp(me);
    fit.n0 = std::exp(mn);
    for (size_t i = 0; i < ratios.size(); ++i)
        fit.max_log_residual = std::max({fit.max_log_residual, std::abs(log_eta0s[i] - me),
                                         std::abs(log_n0s[i] - mn)});
    fit.within_tolerance = fit.max_log_residual <= std::log(1.10);
    return fit;
}

EffortPrediction predict_effort(DosShape shape, double n_target, double n_search,
                                double sw_over_delta, double eta0, double epsilon) {
    if (!(n_target >= 1.0)) throw std::invalid_argument("predict_effort: N_T must be >= 1");
    if (!(n_search > n_target))
        throw std::invalid_argument("predict_effort: N_S must exceed N_T (pole)");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("predict_effort: epsilon must be in (0,1)");
    const double base = eta0 * sw_over_delta * n_target;
    double eta_ns = 0.0;
    if (shape == DosShape::Flat) {
        eta_ns = base / (1.0 - n_target / n_search);
    } else {
        eta_ns = base * std::sqrt(n_search / n_target) / (1.0 - std::sqrt(n_target / n_search));
    }
    return {eta_ns, eta_ns * (-std::log10(epsilon))};
}

double invert_search_margin(const DosEstimate& dos, Interval target, double n_search) {
    const Interval bounds = dos.bounds();
    if (!bounds.contains(target))
        throw std::invalid_argument("invert_search_margin: target outside DOS bounds");
    const double n_target = dos.count(target.lo, target.hi);
    if (n_search <= n_target)
        throw std::runtime_error("invert_search_margin: N_S <= estimated N_T (pole)");

    const double d_max =
        0.999 * std::min(target.lo - bounds.lo, bounds.hi - target.hi);
    auto count_at = [&](double d) { return dos.count(target.lo - d, target.hi + d); };
    double lo = 0.0, hi = d_max;
    if (count_at(d_max) < n_search)
        throw std::runtime_error("invert_search_margin: search space exceeds available spectrum");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = count_at(mid) - n_search;
        if (std::abs(f) <= 1e-6 * n_search || (hi - lo) < 1e-15 * d_max) {
            lo = hi = mid;
            break;
        }
        (f < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ChosenParameters choose_parameters(const DosEstimate& dos, Interval target, double n_search,
                                   Kernel kernel, double epsilon) {
    const double n_target = dos.count(target.lo, target.hi);
    if (n_target < 0.5) throw std::runtime_error("choose_parameters: empty target interval");

    ChosenParameters out;
    out.cfg.target = target;
    out.cfg.delta_prime = invert_search_margin(dos, target, n_search);
    out.cfg.bounds = dos.bounds();
    out.n_target_estimate = n_target;
    out.below_recommended_search_space = n_search < std::ceil(1.25 * n_target);
    out.design = optimize_degree(out.cfg, kernel, epsilon);
    return out;
}

}  // namespace chebfd
