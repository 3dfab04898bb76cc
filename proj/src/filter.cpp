#include "chebfd/filter.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace chebfd {

namespace {
constexpr double kPi = std::numbers::pi;

void check_config(Interval target, Interval bounds) {
    if (!(target.lo < target.hi)) throw std::invalid_argument("degenerate target interval");
    if (!(bounds.lo < bounds.hi)) throw std::invalid_argument("degenerate bounds interval");
    if (!bounds.contains(target)) throw std::invalid_argument("target outside bounds");
}
}  // namespace

std::string Kernel::name() const {
    switch (kind) {
        case KernelKind::None: return "none";
        case KernelKind::Fejer: return "fejer";
        case KernelKind::Jackson: return "jackson";
        case KernelKind::Lanczos: return "lanczos" + std::to_string(mu);
    }
    return "?";
}

Kernel Kernel::parse(const std::string& s) {
    if (s == "none") return {KernelKind::None, 0};
    if (s == "fejer") return {KernelKind::Fejer, 0};
    if (s == "jackson") return {KernelKind::Jackson, 0};
    if (s.rfind("lanczos", 0) == 0) {
        int mu = 2;
        if (s.size() > 7) mu = std::stoi(s.substr(7));
        if (mu < 1) throw std::invalid_argument("lanczos kernel needs mu >= 1");
        return {KernelKind::Lanczos, mu};
    }
    throw std::invalid_argument("unknown kernel: " + s);
}

std::vector<double> window_coeffs(Interval target, Interval bounds, int degree) {
    check_config(target, bounds);
    if (degree < 1) throw std::invalid_argument("window_coeffs: degree must be >= 1");
    const double alpha = 2.0 / (bounds.hi - bounds.lo);
    const double beta = (bounds.lo + bounds.hi) / (bounds.lo - bounds.hi);
    auto clamp1 = [](double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); };
    const double tlo = std::acos(clamp1(alpha * target.lo + beta));
    const double thi = std::acos(clamp1(alpha * target.hi + beta));
    std::vector<double> c(static_cast<size_t>(degree) + 1);
    c[0] = (tlo - thi) / kPi;
    for (int n = 1; n <= degree; ++n)
        c[n] = 2.0 / (kPi * n) * (std::sin(n * tlo) - std::sin(n * thi));
    return c;
}

std::vector<double> kernel_coeffs(Kernel kernel, int degree) {
    if (degree < 1) throw std::invalid_argument("kernel_coeffs: degree must be >= 1");
    const int np = degree;
    std::vector<double> g(static_cast<size_t>(np) + 1, 1.0);
    switch (kernel.kind) {
        case KernelKind::None:
            break;
        case KernelKind::Fejer:
            for (int n = 0; n <= np; ++n) g[n] = static_cast<double>(np - n + 1) / (np + 1);
            break;
        case KernelKind::Jackson: {
            const double cot = std::cos(kPi / np) / std::sin(kPi / np);
            for (int n = 0; n <= np; ++n)
                g[n] = ((np - n) * std::cos(kPi * n / np) + std::sin(kPi * n / np) * cot) / np;
            break;
        }
        case KernelKind::Lanczos: {
            if (kernel.mu < 1) throw std::invalid_argument("lanczos kernel needs mu >= 1");
            for (int n = 1; n <= np; ++n) {
                const double x = kPi * n / (np + 1);
                g[n] = std::pow(std::sin(x) / x, kernel.mu);
            }
            break;
        }
    }
    return g;
}

FilterPolynomial make_filter(Interval target, Interval bounds, int degree, Kernel kernel) {
    FilterPolynomial p;
    p.degree = degree;
    p.target = target;
    p.bounds = bounds;
    p.kernel = kernel;
    p.alpha = 2.0 / (bounds.hi - bounds.lo);
    p.beta = (bounds.lo + bounds.hi) / (bounds.lo - bounds.hi);
    auto c = window_coeffs(target, bounds, degree);
    auto g = kernel_coeffs(kernel, degree);
    p.combined.resize(c.size());
    for (size_t n = 0; n < c.size(); ++n) p.combined[n] = g[n] * c[n];
    return p;
}

double eval_scalar(const FilterPolynomial& p, double x) {
    if (x < p.bounds.lo || x > p.bounds.hi)
        throw std::domain_error("eval_scalar: x outside expansion bounds");
    const double t = p.alpha * x + p.beta;
    double tm2 = 1.0, tm1 = t;
    double acc = p.combined[0] + p.combined[1] * t;
    for (int n = 2; n <= p.degree; ++n) {
        const double tn = 2.0 * t * tm1 - tm2;
        acc += p.combined[n] * tn;
        tm2 = tm1;
        tm1 = tn;
    }
    return acc;
}

void eval_many(const FilterPolynomial& p, std::span<const double> x, std::span<double> out) {
    const size_t m = x.size();
    if (out.size() != m) throw std::invalid_argument("eval_many: size mismatch");
    std::vector<double> t(m), tm1(m), tm2(m);
    for (size_t i = 0; i < m; ++i) {
        const double xi = x[i];
        if (xi < p.bounds.lo || xi > p.bounds.hi)
            throw std::domain_error("eval_many: x outside expansion bounds");
        t[i] = p.alpha * xi + p.beta;
        tm2[i] = 1.0;
        tm1[i] = t[i];
        out[i] = p.combined[0] + p.combined[1] * t[i];
    }
    for (int n = 2; n <= p.degree; ++n) {
        const double cn = p.combined[n];
        for (size_t i = 0; i < m; ++i) {
            const double tn = 2.0 * t[i] * tm1[i] - tm2[i];
            out[i] += cn * tn;
            tm2[i] = tm1[i];
            tm1[i] = tn;
        }
    }
}

void dump_filter_table(const FilterPolynomial& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_filter_table: cannot open " + path);
    auto c = window_coeffs(p.target, p.bounds, p.degree);
    auto g = kernel_coeffs(p.kernel, p.degree);
    out << "n,c_n,g_n,gc_n\n";
    out.precision(17);
    for (int n = 0; n <= p.degree; ++n)
        out << n << ',' << c[n] << ',' << g[n] << ',' << p.combined[n] << '\n';
}

}  // namespace chebfd
