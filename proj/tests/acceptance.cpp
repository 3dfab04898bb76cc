// End-to-end acceptance suite.  Each criterion prints one PASS/FAIL line;
// the exit code is the number of failed criteria.

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chebfd/bench.hpp"
#include "chebfd/filter_design.hpp"
#include "chebfd/models.hpp"
#include "chebfd/solver.hpp"
#include "chebfd/spectral.hpp"

using namespace chebfd;

namespace {

int failures = 0;

void report(int crit, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", crit, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <class F>
void run(int crit, F&& f) {
    try {
        auto [ok, detail] = f();
        report(crit, ok, detail);
    } catch (const std::exception& e) {
        report(crit, false, std::string("exception: ") + e.what());
    }
}

bool within(double x, double ref, double frac) { return std::abs(x - ref) <= frac * std::abs(ref); }

const Kernel lanczos2{KernelKind::Lanczos, 2};
const Kernel jackson{KernelKind::Jackson, 2};

// ---- shared flat-DOS fixture (criteria 1, 7, 8) ----

const SparseMatrix<double>& flat_matrix() {
    static SparseMatrix<double> a = diag_flat(40000, {-1.0, 1.0});
    return a;
}

const DosEstimate& flat_dos_exact() {
    static DosEstimate dos =
        DosEstimate::from_eigenvalues(flat_matrix().values(), {-1.0, 1.0}, 2000);
    return dos;
}

const Interval flat_target{-2.5e-3, 2.5e-3};  // exactly 100 central eigenvalues

double flat_lanczos_spmvms_ns200 = 0.0;  // cached by criterion 1 for criterion 7

struct TableRow {
    int n_search;
    double np_ref, eta_ref;
    int iters_ref;
    double spmvms_ref;
};

// Run one benchmark row: degree/eta from the design stage on exact moments,
// then a full solve with that degree imposed.
std::pair<bool, std::string> table_row(const SparseMatrix<double>& a, const DosEstimate& dos,
                                       Interval target, const TableRow& row, Kernel kernel,
                                       bool check_eta, double* spmvms_out = nullptr) {
    auto cp = choose_parameters(dos, target, row.n_search, kernel, 1e-12);

    SolverOptions opts;
    opts.target = target;
    opts.epsilon = 1e-12;
    opts.n_search = row.n_search;
    opts.degree = cp.design.np_opt;
    opts.kernel = kernel;
    opts.bounds = {-1.0, 1.0};
    opts.seed = 1;
    opts.collect_weight_density = false;
    auto rep = solve(a, opts);
    if (spmvms_out) *spmvms_out = rep.total_spmvms;

    bool ok = within(cp.design.np_opt, row.np_ref, 0.02);
    if (check_eta) ok = ok && within(cp.design.eta_opt, row.eta_ref, 0.02);
    ok = ok && rep.converged;
    ok = ok && (rep.iterations == row.iters_ref || rep.iterations == row.iters_ref + 1);
    ok = ok && within(rep.total_spmvms, row.spmvms_ref, 0.25);

    std::ostringstream s;
    s << "N_S=" << row.n_search << ": N_p " << cp.design.np_opt << " (ref " << row.np_ref << ")";
    if (check_eta) s << ", eta " << cp.design.eta_opt << " (ref " << row.eta_ref << ")";
    s << ", iters " << rep.iterations << " (ref " << row.iters_ref << ")"
      << ", spMVMs " << rep.total_spmvms << " (ref " << row.spmvms_ref << ")"
      << (rep.converged ? "" : ", NOT converged");
    return {ok, s.str()};
}

std::pair<bool, std::string> criterion1() {
    const std::vector<TableRow> rows = {{150, 4988, 2052, 5, 3.74e6},
                                        {200, 2500, 1023, 5, 2.50e6},
                                        {400, 817, 351, 6, 1.96e6}};
    bool ok = true;
    std::string detail;
    for (const auto& row : rows) {
        double spmvms = 0.0;
        auto [rok, rdet] =
            table_row(flat_matrix(), flat_dos_exact(), flat_target, row, lanczos2, true, &spmvms);
        if (row.n_search == 200) flat_lanczos_spmvms_ns200 = spmvms;
        ok = ok && rok;
        detail += (detail.empty() ? "" : " | ") + rdet;
    }
    return {ok, detail};
}

std::pair<bool, std::string> criterion2() {
    auto a = diag_linear(40000);
    auto dos = DosEstimate::from_eigenvalues(a.values(), {-1.0, 1.0}, 2000);
    const Interval target{-0.05, 0.05};  // exactly 100 central eigenvalues
    const std::vector<TableRow> rows = {{200, 303, 0, 5, 0.30e6}, {400, 124, 0, 6, 0.30e6}};
    bool ok = true;
    std::string detail;
    for (const auto& row : rows) {
        auto [rok, rdet] = table_row(a, dos, target, row, lanczos2, false);
        ok = ok && rok;
        detail += (detail.empty() ? "" : " | ") + rdet;
    }
    return {ok, detail};
}

std::pair<bool, std::string> criterion3() {
    const std::vector<double> centers = {0.0, 0.3, 0.6, 0.9};
    std::vector<ScalingFit> fits;
    for (double c : centers) fits.push_back(fit_scaling_constants(lanczos2, c));

    bool ok = within(fits[0].eta0, 2.58, 0.03) && within(fits[0].n0, 6.23, 0.03) &&
              within(fits[3].eta0, 1.13, 0.03) && within(fits[3].n0, 2.73, 0.03);
    for (size_t i = 1; i < fits.size(); ++i)
        ok = ok && fits[i].eta0 < fits[i - 1].eta0 && fits[i].n0 < fits[i - 1].n0;
    for (const auto& f : fits) ok = ok && f.within_tolerance;

    std::ostringstream s;
    for (size_t i = 0; i < fits.size(); ++i)
        s << "c=" << centers[i] << ": eta0=" << fits[i].eta0 << " N0=" << fits[i].n0
          << (i + 1 < fits.size() ? " | " : "");
    s << " (ref c=0: 2.58/6.23, c=0.9: 1.13/2.73)";
    return {ok, s.str()};
}

std::pair<bool, std::string> criterion4() {
    IntervalConfig cfg{{-1e-3, 1e-3}, 1e-3, {-1.0, 1.0}};
    const int np_l = optimize_degree(cfg, lanczos2).np_opt;
    const int np_j = optimize_degree(cfg, jackson).np_opt;
    const int np_n = optimize_degree(cfg, Kernel{KernelKind::None, 0}).np_opt;
    bool ok = within(np_l, 6251, 0.02) && within(np_j, 7899, 0.02) && within(np_n, 1424, 0.05);
    std::ostringstream s;
    s << "N_p: lanczos2 " << np_l << " (ref 6251), jackson " << np_j
      << " (ref 7899), none " << np_n << " (ref 1424)";
    return {ok, s.str()};
}

std::pair<bool, std::string> criterion5() {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Index d = 120 + (trial * 97) % 281;
        const int k = 5 + trial % 16;
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(d, d);
        typename SparseMatrix<double>::Builder b(d);
        for (Index i = 0; i < d; ++i)
            for (Index j = i; j < d; ++j) {
                const double v = u(rng);
                dense(i, j) = dense(j, i) = v;
                b.add(i, j, v);
                if (j != i) b.add(j, i, v);
            }
        auto a = std::move(b).build();

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        const Index i0 = (d - k) / 2;
        const Interval target{0.5 * (ev(i0 - 1) + ev(i0)), 0.5 * (ev(i0 + k - 1) + ev(i0 + k))};
        const double norm = std::max(std::abs(ev(0)), std::abs(ev(d - 1)));
        const double tol = 1e-10 * norm;

        SolverOptions opts;
        opts.target = target;
        opts.epsilon = 1e-10;
        opts.n_search = 2 * k + 10;
        opts.dos_moments = 500;
        opts.dos_samples = 16;
        opts.seed = 100 + trial;
        auto rep = solve(a, opts);
        if (!rep.converged)
            return {false, "trial " + std::to_string(trial) + ": not converged"};

        std::vector<double> found;
        for (size_t j = 0; j < rep.ritz.values.size(); ++j)
            if (rep.ritz.accepted[j]) found.push_back(rep.ritz.values[j]);
        // every target eigenvalue recovered, nothing extra accepted
        for (Index j = i0; j < i0 + k; ++j) {
            bool hit = false;
            for (double f : found) hit = hit || std::abs(f - ev(j)) <= tol;
            if (!hit)
                return {false, "trial " + std::to_string(trial) + ": missed eigenvalue " +
                                   std::to_string(ev(j))};
        }
        for (double f : found) {
            bool hit = false;
            for (Index j = 0; j < d; ++j) hit = hit || std::abs(f - ev(j)) <= tol;
            if (!hit)
                return {false, "trial " + std::to_string(trial) + ": spurious accepted value " +
                                   std::to_string(f)};
        }
        if (static_cast<int>(found.size()) != k)
            return {false, "trial " + std::to_string(trial) + ": accepted " +
                               std::to_string(found.size()) + " of " + std::to_string(k)};
        checked += k;
    }
    return {true, "20 random matrices, " + std::to_string(checked) +
                      " interior eigenvalues recovered, none missed or spurious"};
}

std::pair<bool, std::string> criterion6() {
    LatticeSpec spec;
    spec.lx = spec.ly = spec.lz = 8;
    spec.disorder = 2.0;
    spec.seed = 42;
    auto a = topological_insulator(spec);

    // exact algebra of the 4x4 onsite/hopping generators
    auto gs = gamma_matrices();
    bool gamma_ok = true;
    for (int x = 0; x < 5; ++x)
        for (int y = x; y < 5; ++y)
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) {
                    Complex anti{};
                    for (int m = 0; m < 4; ++m)
                        anti += gs.g[x][r][m] * gs.g[y][m][c] + gs.g[y][r][m] * gs.g[x][m][c];
                    const Complex want = (x == y && r == c) ? Complex(2.0, 0.0) : Complex{};
                    gamma_ok = gamma_ok && anti == want;
                }

    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(a.dim(), a.dim());
    for (Index i = 0; i < a.dim(); ++i)
        for (Index p = a.row_offsets()[i]; p < a.row_offsets()[i + 1]; ++p)
            dense(i, a.col_indices()[p]) += a.values()[p];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const Index d = a.dim();
    const bool range_ok = ev(0) >= -5.6 && ev(d - 1) <= 5.6;
    const double norm = std::max(std::abs(ev(0)), std::abs(ev(d - 1)));
    const double tol = 1e-10 * norm;

    const int k = 40;
    const Index i0 = (d - k) / 2;
    const Interval target{0.5 * (ev(i0 - 1) + ev(i0)), 0.5 * (ev(i0 + k - 1) + ev(i0 + k))};

    SolverOptions opts;
    opts.target = target;
    opts.epsilon = 1e-10;
    opts.n_search = 100;
    opts.dos_moments = 1000;
    opts.dos_samples = 16;
    opts.seed = 7;
    auto rep = solve(a, opts);

    int matched = 0, spurious = 0;
    std::vector<double> found;
    for (size_t j = 0; j < rep.ritz.values.size(); ++j)
        if (rep.ritz.accepted[j]) found.push_back(rep.ritz.values[j]);
    for (Index j = i0; j < i0 + k; ++j) {
        bool hit = false;
        for (double f : found) hit = hit || std::abs(f - ev(j)) <= tol;
        if (hit) ++matched;
    }
    for (double f : found) {
        bool hit = false;
        for (Index j = 0; j < d; ++j) hit = hit || std::abs(f - ev(j)) <= tol;
        if (!hit) ++spurious;
    }
    const bool ok = gamma_ok && range_ok && rep.converged && matched == k && spurious == 0 &&
                    static_cast<int>(found.size()) == k;
    std::ostringstream s;
    s << "D=" << d << ", spectrum [" << ev(0) << ", " << ev(d - 1) << "], matched " << matched
      << "/" << k << " dense eigenvalues, " << spurious << " spurious"
      << (gamma_ok ? "" : ", gamma algebra FAILED") << (rep.converged ? "" : ", NOT converged");
    return {ok, s.str()};
}

std::pair<bool, std::string> criterion7() {
    double lan = flat_lanczos_spmvms_ns200;
    if (lan == 0.0) {
        TableRow row{200, 2500, 1023, 5, 2.50e6};
        table_row(flat_matrix(), flat_dos_exact(), flat_target, row, lanczos2, false, &lan);
    }
    auto cp = choose_parameters(flat_dos_exact(), flat_target, 200, jackson, 1e-12);
    SolverOptions opts;
    opts.target = flat_target;
    opts.epsilon = 1e-12;
    opts.n_search = 200;
    opts.degree = cp.design.np_opt;
    opts.kernel = jackson;
    opts.bounds = {-1.0, 1.0};
    opts.seed = 1;
    opts.collect_weight_density = false;
    auto rep = solve(flat_matrix(), opts);

    const bool ok = rep.converged && lan <= rep.total_spmvms;
    std::ostringstream s;
    s << "total spMVMs at N_S=200: lanczos2 " << lan << " vs jackson " << rep.total_spmvms;
    return {ok, s.str()};
}

std::pair<bool, std::string> criterion8() {
    auto dos = kpm_dos(flat_matrix(), {-1.0, 1.0}, 2000, 32, 5);
    const double nt = dos.count(flat_target.lo, flat_target.hi);
    const double total = dos.count(-1.0, 1.0);
    const bool ok = std::abs(nt - 100.0) <= 10.0 && within(total, 40000.0, 0.005);
    std::ostringstream s;
    s << "N_T estimate " << nt << " (true 100), integrated DOS " << total << " (true 40000)";
    return {ok, s.str()};
}

std::pair<bool, std::string> criterion9() {
    const double i1 = intensity_model(topi_intensity_params(), 1);
    const double iinf = intensity_model(topi_intensity_params(), 1 << 30);
    const double ig = intensity_model(graphene_intensity_params(), 16);
    const bool ok = std::abs(i1 - 0.4294) <= 5e-5 && std::abs(iinf - 1.825) <= 5e-4 &&
                    std::abs(ig - 0.4419) <= 5e-5;
    std::ostringstream s;
    s.precision(7);
    s << "I_topi(1)=" << i1 << " (ref 0.4294), I_topi(inf)=" << iinf
      << " (ref 1.825), I_graphene(16)=" << ig << " (ref 0.4419)";
    return {ok, s.str()};
}

std::pair<bool, std::string> criterion10() {
    LatticeSpec spec;
    spec.lx = spec.ly = spec.lz = 64;
    spec.disorder = 1.0;
    spec.seed = 3;
    auto a = topological_insulator(spec);
    auto rep = bench_filter(a, {1, 8}, 32, 50.0);
    const double per_col_1 = rep.points[0].seconds / 1.0;
    const double per_col_8 = rep.points[1].seconds / 8.0;
    std::ostringstream s;
    s << "D=" << a.dim() << ": per-column filter time n_b=1 " << per_col_1 << " s, n_b=8 "
      << per_col_8 << " s -> blocking " << (per_col_8 <= per_col_1 ? "helps" : "DOES NOT help")
      << " on this machine (report only)";
    return {true, s.str()};
}

}  // namespace

int main() {
    run(1, criterion1);
    run(2, criterion2);
    run(3, criterion3);
    run(4, criterion4);
    run(5, criterion5);
    run(6, criterion6);
    run(7, criterion7);
    run(8, criterion8);
    run(9, criterion9);
    run(10, criterion10);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
