// chebfd: interior-eigenvalue solver toolkit command line.
//
// Subcommands:
//   gen     generate a model matrix and write Matrix Market
//   bounds  estimate the spectral interval (Lanczos)
//   dos     KPM density of states, CSV + JSON
//   design  filter-degree optimization / eta(N_p) curves
//   solve   full filtered subspace iteration
//   bench   blocked-kernel benchmark vs roofline model

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <variant>

#include "chebfd/bench.hpp"
#include "chebfd/config.hpp"
#include "chebfd/filter_design.hpp"
#include "chebfd/matrix_market.hpp"
#include "chebfd/models.hpp"
#include "chebfd/solver.hpp"

using json = nlohmann::json;
using namespace chebfd;

namespace {

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 1;
    int threads = 0;
    bool deterministic = false;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config_path, "key=value config file ([section] headers)");
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--threads", c.threads, "worker thread count (0 = CHEBFD_THREADS or OpenMP default)");
    cmd->add_flag("--deterministic", c.deterministic, "single-chunk kernels for bitwise-reproducible runs");
    cmd->add_option("--out", c.out_dir, "output directory");
}

Config load_config(const CommonOpts& c) {
    return c.config_path.empty() ? Config{} : Config::parse_file(c.config_path);
}

void apply_common(const CommonOpts& c) {
    if (c.deterministic)
        set_num_threads(1);
    else if (c.threads > 0)
        set_num_threads(c.threads);
    std::filesystem::create_directories(c.out_dir);
}

std::string out_path(const CommonOpts& c, const std::string& name) {
    return (std::filesystem::path(c.out_dir) / name).string();
}

void write_json(const CommonOpts& c, const std::string& name, const json& j) {
    std::ofstream f(out_path(c, name));
    f << j.dump(2) << "\n";
    if (!f) throw std::runtime_error("failed writing " + name);
}

struct MatrixOpts {
    std::string file;       // Matrix Market input
    std::string model;      // or generator: diag-flat | diag-linear | topi | graphene
    Index dim = 0;
    double lo = -1.0, hi = 1.0;
    std::vector<Index> lattice{8, 8, 8};
    double hopping = 1.0;
    double disorder = 0.0;
    std::string boundary;  // empty = model default
};

void add_matrix_opts(CLI::App* cmd, MatrixOpts& m, bool require) {
    auto* file = cmd->add_option("--matrix", m.file, "input Matrix Market file");
    auto* model = cmd->add_option("--model", m.model,
                                  "generator: diag-flat | diag-linear | topi | graphene");
    if (require) {
        file->excludes(model);
        cmd->callback([&m, cmd]() {
            if (m.file.empty() && m.model.empty())
                throw CLI::ValidationError(cmd->get_name(), "need --matrix or --model");
        });
    }
    cmd->add_option("--dim", m.dim, "dimension (diagonal models)");
    cmd->add_option("--lo", m.lo, "lower bound (diag-flat)");
    cmd->add_option("--hi", m.hi, "upper bound (diag-flat)");
    cmd->add_option("--lattice", m.lattice, "lattice extents Lx Ly [Lz]")->expected(2, 3);
    cmd->add_option("--hopping", m.hopping, "hopping amplitude t");
    cmd->add_option("--disorder", m.disorder, "on-site disorder strength V");
    cmd->add_option("--boundary", m.boundary,
                    "periodic-xy-open-z | periodic-all | open-all (default per model)");
}

Boundary parse_boundary(const std::string& s, Boundary fallback) {
    if (s.empty()) return fallback;
    if (s == "periodic-xy-open-z") return Boundary::periodic_xy_open_z;
    if (s == "periodic-all") return Boundary::periodic_all;
    if (s == "open-all") return Boundary::open_all;
    throw std::runtime_error("unknown boundary '" + s + "'");
}

LatticeSpec lattice_spec(const MatrixOpts& m, std::uint64_t seed) {
    LatticeSpec spec;
    spec.lx = m.lattice.size() > 0 ? m.lattice[0] : 1;
    spec.ly = m.lattice.size() > 1 ? m.lattice[1] : 1;
    spec.lz = m.lattice.size() > 2 ? m.lattice[2] : 1;
    spec.t = m.hopping;
    spec.disorder = m.disorder;
    spec.seed = seed;
    return spec;
}

MatrixVariant make_matrix(const MatrixOpts& m, std::uint64_t seed) {
    if (!m.file.empty()) return read_matrix_market(m.file);
    if (m.model == "diag-flat") {
        if (m.dim < 1) throw std::runtime_error("diag-flat needs --dim");
        return diag_flat(m.dim, {m.lo, m.hi});
    }
    if (m.model == "diag-linear") {
        if (m.dim < 1) throw std::runtime_error("diag-linear needs --dim");
        return diag_linear(m.dim);
    }
    if (m.model == "topi") {
        LatticeSpec spec = lattice_spec(m, seed);
        spec.boundary = parse_boundary(m.boundary, Boundary::periodic_xy_open_z);
        return topological_insulator(spec);
    }
    if (m.model == "graphene") {
        LatticeSpec spec = lattice_spec(m, seed);
        spec.boundary = parse_boundary(m.boundary, Boundary::periodic_all);
        return graphene(spec);
    }
    throw std::runtime_error("unknown model '" + m.model + "'");
}

template <class F>
auto with_matrix(MatrixVariant& mv, F&& f) {
    return std::visit([&](auto& a) { return f(a); }, mv);
}

json matrix_summary(const MatrixVariant& mv) {
    return std::visit(
        [](const auto& a) {
            return json{{"dim", a.dim()},
                        {"nnz", a.nnz()},
                        {"avg_nonzeros_per_row", a.avg_nonzeros_per_row()},
                        {"hermitian", a.hermitian_flag()}};
        },
        mv);
}

json interval_json(Interval iv) { return json{{"lo", iv.lo}, {"hi", iv.hi}}; }

// ------------------------------------------------------------------ gen

int run_gen(const CommonOpts& c, const MatrixOpts& m, const std::string& name) {
    apply_common(c);
    MatrixVariant mv = make_matrix(m, c.seed);
    const std::string file = out_path(c, name);
    std::visit([&](const auto& a) { write_matrix_market(file, a); }, mv);
    json j = matrix_summary(mv);
    j["file"] = file;
    j["model"] = m.model;
    write_json(c, "gen_report.json", j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------ bounds

int run_bounds(const CommonOpts& c, const MatrixOpts& m, int iters) {
    apply_common(c);
    MatrixVariant mv = make_matrix(m, c.seed);
    const Interval b =
        with_matrix(mv, [&](auto& a) { return lanczos_bounds(a, iters, c.seed); });
    json j{{"bounds", interval_json(b)}, {"iterations", iters}};
    std::cout << j.dump(2) << "\n";
    write_json(c, "bounds_report.json", j);
    return 0;
}

// ------------------------------------------------------------------ dos

int run_dos(const CommonOpts& c, const MatrixOpts& m, int moments, int samples, int grid) {
    apply_common(c);
    MatrixVariant mv = make_matrix(m, c.seed);
    const Interval b = with_matrix(mv, [&](auto& a) { return lanczos_bounds(a, 30, c.seed); });
    const DosEstimate dos =
        with_matrix(mv, [&](auto& a) { return kpm_dos(a, b, moments, samples, c.seed); });

    const std::string csv = out_path(c, "dos.csv");
    {
        std::ofstream f(csv);
        f << "lambda,rho\n";
        for (int i = 0; i <= grid; ++i) {
            const double lam = b.lo + b.width() * i / grid;
            f << lam << "," << dos.density(lam) << "\n";
        }
        if (!f) throw std::runtime_error("failed writing dos.csv");
    }
    json j{{"bounds", interval_json(b)},
           {"moments", moments},
           {"samples", samples},
           {"total_count", dos.count(b.lo, b.hi)},
           {"dim", dos.matrix_dim()},
           {"csv", csv}};
    std::cout << j.dump(2) << "\n";
    write_json(c, "dos_report.json", j);
    return 0;
}

// ------------------------------------------------------------------ design

int run_design(const CommonOpts& c, Interval target, double delta_prime, Interval bounds,
               const std::string& kernel_name, double epsilon, bool curve) {
    apply_common(c);
    IntervalConfig cfg{target, delta_prime, bounds};
    const Kernel kernel = Kernel::parse(kernel_name);
    const DesignResult d = optimize_degree(cfg, kernel, epsilon);

    if (curve) {
        std::vector<int> degrees;
        for (double g = d.np_opt / 8.0; g <= d.np_opt * 8.0; g *= 1.15)
            degrees.push_back(std::max(2, static_cast<int>(std::lround(g))));
        auto pts = design_curve(cfg, kernel, degrees);
        std::ofstream f(out_path(c, "design_curve.csv"));
        f << "np,sigma,eta\n";
        for (const auto& p : pts) f << p.degree << "," << p.sigma << "," << p.eta << "\n";
    }
    const FilterPolynomial p = make_filter(target, bounds, d.np_opt, kernel);
    dump_filter_table(p, out_path(c, "filter_table.csv"));

    json j{{"kernel", kernel.name()},
           {"target", interval_json(target)},
           {"delta_prime", delta_prime},
           {"bounds", interval_json(bounds)},
           {"np_opt", d.np_opt},
           {"sigma", d.sigma},
           {"eta_opt", d.eta_opt},
           {"predicted_mvms_per_vector", d.predicted_mvms},
           {"predicted_iterations", d.predicted_iters}};
    std::cout << j.dump(2) << "\n";
    write_json(c, "design_report.json", j);
    return 0;
}

// ------------------------------------------------------------------ solve

template <class S>
json solve_and_report(const SparseMatrix<S>& a, const SolverOptions& opts, const CommonOpts& c,
                      bool dump_vectors) {
    const ConvergenceReport<S> rep = solve(a, opts);

    {
        std::ofstream f(out_path(c, "solve_trace.csv"));
        f << "iteration,min_residual,max_residual,accepted,cumulative_spmvms\n";
        for (const auto& h : rep.history)
            f << h.iteration << "," << h.min_residual << "," << h.max_residual << ","
              << h.accepted_count << "," << h.cumulative_spmvms << "\n";
    }
    {
        std::ofstream f(out_path(c, "ritz_values.csv"));
        f << "lambda,residual,accepted,in_target\n";
        for (size_t k = 0; k < rep.ritz.values.size(); ++k)
            f << rep.ritz.values[k] << "," << rep.ritz.residual_norms[k] << ","
              << (rep.ritz.accepted[k] ? 1 : 0) << ","
              << (opts.target.contains(rep.ritz.values[k]) ? 1 : 0) << "\n";
    }
    if (dump_vectors && rep.ritz.vectors.dim() > 0)
        rep.ritz.vectors.save(out_path(c, "ritz_vectors.cbfd"));
    if (rep.have_weight) {
        std::ofstream f(out_path(c, "weight_density.csv"));
        f << "lambda,w\n";
        const Interval b = rep.weight.bounds();
        for (int i = 0; i <= 2000; ++i) {
            const double lam = b.lo + b.width() * i / 2000;
            f << lam << "," << rep.weight.density(lam) << "\n";
        }
    }

    int accepted = 0;
    std::vector<double> lam;
    for (size_t k = 0; k < rep.ritz.values.size(); ++k)
        if (rep.ritz.accepted[k]) {
            ++accepted;
            lam.push_back(rep.ritz.values[k]);
        }

    return json{{"converged", rep.converged},
                {"iterations", rep.iterations},
                {"total_spmvms", rep.total_spmvms},
                {"n_search", rep.n_search},
                {"degree", rep.degree},
                {"sigma", rep.sigma},
                {"eta", rep.eta},
                {"bounds", interval_json(rep.bounds)},
                {"matrix_norm_estimate", rep.matrix_norm_est},
                {"n_target_estimate", rep.n_target_estimate},
                {"accepted_count", accepted},
                {"accepted_values", lam},
                {"seconds", rep.seconds}};
}

int run_solve(const CommonOpts& c, const MatrixOpts& m, SolverOptions opts,
              const std::string& kernel_name, bool dump_vectors) {
    apply_common(c);
    opts.kernel = Kernel::parse(kernel_name);
    opts.seed = c.seed;
    opts.deterministic = c.deterministic;
    MatrixVariant mv = make_matrix(m, c.seed);
    json j = with_matrix(mv, [&](auto& a) { return solve_and_report(a, opts, c, dump_vectors); });
    std::cout << j.dump(2) << "\n";
    write_json(c, "solve_report.json", j);
    return j["converged"].get<bool>() ? 0 : 3;
}

// ------------------------------------------------------------------ bench

int run_bench(const CommonOpts& c, const MatrixOpts& m, std::vector<int> block_sizes, int degree,
              double bandwidth) {
    apply_common(c);
    if (block_sizes.empty()) block_sizes = {1, 2, 4, 8, 16, 32};
    MatrixVariant mv = make_matrix(m, c.seed);
    const BenchReport rep = with_matrix(
        mv, [&](auto& a) { return bench_filter(a, block_sizes, degree, bandwidth); });

    std::cout << "bandwidth: " << rep.bandwidth_gbs << " GB/s   traffic overhead: "
              << rep.traffic_overhead << "\n";
    std::cout << "  n_b   Gflop/s      GB/s  I(n_b)    P*(Gflop/s)  efficiency\n";
    json pts = json::array();
    for (const auto& p : rep.points) {
        std::printf("%5d %9.3f %9.3f %7.4f %14.3f %11.3f\n", p.n_b, p.gflops, p.gbs_proxy,
                    p.intensity, p.roofline, p.efficiency);
        pts.push_back({{"n_b", p.n_b},
                       {"seconds", p.seconds},
                       {"flops", p.flops},
                       {"gflops", p.gflops},
                       {"gbs_proxy", p.gbs_proxy},
                       {"intensity", p.intensity},
                       {"roofline_gflops", p.roofline},
                       {"efficiency", p.efficiency}});
    }
    json j{{"bandwidth_gbs", rep.bandwidth_gbs},
           {"degree", rep.degree},
           {"dim", rep.dim},
           {"traffic_overhead", rep.traffic_overhead},
           {"points", pts}};
    write_json(c, "bench_report.json", j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chebyshev filter diagonalization toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    MatrixOpts mat;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a model matrix, write Matrix Market");
    std::string gen_name = "matrix.mtx";
    add_common(gen, common);
    add_matrix_opts(gen, mat, false);
    gen->add_option("--name", gen_name, "output file name inside --out");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Lanczos spectral-interval estimate");
    int bounds_iters = 30;
    add_common(bounds, common);
    add_matrix_opts(bounds, mat, true);
    bounds->add_option("--iters", bounds_iters, "Lanczos iterations");

    // dos
    auto* dos = app.add_subcommand("dos", "KPM density of states");
    int dos_moments = 2000, dos_samples = 32, dos_grid = 2000;
    add_common(dos, common);
    add_matrix_opts(dos, mat, true);
    dos->add_option("--moments", dos_moments, "Chebyshev moment count M");
    dos->add_option("--samples", dos_samples, "stochastic probe vectors R");
    dos->add_option("--grid", dos_grid, "CSV evaluation grid points");

    // design
    auto* design = app.add_subcommand("design", "filter degree optimization");
    double d_tlo = 0.0, d_thi = 0.0, d_dp = 0.0, d_blo = -1.0, d_bhi = 1.0, d_eps = 1e-12;
    std::string d_kernel = "lanczos2";
    bool d_curve = false;
    add_common(design, common);
    design->add_option("--target-lo", d_tlo, "target interval lower end")->required();
    design->add_option("--target-hi", d_thi, "target interval upper end")->required();
    design->add_option("--delta-prime", d_dp, "search margin delta'")->required();
    design->add_option("--bounds-lo", d_blo, "expansion interval lower end");
    design->add_option("--bounds-hi", d_bhi, "expansion interval upper end");
    design->add_option("--kernel", d_kernel, "none | fejer | jackson | lanczosN");
    design->add_option("--epsilon", d_eps, "residual tolerance for predictions");
    design->add_flag("--curve", d_curve, "emit eta(N_p) curve CSV");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "filtered subspace iteration");
    SolverOptions sopts;
    std::string s_kernel = "lanczos2";
    bool s_dump = false;
    double s_blo = 0.0, s_bhi = 0.0;
    add_common(solve_cmd, common);
    add_matrix_opts(solve_cmd, mat, true);
    solve_cmd->add_option("--target-lo", sopts.target.lo, "target interval lower end")->required();
    solve_cmd->add_option("--target-hi", sopts.target.hi, "target interval upper end")->required();
    solve_cmd->add_option("--epsilon", sopts.epsilon, "residual tolerance");
    solve_cmd->add_option("--n-search", sopts.n_search, "search-space size (0 = auto)");
    solve_cmd->add_option("--degree", sopts.degree, "filter degree N_p (0 = auto)");
    solve_cmd->add_option("--kernel", s_kernel, "none | fejer | jackson | lanczosN");
    solve_cmd->add_option("--max-iters", sopts.max_iters, "iteration cap");
    solve_cmd->add_option("--dos-moments", sopts.dos_moments, "KPM moments for setup");
    solve_cmd->add_option("--dos-samples", sopts.dos_samples, "KPM probe vectors for setup");
    solve_cmd->add_option("--bounds-lo", s_blo, "known spectral lower bound (with --bounds-hi)");
    solve_cmd->add_option("--bounds-hi", s_bhi, "known spectral upper bound");
    solve_cmd->add_flag("--dump-vectors", s_dump, "write Ritz vectors in binary block format");

    // bench
    auto* bench = app.add_subcommand("bench", "blocked filter kernel benchmark");
    std::vector<int> b_sizes;
    int b_degree = 128;
    double b_bw = 0.0;
    add_common(bench, common);
    add_matrix_opts(bench, mat, true);
    bench->add_option("--block-sizes", b_sizes, "n_b sweep values");
    bench->add_option("--degree", b_degree, "filter degree per timing");
    bench->add_option("--bandwidth", b_bw, "known bandwidth GB/s (skip probe)");

    CLI11_PARSE(app, argc, argv);

    try {
        // config file values fill in anything the flags left at defaults
        if (!common.config_path.empty()) {
            const Config cfg = load_config(common);
            static const std::set<std::string> known = {
                "common.seed",        "common.threads",     "common.deterministic",
                "common.out",         "solve.epsilon",      "solve.n_search",
                "solve.degree",       "solve.kernel",       "solve.max_iters",
                "solve.target_lo",    "solve.target_hi",    "dos.moments",
                "dos.samples",        "bench.degree",       "design.kernel",
                "design.epsilon"};
            cfg.require_known(known);
            auto fill_u64 = [&](const CLI::Option* o, const char* key, std::uint64_t& v) {
                if (!o->count() && cfg.has(key)) v = static_cast<std::uint64_t>(cfg.get_int(key, 0));
            };
            fill_u64(gen->get_option("--seed"), "common.seed", common.seed);
            if (cfg.has("common.threads") && common.threads == 0)
                common.threads = static_cast<int>(cfg.get_int("common.threads", 0));
            if (cfg.has("common.deterministic"))
                common.deterministic = common.deterministic || cfg.get_bool("common.deterministic", false);
            if (cfg.has("common.out") && common.out_dir == ".")
                common.out_dir = cfg.get("common.out");
            if (solve_cmd->parsed()) {
                if (!solve_cmd->get_option("--epsilon")->count())
                    sopts.epsilon = cfg.get_double("solve.epsilon", sopts.epsilon);
                if (!solve_cmd->get_option("--n-search")->count())
                    sopts.n_search = static_cast<int>(cfg.get_int("solve.n_search", sopts.n_search));
                if (!solve_cmd->get_option("--degree")->count())
                    sopts.degree = static_cast<int>(cfg.get_int("solve.degree", sopts.degree));
                if (!solve_cmd->get_option("--kernel")->count())
                    s_kernel = cfg.get("solve.kernel", s_kernel);
                if (!solve_cmd->get_option("--max-iters")->count())
                    sopts.max_iters = static_cast<int>(cfg.get_int("solve.max_iters", sopts.max_iters));
                sopts.dos_moments = static_cast<int>(cfg.get_int("dos.moments", sopts.dos_moments));
                sopts.dos_samples = static_cast<int>(cfg.get_int("dos.samples", sopts.dos_samples));
            }
            if (dos->parsed()) {
                dos_moments = static_cast<int>(cfg.get_int("dos.moments", dos_moments));
                dos_samples = static_cast<int>(cfg.get_int("dos.samples", dos_samples));
            }
            if (design->parsed()) {
                if (!design->get_option("--kernel")->count())
                    d_kernel = cfg.get("design.kernel", d_kernel);
                d_eps = cfg.get_double("design.epsilon", d_eps);
            }
            if (bench->parsed()) b_degree = static_cast<int>(cfg.get_int("bench.degree", b_degree));
        }

        if (gen->parsed()) return run_gen(common, mat, gen_name);
        if (bounds->parsed()) return run_bounds(common, mat, bounds_iters);
        if (dos->parsed()) return run_dos(common, mat, dos_moments, dos_samples, dos_grid);
        if (design->parsed())
            return run_design(common, {d_tlo, d_thi}, d_dp, {d_blo, d_bhi}, d_kernel, d_eps,
                              d_curve);
        if (solve_cmd->parsed()) {
            sopts.bounds = {s_blo, s_bhi};
            return run_solve(common, mat, sopts, s_kernel, s_dump);
        }
        if (bench->parsed()) return run_bench(common, mat, b_sizes, b_degree, b_bw);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
