#include "chebfd/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chebfd {

namespace {

template <class S>
using EigenMat =
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class S>
EigenMat<S> to_eigen(const DenseMatrix<S>& m) {
    return Eigen::Map<const EigenMat<S>>(m.a.data(), m.rows, m.cols);
}

template <class S>
DenseMatrix<S> from_eigen(const EigenMat<S>& e) {
    DenseMatrix<S> m(e.rows(), e.cols());
    Eigen::Map<EigenMat<S>>(m.a.data(), m.rows, m.cols) = e;
    return m;
}

}  // namespace

template <class S>
SvqbResult<S> svqb_orthonormalize(const BlockVector<S>& y, double drop_tol) {
    if (y.width() < 1) throw std::invalid_argument("svqb: empty block");
    DenseMatrix<S> g = gram(y, y);
    EigenMat<S> ge = to_eigen(g);
    ge = S(0.5) * (ge + ge.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<EigenMat<S>> es(ge);
    if (es.info() != Eigen::Success) throw std::runtime_error("svqb: Gram eigensolve failed");
    const auto& lam = es.eigenvalues();
    const double lmax = lam(lam.size() - 1);
    const double trace = lam.sum();
    if (lam(0) < -1e-12 * std::max(trace, 0.0))
        throw std::runtime_error("svqb: Gram matrix indefinite, corrupted input");

    std::vector<int> keep;
    for (int i = 0; i < lam.size(); ++i)
        if (lam(i) > drop_tol * lmax && lam(i) > 0.0) keep.push_back(i);
    if (keep.empty()) throw std::runtime_error("svqb: block numerically zero");

    EigenMat<S> c(y.width(), static_cast<Index>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j)
        c.col(j) = es.eigenvectors().col(keep[j]) / std::sqrt(lam(keep[j]));

    SvqbResult<S> out;
    DenseMatrix<S> cd = from_eigen<S>(c);
    out.q = block_mult_small(y, cd);
    out.rank = static_cast<Index>(keep.size());
    return out;
}

template <class S>
RitzSet<S> rayleigh_ritz(const SparseMatrix<S>& A, const BlockVector<S>& q) {
    const Index nb = q.width();
    BlockVector<S> aq = spmmvm(A, q, 1.0, 0.0);
    DenseMatrix<S> p = gram(q, aq);
    EigenMat<S> pe = to_eigen(p);
    pe = S(0.5) * (pe + pe.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<EigenMat<S>> es(pe);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("rayleigh_ritz: projected eigensolve failed");

    DenseMatrix<S> rot = from_eigen<S>(EigenMat<S>(es.eigenvectors()));
    RitzSet<S> out;
    out.vectors = block_mult_small(q, rot);
    BlockVector<S> av = block_mult_small(aq, rot);
    out.values.resize(nb);
    for (Index k = 0; k < nb; ++k) out.values[k] = es.eigenvalues()(k);
    // residual block: av - v * diag(lambda)
    for_each_chunk(RowChunks(q.dim()), [&](int, Index r0, Index r1) {
        for (Index i = r0; i < r1; ++i) {
            S* ri = av.row(i);
            const S* vi = out.vectors.row(i);
            for (Index k = 0; k < nb; ++k) ri[k] -= out.values[k] * vi[k];
        }
    });
    out.residual_norms = column_norms(av);
    out.accepted.assign(nb, false);
    return out;
}

template <class S>
ConvergenceReport<S> solve(const SparseMatrix<S>& A, const SolverOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    if (opts.epsilon <= 0.0) throw std::invalid_argument("solve: epsilon must be positive");
    if (opts.max_iters < 1) throw std::invalid_argument("solve: max_iters must be >= 1");
    if (!(opts.target.lo < opts.target.hi)) throw std::invalid_argument("solve: degenerate target");

    ConvergenceReport<S> rep;
    rep.bounds = (opts.bounds.lo < opts.bounds.hi) ? opts.bounds
                                                   : lanczos_bounds(A, 30, opts.seed);
    rep.matrix_norm_est = std::max(std::abs(rep.bounds.lo), std::abs(rep.bounds.hi));

    const DosEstimate dos = kpm_dos(A, rep.bounds, opts.dos_moments, opts.dos_samples, opts.seed + 1);
    rep.n_target_estimate = estimate_count(dos, opts.target);
    if (rep.n_target_estimate < 0.5) {  // empty target: immediate success
        rep.converged = true;
        return rep;
    }

    rep.n_search = opts.n_search > 0 ? opts.n_search
                                     : 2 * static_cast<int>(std::ceil(rep.n_target_estimate));
    if (opts.degree > 0) {
        rep.degree = opts.degree;
        // derive delta' for reporting sigma/eta of the imposed degree
        try {
            IntervalConfig cfg;
            cfg.target = opts.target;
            cfg.bounds = rep.bounds;
            cfg.delta_prime = invert_search_margin(dos, opts.target, rep.n_search);
            FilterPolynomial pf =
                make_filter(opts.target, rep.bounds, rep.degree, opts.kernel);
            rep.sigma = damping_factor(pf, cfg);
            rep.eta = rep.sigma < 1.0 ? quality(rep.degree, rep.sigma) : 0.0;
        } catch (const std::exception&) {
            rep.sigma = 0.0;
            rep.eta = 0.0;
        }
    } else {
        ChosenParameters cp =
            choose_parameters(dos, opts.target, rep.n_search, opts.kernel, opts.epsilon);
        rep.degree = cp.design.np_opt;
        rep.sigma = cp.design.sigma;
        rep.eta = cp.design.eta_opt;
    }
    if (rep.degree < 2) throw std::runtime_error("solve: filter degree must be >= 2");

    const FilterPolynomial filter =
        make_filter(opts.target, rep.bounds, rep.degree, opts.kernel);
    const double sqrt_eps = std::sqrt(opts.epsilon);
    // the target was judged non-empty, so claiming convergence needs at least
    // one accepted pair even when the 3-sigma slack swallows the whole estimate
    const double required_count =
        std::max(1.0, std::ceil(rep.n_target_estimate - 3.0 * std::sqrt(rep.n_target_estimate)));

    BlockVector<S> x(A.dim(), rep.n_search);
    x.randomize(opts.seed + 2);
    {
        // unit columns so the collected weight density integrates to N_S
        const auto nrm = column_norms(x);
        for (Index i = 0; i < A.dim(); ++i)
            for (Index k = 0; k < rep.n_search; ++k) x(i, k) /= nrm[k];
    }

    RitzSet<S> ritz;
    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        auto moments = apply_filter(A, x, filter, opts.collect_weight_density);
        if (moments) {
            rep.weight = weight_density(*moments, rep.bounds);
            rep.have_weight = true;
        }

        // SVQB with rank repair: replenish dropped directions with fresh
        // random vectors to keep N_S constant.
        SvqbResult<S> ortho = svqb_orthonormalize(x, 1e-14);
        for (int repair = 0; ortho.rank < rep.n_search && repair < 5; ++repair) {
            BlockVector<S> padded(A.dim(), rep.n_search);
            BlockVector<S> fresh(A.dim(), rep.n_search - ortho.rank);
            fresh.randomize(opts.seed + 1000 + iter * 13 + repair);
            for (Index i = 0; i < A.dim(); ++i) {
                for (Index k = 0; k < ortho.rank; ++k) padded(i, k) = ortho.q(i, k);
                for (Index k = ortho.rank; k < rep.n_search; ++k)
                    padded(i, k) = fresh(i, k - ortho.rank);
            }
            ortho = svqb_orthonormalize(padded, 1e-14);
        }

        ritz = rayleigh_ritz(A, ortho.q);
        const Index nb = ritz.vectors.width();

        int accepted = 0, pending = 0;
        double rmin = 0.0, rmax = 0.0;
        bool any = false;
        for (Index k = 0; k < nb; ++k) {
            if (!opts.target.contains(ritz.values[k])) continue;
            const double r = ritz.residual_norms[k];
            if (r > sqrt_eps) continue;  // ghost for this iteration
            if (r <= opts.epsilon) {
                ritz.accepted[k] = true;
                ++accepted;
            } else {
                ++pending;
            }
            if (!any || r < rmin) rmin = r;
            if (!any || r > rmax) rmax = r;
            any = true;
        }

        rep.iterations = iter;
        rep.total_spmvms = static_cast<double>(iter) * rep.n_search * rep.degree;
        rep.history.push_back({iter, rmin, rmax, accepted, rep.total_spmvms});

        if (pending == 0 && accepted >= required_count) {
            rep.converged = true;
            break;
        }
        x = ritz.vectors;  // block restart from the current Ritz vectors
    }

    rep.ritz = std::move(ritz);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

template SvqbResult<double> svqb_orthonormalize<double>(const BlockVector<double>&, double);
template SvqbResult<Complex> svqb_orthonormalize<Complex>(const BlockVector<Complex>&, double);
template RitzSet<double> rayleigh_ritz<double>(const SparseMatrix<double>&, const BlockVector<double>&);
template RitzSet<Complex> rayleigh_ritz<Complex>(const SparseMatrix<Complex>&, const BlockVector<Complex>&);
template ConvergenceReport<double> solve<double>(const SparseMatrix<double>&, const SolverOptions&);
template ConvergenceReport<Complex> solve<Complex>(const SparseMatrix<Complex>&, const SolverOptions&);

}  // namespace chebfd
