#include "chebfd/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace chebfd {

namespace {

// portable uniform on [-v/2, v/2): fixed bit mapping, independent of the
// standard library's distribution implementation
double box_draw(std::mt19937_64& rng, double v) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;  // [0,1)
    return v * (u - 0.5);
}

struct PauliPair {
    // 2x2 blocks indexed [row][col]
    std::array<std::array<Complex, 2>, 2> m;
};

constexpr Complex I{0.0, 1.0};

std::array<std::array<Complex, 4>, 4> kron(const PauliPair& tau, const PauliPair& sigma) {
    std::array<std::array<Complex, 4>, 4> out{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) out[2 * a + c][2 * b + d] = tau.m[a][b] * sigma.m[c][d];
    return out;
}

}  // namespace

void LatticeSpec::validate(bool needs_z) const {
    if (lx < 1 || ly < 1 || (needs_z && lz < 1))
        throw std::invalid_argument("LatticeSpec: lattice dimensions must be positive");
    if (disorder < 0.0) throw std::invalid_argument("LatticeSpec: disorder strength must be >= 0");
    // graphene re-checks against its 2*Lx*Ly atom count
    if (needs_z && onsite_potential && static_cast<Index>(onsite_potential->size()) != sites())
        throw std::invalid_argument("LatticeSpec: onsite_potential size must equal site count");
}

GammaSet gamma_matrices() {
    const PauliPair s0{{{{1, 0}, {0, 1}}}};
    const PauliPair sx{{{{0, 1}, {1, 0}}}};
    const PauliPair sy{{{{0, -I}, {I, 0}}}};
    const PauliPair sz{{{{1, 0}, {0, -1}}}};
    GammaSet gs;
    gs.g[0] = kron(sz, s0);  // tau_z x sigma_0
    gs.g[1] = kron(sx, s0);  // tau_x x sigma_0
    gs.g[2] = kron(sy, sx);  // tau_y x sigma_x
    gs.g[3] = kron(sy, sy);  // tau_y x sigma_y
    gs.g[4] = kron(sy, sz);  // tau_y x sigma_z
    return gs;
}

SparseMatrix<double> diag_flat(Index dim, Interval bounds) {
    if (dim < 1) throw std::invalid_argument("diag_flat: dimension must be >= 1");
    if (!(bounds.lo < bounds.hi)) throw std::invalid_argument("diag_flat: degenerate bounds");
    std::vector<double> d(static_cast<size_t>(dim));
    for (Index i = 1; i <= dim; ++i)
        d[i - 1] = bounds.lo + (bounds.hi - bounds.lo) * static_cast<double>(i) / (dim + 1);
    return diagonal_matrix(d);
}

SparseMatrix<double> diag_linear(Index dim) {
    if (dim < 2 || dim % 2 != 0) throw std::invalid_argument("diag_linear: dimension must be even");
    const Index half = dim / 2;
    std::vector<double> d(static_cast<size_t>(dim));
    for (Index i = 1; i <= half; ++i) {
        const double lam = std::sqrt((static_cast<double>(i) - 0.5) / static_cast<double>(half));
        d[half - i] = -lam;     // ascending order
        d[half + i - 1] = lam;
    }
    return diagonal_matrix(d);
}

SparseMatrix<Complex> topological_insulator(const LatticeSpec& spec) {
    spec.validate(true);
    const Index lx = spec.lx, ly = spec.ly, lz = spec.lz;
    const Index ns = spec.sites();
    const Index dim = 4 * ns;
    const GammaSet gs = gamma_matrices();

    // hop[j] = -t (G1 - i G^{j+1}) / 2, j = 0,1,2 for x,y,z
    std::array<std::array<std::array<Complex, 4>, 4>, 3> hop;
    for (int j = 0; j < 3; ++j)
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                hop[j][r][c] = -spec.t * 0.5 * (gs.g[1][r][c] - I * gs.g[j + 2][r][c]);

    std::vector<double> vn(static_cast<size_t>(ns));
    {
        std::mt19937_64 rng(spec.seed);
        for (Index n = 0; n < ns; ++n) vn[n] = box_draw(rng, spec.disorder);
    }
    if (spec.onsite_potential)
        for (Index n = 0; n < ns; ++n) vn[n] += (*spec.onsite_potential)[n];

    const bool per_xy = spec.boundary != Boundary::open_all;
    const bool per_z = spec.boundary == Boundary::periodic_all;
    const std::array<bool, 3> periodic{per_xy, per_xy, per_z};
    const std::array<Index, 3> len{lx, ly, lz};

    typename SparseMatrix<Complex>::Builder b(dim);
    for (Index z = 0; z < lz; ++z)
        for (Index y = 0; y < ly; ++y)
            for (Index x = 0; x < lx; ++x) {
                const Index n = x + lx * (y + ly * z);
                // on-site: V_n G0 + 2 G1; G0 is diagonal, G1 off-diagonal
                for (int r = 0; r < 4; ++r) {
                    b.add(4 * n + r, 4 * n + r, vn[n] * gs.g[0][r][r]);
                    for (int c = 0; c < 4; ++c) {
                        const Complex v = 2.0 * gs.g[1][r][c];
                        if (r != c && v != 0.0) b.add(4 * n + r, 4 * n + c, v);
                    }
                }
                const std::array<Index, 3> pos{x, y, z};
                for (int j = 0; j < 3; ++j) {
                    Index pj = pos[j] + 1;
                    if (pj == len[j]) {
                        if (!periodic[j] || len[j] == 1) continue;
                        pj = 0;
                    }
                    std::array<Index, 3> q = pos;
                    q[j] = pj;
                    const Index m = q[0] + lx * (q[1] + ly * q[2]);
                    for (int r = 0; r < 4; ++r)
                        for (int c = 0; c < 4; ++c) {
                            const Complex v = hop[j][r][c];
                            if (v == 0.0) continue;
                            b.add(4 * m + r, 4 * n + c, v);
                            b.add(4 * n + c, 4 * m + r, std::conj(v));
                        }
                }
            }
    return std::move(b).build(true);
}

SparseMatrix<double> graphene(const LatticeSpec& spec) {
    spec.validate(false);
    const Index lx = spec.lx, ly = spec.ly;
    const Index dim = 2 * lx * ly;
    const bool periodic = spec.boundary != Boundary::open_all;

    std::vector<double> vn(static_cast<size_t>(dim));
    {
        std::mt19937_64 rng(spec.seed);
        for (Index n = 0; n < dim; ++n) vn[n] = box_draw(rng, spec.disorder);
    }
    if (spec.onsite_potential) {
        if (static_cast<Index>(spec.onsite_potential->size()) != dim)
            throw std::invalid_argument("graphene: onsite_potential size must equal 2*Lx*Ly");
        for (Index n = 0; n < dim; ++n) vn[n] += (*spec.onsite_potential)[n];
    }

    auto site = [&](Index x, Index y, int sub) { return 2 * (x + lx * y) + sub; };
    typename SparseMatrix<double>::Builder b(dim);
    for (Index y = 0; y < ly; ++y)
        for (Index x = 0; x < lx; ++x) {
            const Index a = site(x, y, 0);
            b.add(a, a, vn[a]);
            b.add(a + 1, a + 1, vn[a + 1]);
            // A(x,y) bonds to B in the same cell and the cells at x-1 and y-1
            auto bond = [&](Index bx, Index by, bool wrap) {
                if (wrap && !periodic) return;
                const Index bb = site((bx + lx) % lx, (by + ly) % ly, 1);
                b.add(a, bb, -spec.t);
                b.add(bb, a, -spec.t);
            };
            bond(x, y, false);
            bond(x - 1, y, x == 0);
            bond(x, y - 1, y == 0);
        }
    return std::move(b).build(true);
}

}  // namespace chebfd
