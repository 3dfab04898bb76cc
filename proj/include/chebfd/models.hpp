#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "chebfd/filter.hpp"
#include "chebfd/sparse_matrix.hpp"

namespace chebfd {

enum class Boundary { periodic_xy_open_z, periodic_all, open_all };

/// Lattice description for the tight-binding generators.  For the insulator
/// D = 4*Lx*Ly*Lz (four orbitals per site); for graphene D = 2*Lx*Ly (two-atom
/// honeycomb basis).  Site index runs x fastest, then y, then z; orbitals are
/// innermost, so row = orbitals_per_site * site + orbital.
struct LatticeSpec {
    Index lx = 1, ly = 1, lz = 1;
    double t = 1.0;                  // hopping amplitude
    double disorder = 0.0;           // V: on-site box disorder on [-V/2, V/2]
    std::optional<std::vector<double>> onsite_potential;  // per-site, added on the diagonal
    Boundary boundary = Boundary::periodic_xy_open_z;
    std::uint64_t seed = 1;

    Index sites() const { return lx * ly * lz; }
    void validate(bool needs_z) const;
};

/// The five 4x4 Dirac matrices: G0 = tz x s0, G1 = tx x s0, G2 = ty x sx,
/// G3 = ty x sy, G4 = ty x sz.  Hermitian, squares to I, pairwise
/// anticommuting -- which is all the insulator Hamiltonian's spectral
/// structure depends on.
struct GammaSet {
    std::array<std::array<std::array<Complex, 4>, 4>, 5> g;  // g[a][row][col]
};

GammaSet gamma_matrices();

/// Diagonal matrix with equidistant eigenvalues a + (b-a)*i/(D+1), i = 1..D
/// (flat density of states, no eigenvalue on either bound).
SparseMatrix<double> diag_flat(Index dim, Interval bounds);

/// Diagonal matrix with eigenvalues +-sqrt((i-1/2)/(D/2)), i = 1..D/2, the
/// inverse-CDF quantiles of the linear density rho(lambda) ~ |lambda| on
/// [-1,1].  D must be even.
SparseMatrix<double> diag_linear(Index dim);

/// 3D four-orbital topological-insulator Hamiltonian:
///   H = -t sum_{n,j} (Psi+_{n+e_j} (G1 - i G^{j+1})/2 Psi_n + h.c.)
///       + sum_n Psi+_n (V_n G0 + 2 G1) Psi_n
/// with V_n drawn uniformly from [-V/2, V/2] per site (one scalar shared by
/// the four orbitals) and the optional onsite_potential added via G0.
/// Default boundary is the slab (periodic in x,y; open in z).
SparseMatrix<Complex> topological_insulator(const LatticeSpec& spec);

/// Honeycomb tight-binding matrix: -t on nearest-neighbor bonds, box
/// disorder on the diagonal.  Two atoms per unit cell; periodic by default
/// (set boundary = open_all for a finite flake; lz is ignored).
SparseMatrix<double> graphene(const LatticeSpec& spec);

}  // namespace chebfd
