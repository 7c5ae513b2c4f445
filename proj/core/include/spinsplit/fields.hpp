#pragma once

#include "spinsplit/lattice.hpp"
#include "spinsplit/vec3.hpp"

namespace spinsplit {

/// Effective field at interior site (i, j):
///
///   B_ij = -jk * M * sum of nearest neighbours,   M = I + diag(anisotropy)/4.
///
/// This is the gradient of total_energy with respect to the spin at (i, j)
/// (exactly so for periodic boundaries and at interior sites away from the
/// border for the other kinds). It does not depend on the spin at (i, j)
/// itself; the on-site term of the discrete Laplacian drops out of the
/// dynamics because z x z = 0.
Vec3 effective_field(const SpinLattice& lat, const ModelParams& p, int i, int j);

/// Total lattice energy
///
///   H = -(jk / 2) * sum_ij < z_ij, M * neighbor_sum(i, j) >
///
/// with neighbours resolved through the boundary condition. For periodic
/// boundaries every bond is counted exactly twice by the double sum; for
/// zero/fixed boundaries each interior-border bond appears once and thus
/// carries weight 1/2. Accumulation is row-major sequential so repeated
/// evaluations are bit-identical.
double total_energy(const SpinLattice& lat, const ModelParams& p);

/// Maximum Euclidean norm of the discrete Laplacian, i.e.
/// max_ij | neighbor_sum(i, j) - 4 z_ij |. A roughness measure: zero for a
/// constant periodic lattice, large for checkerboard-like states.
double max_laplacian_norm(const SpinLattice& lat);

}  // namespace spinsplit
