#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spinsplit/vec3.hpp"

namespace spinsplit {

enum class BcKind { Periodic, Zero, Fixed };

/// Constant border spins for fixed boundary conditions. Each side holds n
/// vectors indexed by the running interior coordinate (1..n). Border vectors
/// are not required to be unit length.
struct FixedBorder {
    std::vector<Vec3> top;     // row 0,   columns 1..n
    std::vector<Vec3> bottom;  // row n+1, columns 1..n
    std::vector<Vec3> left;    // column 0,   rows 1..n
    std::vector<Vec3> right;   // column n+1, rows 1..n
};

/// Boundary policy for an n x n lattice. Periodic wraps indices (row 0 maps
/// to row n, row n+1 to row 1, same for columns), Zero contributes the zero
/// vector, Fixed looks up a constant border array.
class BoundaryCondition {
  public:
    static BoundaryCondition periodic() { return BoundaryCondition(BcKind::Periodic); }
    static BoundaryCondition zero() { return BoundaryCondition(BcKind::Zero); }
    static BoundaryCondition fixed(FixedBorder border);

    BcKind kind() const { return kind_; }
    const FixedBorder& border() const;

  private:
    explicit BoundaryCondition(BcKind kind) : kind_(kind) {}

    BcKind kind_;
    FixedBorder border_;
};

enum class Parity { Even, Odd };

/// n x n grid of classical spins with 1-based interior indices (i, j) in
/// [1, n]. Indices 0 and n+1 address the boundary and are resolved through
/// the boundary condition, never through interior storage.
///
/// A lattice is a value; copies are independent. Read-only access is safe
/// to share across threads. Mutation is single-writer, except that writes
/// to disjoint same-parity sites never alias.
class SpinLattice {
  public:
    /// Builds a lattice with every interior spin set to `fill`.
    /// Periodic boundaries require even n: with odd n the wrap-around makes
    /// same-parity sites adjacent and parity sweeps would read moving data.
    SpinLattice(int n, BoundaryCondition bc, const Vec3& fill = {0.0, 0.0, 1.0});

    int size() const { return n_; }
    const BoundaryCondition& bc() const { return bc_; }

    const Vec3& spin(int i, int j) const { return spins_[index(i, j)]; }
    void set_spin(int i, int j, const Vec3& v) { spins_[index(i, j)] = v; }

    /// Value at any index pair in [0, n+1]; out-of-interior indices resolve
    /// through the boundary condition.
    Vec3 site(int i, int j) const;

    /// Sum of the four nearest neighbours of interior site (i, j).
    Vec3 neighbor_sum(int i, int j) const;

    const std::vector<Vec3>& data() const { return spins_; }
    std::vector<Vec3>& data() { return spins_; }

  private:
    std::size_t index(int i, int j) const;

    int n_;
    BoundaryCondition bc_;
    std::vector<Vec3> spins_;  // row-major, (i, j) at (i-1)*n + (j-1)
};

/// All sites (i, j) with i+j of the requested parity, row-major. The even
/// and odd lists partition the lattice.
std::vector<std::pair<int, int>> parity_sites(int n, Parity parity);

/// Lattice of independent uniform-on-the-sphere spins, deterministic in the
/// seed. Sampling normalises a triple of standard Gaussians.
SpinLattice random_lattice(int n, std::uint64_t seed, BoundaryCondition bc);

/// Model parameters of the lattice Hamiltonian and its damped/thermostatted
/// extensions. The effective exchange matrix is M = I + diag(anisotropy)/4.
/// `coupling` is the thermostat coupling ratio kappa/N (N = 3 n^2 degrees of
/// freedom); simulations conventionally use 1/n.
struct ModelParams {
    double jk = 1.0;             // exchange integral; > 0 ferro, < 0 antiferro
    Vec3 anisotropy{0.0, 0.0, 0.0};
    double alpha0 = 0.0;         // damping constant / initial thermostat value
    double temperature = 1.0;    // in units with Boltzmann constant 1
    double coupling = 1.0;       // kappa/N ratio of the thermostat

    Vec3 m_diag() const {
        return {1.0 + anisotropy.x / 4.0, 1.0 + anisotropy.y / 4.0, 1.0 + anisotropy.z / 4.0};
    }
};

}  // namespace spinsplit
