#include "spinsplit/lattice.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace spinsplit {

BoundaryCondition BoundaryCondition::fixed(FixedBorder border) {
    const std::size_t n = border.top.size();
    if (border.bottom.size() != n || border.left.size() != n || border.right.size() != n) {
        throw std::invalid_argument("fixed boundary: all four sides must have equal length");
    }
    BoundaryCondition bc(BcKind::Fixed);
    bc.border_ = std::move(border);
    return bc;
}

const FixedBorder& BoundaryCondition::border() const {
    if (kind_ != BcKind::Fixed) {
        throw std::logic_error("border() called on non-fixed boundary condition");
    }
    return border_;
}

SpinLattice::SpinLattice(int n, BoundaryCondition bc, const Vec3& fill)
    : n_(n), bc_(std::move(bc)), spins_(static_cast<std::size_t>(n) * n, fill) {
    if (n < 2) {
        throw std::invalid_argument("lattice size must be at least 2, got " + std::to_string(n));
    }
    if (bc_.kind() == BcKind::Periodic && n % 2 != 0) {
        throw std::invalid_argument("periodic boundaries require even lattice size, got " +
                                    std::to_string(n));
    }
    if (bc_.kind() == BcKind::Fixed && bc_.border().top.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("fixed boundary arrays must have length n");
    }
}

std::size_t SpinLattice::index(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > n_) {
        throw std::out_of_range("lattice index (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") outside interior of size " + std::to_string(n_));
    }
    return static_cast<std::size_t>(i - 1) * n_ + (j - 1);
}

Vec3 SpinLattice::site(int i, int j) const {
    if (i >= 1 && i <= n_ && j >= 1 && j <= n_) {
        return spins_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)];
    }
    switch (bc_.kind()) {
        case BcKind::Periodic: {
            const int pi = i == 0 ? n_ : (i == n_ + 1 ? 1 : i);
            const int pj = j == 0 ? n_ : (j == n_ + 1 ? 1 : j);
            return spins_[index(pi, pj)];
        }
        case BcKind::Zero:
            return {0.0, 0.0, 0.0};
        case BcKind::Fixed: {
            const FixedBorder& b = bc_.border();
            if (i == 0) return b.top[static_cast<std::size_t>(j - 1)];
            if (i == n_ + 1) return b.bottom[static_cast<std::size_t>(j - 1)];
            if (j == 0) return b.left[static_cast<std::size_t>(i - 1)];
            if (j == n_ + 1) return b.right[static_cast<std::size_t>(i - 1)];
            throw std::out_of_range("boundary lookup outside the one-cell halo");
        }
    }
    throw std::logic_error("unreachable boundary kind");
}

Vec3 SpinLattice::neighbor_sum(int i, int j) const {
    (void)index(i, j);  // enforce the interior contract
    return site(i, j - 1) + site(i, j + 1) + site(i - 1, j) + site(i + 1, j);
}

std::vector<std::pair<int, int>> parity_sites(int n, Parity parity) {
    std::vector<std::pair<int, int>> sites;
    sites.reserve(static_cast<std::size_t>(n) * n / 2 + n);
    const int want = parity == Parity::Even ? 0 : 1;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if ((i + j) % 2 == want) sites.emplace_back(i, j);
        }
    }
    return sites;
}

SpinLattice random_lattice(int n, std::uint64_t seed, BoundaryCondition bc) {
    SpinLattice lat(n, std::move(bc));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            Vec3 v;
            double r = 0.0;
            do {
                v = {gauss(rng), gauss(rng), gauss(rng)};
                r = norm(v);
            } while (r < 1e-12);
            lat.set_spin(i, j, v * (1.0 / r));
        }
    }
    return lat;
}

}  // namespace spinsplit
