#include "spinsplit/fields.hpp"

#include <algorithm>
#include <cmath>

namespace spinsplit {

Vec3 effective_field(const SpinLattice& lat, const ModelParams& p, int i, int j) {
    return -p.jk * cmul(p.m_diag(), lat.neighbor_sum(i, j));
}

double total_energy(const SpinLattice& lat, const ModelParams& p) {
    const int n = lat.size();
    const Vec3 m = p.m_diag();
    double acc = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            acc += dot(lat.spin(i, j), cmul(m, lat.neighbor_sum(i, j)));
        }
    }
    return -0.5 * p.jk * acc;
}

double max_laplacian_norm(const SpinLattice& lat) {
    const int n = lat.size();
    double best = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const Vec3 lap = lat.neighbor_sum(i, j) - 4.0 * lat.spin(i, j);
            best = std::max(best, squared_norm(lap));
        }
    }
    return std::sqrt(best);
}

}  // namespace spinsplit
