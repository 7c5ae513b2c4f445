#include "spinsplit/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace spinsplit {

namespace {

namespace odeint = boost::numeric::odeint;
using StateVec = std::vector<double>;

void flatten(const ThermoState& state, StateVec& y) {
    const auto& spins = state.lat.data();
    y.resize(3 * spins.size() + 1);
    std::size_t k = 0;
    for (const Vec3& z : spins) {
        y[k++] = z.x;
        y[k++] = z.y;
        y[k++] = z.z;
    }
    y[k] = state.alpha;
}

void unflatten(const StateVec& y, ThermoState& state) {
    auto& spins = state.lat.data();
    std::size_t k = 0;
    for (Vec3& z : spins) {
        z = {y[k], y[k + 1], y[k + 2]};
        k += 3;
    }
    state.alpha = y[k];
}

template <typename System>
void integrate_rkf78(System&& system, StateVec& y, double t_end, double tol) {
    if (t_end == 0.0) return;
    if (!(tol > 0.0)) throw std::invalid_argument("reference_solve: tolerance must be positive");
    using Stepper = odeint::runge_kutta_fehlberg78<StateVec>;
    const double dt0 = t_end / 256.0;
    odeint::integrate_adaptive(odeint::make_controlled<Stepper>(tol, tol), system, y, 0.0, t_end,
                               dt0);
}

}  // namespace

ThermoState reference_solve(ThermoState initial, const ModelParams& p, Dynamics dyn, double t_end,
                            double tol) {
    ThermoState work = initial;  // scratch used inside the RHS functor
    StateVec y;
    flatten(initial, y);
    auto system = [&](const StateVec& yin, StateVec& dydt, double /*t*/) {
        unflatten(yin, work);
        const StateDerivative d = eval_vector_field(work, p, dyn);
        dydt.resize(yin.size());
        std::size_t k = 0;
        for (const Vec3& dz : d.dz) {
            dydt[k++] = dz.x;
            dydt[k++] = dz.y;
            dydt[k++] = dz.z;
        }
        dydt[k] = d.dalpha;
    };
    integrate_rkf78(system, y, t_end, tol);
    unflatten(y, initial);
    return initial;
}

Vec3 reference_gilbert(const Vec3& z, const Vec3& b, double alpha, double t_end, double tol) {
    StateVec y = {z.x, z.y, z.z};
    auto system = [&](const StateVec& yin, StateVec& dydt, double /*t*/) {
        const Vec3 zz{yin[0], yin[1], yin[2]};
        const Vec3 d = alpha * cross(zz, cross(zz, b));
        dydt = {d.x, d.y, d.z};
    };
    integrate_rkf78(system, y, t_end, tol);
    return {y[0], y[1], y[2]};
}

void normalize_spins(ThermoState& state) {
    for (Vec3& z : state.lat.data()) {
        const double r = norm(z);
        if (r > 0.0) z *= 1.0 / r;
    }
}

double state_distance(const ThermoState& a, const ThermoState& b) {
    const auto& za = a.lat.data();
    const auto& zb = b.lat.data();
    if (za.size() != zb.size()) {
        throw std::invalid_argument("state_distance: lattice sizes differ");
    }
    double best = std::abs(a.alpha - b.alpha);
    for (std::size_t k = 0; k < za.size(); ++k) {
        best = std::max(best, std::abs(za[k].x - zb[k].x));
        best = std::max(best, std::abs(za[k].y - zb[k].y));
        best = std::max(best, std::abs(za[k].z - zb[k].z));
    }
    return best;
}

}  // namespace spinsplit
