#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "spinsplit/fields.hpp"
#include "spinsplit/flows.hpp"
#include "spinsplit/integrators.hpp"
#include "spinsplit/reference.hpp"
#include "test_util.hpp"

using namespace spinsplit;
using testutil::example2_params;
using testutil::gentle_thermo_params;

namespace {

ThermoState random_state(int n, std::uint64_t seed, double alpha = 0.0) {
    return ThermoState{random_lattice(n, seed, BoundaryCondition::periodic()), alpha};
}

}  // namespace

TEST_CASE("sub-flows touch only their own parity") {
    const ThermoState before = random_state(6, 1);
    ModelParams p = example2_params(6);

    const ThermoState after = subflow(before, p, Subflow::V1, 0.3);
    for (auto [i, j] : parity_sites(6, Parity::Odd)) {
        CHECK(after.lat.spin(i, j) == before.lat.spin(i, j));  // bitwise untouched
    }
    bool moved = false;
    for (auto [i, j] : parity_sites(6, Parity::Even)) {
        if (!(after.lat.spin(i, j) == before.lat.spin(i, j))) moved = true;
    }
    CHECK(moved);

    const ThermoState after3 = subflow(before, p, Subflow::V4, 0.3);
    for (auto [i, j] : parity_sites(6, Parity::Even)) {
        CHECK(after3.lat.spin(i, j) == before.lat.spin(i, j));
    }
}

TEST_CASE("aligned lattice is an equilibrium of the precession sub-flow") {
    ModelParams p;  // D = 0: field antiparallel to every spin
    ThermoState s{SpinLattice(4, BoundaryCondition::periodic()), 0.0};
    const ThermoState after = subflow(s, p, Subflow::V1, 0.7);
    for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j) {
            CHECK(norm(after.lat.spin(i, j) - s.lat.spin(i, j)) <= 1e-15);
        }
    }
}

TEST_CASE("thermostat sub-flow advances alpha linearly") {
    ModelParams p;
    p.jk = 1.0;
    p.temperature = 0.04;
    p.coupling = 1.0 / 50.0;
    ThermoState s{SpinLattice(50, BoundaryCondition::periodic()), 1.5};
    const ThermoState after = subflow(s, p, Subflow::V5, 0.01);
    CHECK(after.alpha == doctest::Approx(1.5 - 2.0).epsilon(1e-12));
    // spins untouched
    CHECK(after.lat.spin(7, 9) == s.lat.spin(7, 9));
}

TEST_CASE("conservative step: identity at dt 0 and exact reversal") {
    ModelParams p;
    p.anisotropy = {1.0, 1.0, 1.1};
    const ThermoState s = random_state(8, 2);
    CHECK(state_distance(conservative_step(s, p, 0.0), s) == 0.0);

    ThermoState fwd = conservative_step(s, p, 0.1);
    ThermoState back = conservative_step(fwd, p, -0.1);
    CHECK(state_distance(back, s) <= 1e-13);
}

TEST_CASE("conservative step converges at second order on a 2x2 torus") {
    ModelParams p;
    p.anisotropy = {1.0, 1.0, 0.9};
    const ThermoState s = random_state(2, 9);
    ThermoState ref = reference_solve(s, p, Dynamics::Conservative, 0.5);
    normalize_spins(ref);

    double errs[2];
    int idx = 0;
    for (const double dt : {0.02, 0.01}) {
        ThermoState cur = s;
        const long steps = std::lround(0.5 / dt);
        for (long k = 0; k < steps; ++k) cur = conservative_step(std::move(cur), p, dt);
        errs[idx++] = state_distance(cur, ref);
    }
    CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("dissipative step with zero damping reduces to the conservative step") {
    ModelParams p;
    p.anisotropy = {1.0, 1.0, 1.1};
    p.alpha0 = 0.0;
    const ThermoState s = random_state(8, 3);
    CHECK(state_distance(dissipative_step(s, p, 0.05), conservative_step(s, p, 0.05)) == 0.0);
    CHECK(state_distance(dissipative_step(s, p, 0.0), s) == 0.0);
}

TEST_CASE("damped ferromagnet dissipates monotonically, sign convention included") {
    ModelParams p;
    p.jk = 1.0;
    p.anisotropy = {1.0, 1.0, 1.1};
    p.alpha0 = -0.5;  // sgn(alpha0 * jk) = -1: energy decays
    ThermoState s = random_state(16, 4, p.alpha0);
    double prev = total_energy(s.lat, p);
    for (int k = 0; k < 300; ++k) {
        s = dissipative_step(std::move(s), p, 0.1);
        const double e = total_energy(s.lat, p);
        CHECK(e <= prev + 1e-10 * std::abs(prev));
        prev = e;
        CHECK(s.alpha == p.alpha0);  // alpha is inert here
    }

    // mirrored sign pumps energy
    ModelParams pump = p;
    pump.alpha0 = +0.5;
    ThermoState s2 = random_state(16, 4);
    const double e0 = total_energy(s2.lat, pump);
    for (int k = 0; k < 10; ++k) s2 = dissipative_step(std::move(s2), pump, 0.1);
    CHECK(total_energy(s2.lat, pump) > e0);
}

TEST_CASE("dissipative dynamics maps alpha0 to damping coefficient -alpha0") {
    ModelParams p = example2_params(4);
    p.alpha0 = -0.5;
    const ThermoState s = random_state(4, 5, /*alpha=*/7.0);  // state alpha must be ignored
    const StateDerivative d = eval_vector_field(s, p, Dynamics::Dissipative);
    std::size_t k = 0;
    for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j, ++k) {
            const Vec3 field = effective_field(s.lat, p, i, j);
            const Vec3& z = s.lat.spin(i, j);
            const Vec3 want = cross(z, field) + (-p.alpha0) * cross(z, cross(z, field));
            CHECK(norm(d.dz[k] - want) <= 1e-14);
        }
    }
    CHECK(d.dalpha == 0.0);
    CHECK(damping_coefficient(s, p, Dynamics::Thermostatted) == 7.0);
    CHECK(damping_coefficient(s, p, Dynamics::Conservative) == 0.0);
}

TEST_CASE("thermostat step: identity at dt 0 and single-step reversibility") {
    ModelParams p = example2_params(8);
    const ThermoState s = random_state(8, 6);
    CHECK(state_distance(thermostat_step(s, p, 0.0), s) == 0.0);

    // R(Phi(R(Phi(s)))) = s for one step, R: (z, alpha) -> (-z, -alpha)
    auto reversed = [](ThermoState st) {
        for (Vec3& z : st.lat.data()) z = -z;
        st.alpha = -st.alpha;
        return st;
    };
    ThermoState round = reversed(thermostat_step(reversed(thermostat_step(s, p, 0.01)), p, 0.01));
    CHECK(state_distance(round, s) <= 1e-10);
}

TEST_CASE("splitting schemes keep spin lengths over long runs") {
    ModelParams p = gentle_thermo_params(8);
    ThermoState s = random_state(8, 7);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        s = thermostat_step(std::move(s), p, 0.01);
        for (const Vec3& z : s.lat.data()) {
            worst = std::max(worst, std::abs(norm(z) - 1.0));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("projected RK4 leaves the aligned equilibrium alone and projects") {
    ModelParams p = example2_params(8);
    ThermoState s{SpinLattice(8, BoundaryCondition::periodic()), 0.3};
    const double rate = alpha_rate(s.lat, p);
    const ThermoState after = rk4_projected_step(s, p, Dynamics::Thermostatted, 0.01);
    for (const Vec3& z : after.lat.data()) {
        CHECK(norm(z - Vec3{0.0, 0.0, 1.0}) <= 1e-15);
    }
    CHECK(after.alpha == doctest::Approx(0.3 + 0.01 * rate).epsilon(1e-12));

    const ThermoState kicked = rk4_projected_step(random_state(8, 8), p, Dynamics::Thermostatted, 0.01);
    for (const Vec3& z : kicked.lat.data()) {
        CHECK(std::abs(norm(z) - 1.0) <= 4e-16);
    }
}

TEST_CASE("projected RK4 has fifth-order local error") {
    ModelParams p = gentle_thermo_params(2);
    const ThermoState s = random_state(2, 10);
    double errs[2];
    int idx = 0;
    for (const double dt : {0.04, 0.02}) {
        ThermoState ref = reference_solve(s, p, Dynamics::Thermostatted, dt);
        normalize_spins(ref);
        errs[idx++] = state_distance(rk4_projected_step(s, p, Dynamics::Thermostatted, dt), ref);
    }
    // one step: error ~ dt^5, so halving dt divides it by ~32
    CHECK(errs[0] / errs[1] >= 20.0);
    CHECK(errs[0] / errs[1] <= 48.0);
}

TEST_CASE("blow-up detection") {
    ThermoState s = random_state(4, 11);
    CHECK_FALSE(detect_blowup(s));

    ThermoState bad_alpha = s;
    bad_alpha.alpha = std::numeric_limits<double>::infinity();
    CHECK(detect_blowup(bad_alpha));

    ThermoState bad_spin = s;
    bad_spin.lat.set_spin(2, 2, {std::nan(""), 0.0, 0.0});
    CHECK(detect_blowup(bad_spin));

    ThermoState stretched = s;
    stretched.lat.set_spin(1, 3, {1.6, 0.0, 0.0});
    CHECK(detect_blowup(stretched));
}
