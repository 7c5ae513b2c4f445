#pragma once

#include <vector>

#include "spinsplit/lattice.hpp"
#include "spinsplit/vec3.hpp"

namespace spinsplit {

/// Full simulation state: the lattice plus the scalar thermostat variable.
/// Conservative and dissipative runs carry alpha too, but leave it inert.
struct ThermoState {
    SpinLattice lat;
    double alpha = 0.0;
};

enum class Scheme { Conservative, Dissipative, Thermostatted, Rk4Projected };

/// Which coupled vector field a Runge-Kutta step or the reference solver
/// integrates; the splitting schemes imply their field.
enum class Dynamics { Conservative, Dissipative, Thermostatted };

enum class Subflow { V1, V2, V3, V4, V5 };

/// One elementary sub-flow for time t:
///   V1/V2  exact precession of the even/odd sites in the field of the
///          frozen opposite parity,
///   V3/V4  exact damping of the even/odd sites, coefficient state.alpha,
///   V5     spins frozen, alpha advanced by t * alpha_rate.
/// Sites of the inactive parity are not touched at all.
ThermoState subflow(ThermoState state, const ModelParams& p, Subflow which, double t);

/// Symmetric composition V2(dt/2) V1(dt) V2(dt/2). Time reversible,
/// conserves spin lengths, conserves the energy of the lattice Hamiltonian.
ThermoState conservative_step(ThermoState state, const ModelParams& p, double dt);

/// Symmetric composition V4 V3 V2 (dt/2 each) V1(dt) V2 V3 V4 (dt/2 each)
/// with fixed damping coefficient derived from p.alpha0; state.alpha is left
/// untouched. With sgn(alpha0 * jk) = -1 the energy is non-increasing at
/// every step (see the sign note in integrators.cpp).
ThermoState dissipative_step(ThermoState state, const ModelParams& p, double dt);

/// Symmetric composition V1 V2 V3 V4 (dt/2 each) V5(dt) V4 V3 V2 V1
/// (dt/2 each); V3/V4 use the evolving state.alpha. Reversible under the
/// involution (z, alpha, t) -> (-z, -alpha, -t).
ThermoState thermostat_step(ThermoState state, const ModelParams& p, double dt);

/// One classical 4-stage Runge-Kutta step over the unsplit vector field of
/// the requested dynamics, followed by projection of every spin back to unit
/// length. The stages treat spins as unconstrained vectors; alpha is not
/// projected.
ThermoState rk4_projected_step(ThermoState state, const ModelParams& p, Dynamics dyn, double dt);

/// Step dispatch. Rk4Projected integrates the thermostatted field, the
/// baseline it is compared against.
ThermoState step(ThermoState state, const ModelParams& p, Scheme scheme, double dt);

/// The unsplit right-hand side: spin rates for every site (row-major) and
/// the alpha rate. Used by the Runge-Kutta step and the reference solver.
struct StateDerivative {
    std::vector<Vec3> dz;
    double dalpha = 0.0;
};
StateDerivative eval_vector_field(const ThermoState& state, const ModelParams& p, Dynamics dyn);

/// Damping coefficient the given dynamics applies in the damping term.
double damping_coefficient(const ThermoState& state, const ModelParams& p, Dynamics dyn);

/// True if any spin component or alpha is non-finite, or any spin norm
/// deviates from 1 by more than 0.5.
bool detect_blowup(const ThermoState& state);

}  // namespace spinsplit
