#pragma once

#include "spinsplit/integrators.hpp"
#include "spinsplit/vec3.hpp"

namespace spinsplit {

/// High-accuracy solution of the unsplit vector field, computed with an
/// adaptive embedded Runge-Kutta integrator at the given tolerance. Spins are
/// integrated as unconstrained vectors and never renormalised here; callers
/// measuring errors against on-sphere states should renormalise the result.
/// Independent of the closed-form flows and the splitting steppers.
ThermoState reference_solve(ThermoState initial, const ModelParams& p, Dynamics dyn, double t_end,
                            double tol = 1e-12);

/// Reference integration of the single-spin damping equation
/// dz/dt = alpha * z x (z x B) with constant B.
Vec3 reference_gilbert(const Vec3& z, const Vec3& b, double alpha, double t_end,
                       double tol = 1e-12);

/// Renormalises every spin to unit length (zero spins are left alone).
void normalize_spins(ThermoState& state);

/// Max-norm distance over all spin components and alpha.
double state_distance(const ThermoState& a, const ThermoState& b);

}  // namespace spinsplit
