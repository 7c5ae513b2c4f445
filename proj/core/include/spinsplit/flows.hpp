#pragma once

#include "spinsplit/lattice.hpp"
#include "spinsplit/vec3.hpp"

namespace spinsplit {

/// Exact solution at time t of the precession equation
///
///   dz/dt = z x B,   B constant,
///
/// a rotation of z about the axis -B/|B| by angle |B| t (Rodrigues form).
/// Preserves |z| up to roundoff. B = 0 returns z unchanged.
Vec3 precession_flow(const Vec3& z, const Vec3& b, double t);

/// Intermediate scalars of the closed-form damping solution, exposed for
/// inspection and testing. With v0 = <z0, B> and w0 = z0 x B the solution is
/// the rotation z(t) = cos(g |w0|) z0 + (sin(g |w0|)/|w0|) w0 x z0.
struct GilbertSolution {
    double v0 = 0.0;       // initial <z, B>
    double bnorm = 0.0;    // |B|
    double c = 0.0;        // sqrt((|B| - v0) / (|B| + v0))
    double efactor = 1.0;  // exp(alpha |B| t)
    double g = 0.0;        // rotation angle parameter
    Vec3 w0;               // z0 x B
};

/// Angle parameter g(t) of the damping solution,
///
///   g = ((C^2 + 1) / (|B| C)) * (arctan C - arctan(C E)),
///   C = sqrt((|B| - v0) / (|B| + v0)),   E = exp(alpha |B| t).
///
/// The literal difference of arctangents cancels badly; the implementation
/// uses the single-arctangent difference identity, and switches to series in
/// C (resp. 1/C) when ||B| - v0| (resp. ||B| + v0|) falls below 1e-4 and the
/// series converges. The branches agree to well below 1e-9 at the switch.
///
/// Requires bnorm > 0 (throws std::invalid_argument otherwise); callers must
/// short-circuit B = 0 to the identity flow. v0 is clamped to [-bnorm, bnorm].
double gilbert_angle(double v0, double bnorm, double alpha, double t);

/// All intermediate scalars of the damping solution for state z, field B.
GilbertSolution solve_gilbert(const Vec3& z, const Vec3& b, double alpha, double t);

/// Exact solution at time t of the damping equation
///
///   dz/dt = alpha * z x (z x B),   B constant.
///
/// Preserves |z|. Fixed point when z is parallel to B, alpha = 0, or B = 0.
/// For alpha > 0 the flow drives z antiparallel to B, for alpha < 0 parallel.
Vec3 gilbert_flow(const Vec3& z, const Vec3& b, double alpha, double t);

/// Rate of change of the thermostat variable with the spins frozen:
///
///   d(alpha)/dt = -(coupling / T)^2 *
///                 sum_ij [ <z,B>^2 - <B,B> - 2 T <z,B> ],   B = effective_field(i, j).
///
/// The sum runs row-major sequentially for deterministic results.
/// Requires temperature > 0 (throws std::invalid_argument otherwise).
double alpha_rate(const SpinLattice& lat, const ModelParams& p);

}  // namespace spinsplit
