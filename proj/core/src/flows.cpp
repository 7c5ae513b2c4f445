#include "spinsplit/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinsplit/fields.hpp"

namespace spinsplit {

Vec3 precession_flow(const Vec3& z, const Vec3& b, double t) {
    const double bn2 = squared_norm(b);
    if (bn2 == 0.0 || t == 0.0) return z;
    const double bn = std::sqrt(bn2);
    const Vec3 axis = b * (-1.0 / bn);
    const double theta = bn * t;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // Rodrigues: z cos + (axis x z) sin + axis <axis, z> (1 - cos)
    return c * z + s * cross(axis, z) + ((1.0 - c) * dot(axis, z)) * axis;
}

namespace {

// Switch point for the near-(anti)parallel series branches.
constexpr double kSeriesThreshold = 1e-4;

// The series in C are truncated after the C^6 term; they are used only when
// C * max(1, E) stays below this bound, which keeps the truncation error
// under ~1e-12 relative to g's leading term.
constexpr double kSeriesArgBound = 0.03;

// g for small C = sqrt(c2), expanded from the arctangent difference:
//   g |B| = -e1 + C^2 (e3/3 - e1) + C^4 (e3/3 - e5/5) + C^6 (e7/7 - e5/5)
// with ek = expm1(k s), s = alpha |B| t. At C = 0 this is exact.
double small_c_series(double c2, double s, double bnorm) {
    const double e1 = std::expm1(s);
    const double e3 = std::expm1(3.0 * s);
    const double e5 = std::expm1(5.0 * s);
    const double e7 = std::expm1(7.0 * s);
    const double g = -e1 + c2 * ((e3 / 3.0 - e1) + c2 * ((e3 / 3.0 - e5 / 5.0) +
                                                         c2 * (e7 / 7.0 - e5 / 5.0)));
    return g / bnorm;
}

// Mirror expansion for large C in powers of c = 1/C; obtained from the small-C
// form by s -> -s with an overall sign flip of the leading coefficients:
//   g |B| = q1 + c^2 (q1 - q3/3) + c^4 (q5/5 - q3/3) + c^6 (q5/5 - q7/7)
// with qk = expm1(-k s).
double large_c_series(double inv_c2, double s, double bnorm) {
    const double q1 = std::expm1(-s);
    const double q3 = std::expm1(-3.0 * s);
    const double q5 = std::expm1(-5.0 * s);
    const double q7 = std::expm1(-7.0 * s);
    const double g = q1 + inv_c2 * ((q1 - q3 / 3.0) + inv_c2 * ((q5 / 5.0 - q3 / 3.0) +
                                                                inv_c2 * (q5 / 5.0 - q7 / 7.0)));
    return g / bnorm;
}

// True when the series in powers of r (r = C or 1/C) converges fast enough:
// r * max(1, exp(s_eff)) <= kSeriesArgBound, evaluated in logs to avoid
// overflow of the exponential. r2 = r^2 may be zero.
bool series_applicable(double r2, double s_eff) {
    if (r2 == 0.0) return true;
    return 0.5 * std::log(r2) + std::max(s_eff, 0.0) <= std::log(kSeriesArgBound);
}

// arctan C - arctan(C E) evaluated as a single arctangent,
//   arctan( C (1 - E) / (1 + C^2 E) ),
// which is free of the cancellation the naive difference suffers when both
// arguments are close or both near pi/2. For s > 0 the expression is scaled
// by exp(-s) top and bottom so E never overflows.
double arctan_difference(double c2, double s) {
    const double c = std::sqrt(c2);
    if (s <= 0.0) {
        const double e = std::exp(s);
        return std::atan(-c * std::expm1(s) / (1.0 + c2 * e));
    }
    const double q = std::exp(-s);
    return std::atan(c * std::expm1(-s) / (q + c2));
}

// Rotation angle g |w0| = 2 (arctan C - arctan(C E)) of the damping flow,
// with C parameterised through the directly computed |w0| = |z x B|:
// C = |w0| / (|B| + v0) or its reciprocal mirror, whichever denominator is
// free of cancellation. Both parameters are bounded by 1, expm1 of the
// appropriate sign never overflows, and the result stays in (-pi, pi), so
// this form is stable for every alignment and every s = alpha |B| t.
double rotation_angle(double wn, double v0, double bnorm, double s) {
    if (v0 >= 0.0) {
        const double c = wn / (bnorm + v0);
        if (s <= 0.0) {
            return 2.0 * std::atan(-c * std::expm1(s) / (1.0 + c * c * std::exp(s)));
        }
        return 2.0 * std::atan(c * std::expm1(-s) / (std::exp(-s) + c * c));
    }
    const double cb = wn / (bnorm - v0);  // 1/C
    if (s <= 0.0) {
        return 2.0 * std::atan(-cb * std::expm1(s) / (std::exp(s) + cb * cb));
    }
    return 2.0 * std::atan(cb * std::expm1(-s) / (1.0 + cb * cb * std::exp(-s)));
}

}  // namespace

double gilbert_angle(double v0, double bnorm, double alpha, double t) {
    if (!(bnorm > 0.0)) {
        throw std::invalid_argument("gilbert_angle: field norm must be positive");
    }
    v0 = std::clamp(v0, -bnorm, bnorm);
    const double s = alpha * bnorm * t;
    const double m = bnorm - v0;  // small when z is nearly parallel to B
    const double p = bnorm + v0;  // small when nearly antiparallel

    if (m < kSeriesThreshold && m <= p && series_applicable(m / p, s)) {
        return small_c_series(m / p, s, bnorm);
    }
    if (p < kSeriesThreshold && p < m && series_applicable(p / m, -s)) {
        return large_c_series(p / m, s, bnorm);
    }
    const double c2 = m / p;
    return (c2 + 1.0) / std::sqrt(c2) * arctan_difference(c2, s) / bnorm;
}

GilbertSolution solve_gilbert(const Vec3& z, const Vec3& b, double alpha, double t) {
    GilbertSolution sol;
    sol.bnorm = norm(b);
    sol.v0 = dot(z, b);
    sol.w0 = cross(z, b);
    if (sol.bnorm == 0.0) return sol;
    sol.v0 = std::clamp(sol.v0, -sol.bnorm, sol.bnorm);
    const double p = sol.bnorm + sol.v0;
    // C = |w0| / (|B| + v0) equals sqrt((|B|-v0)/(|B|+v0)) but avoids the
    // cancellation in |B| - v0 for nearly aligned states.
    sol.c = p > 0.0 ? norm(sol.w0) / p : std::numeric_limits<double>::infinity();
    sol.efactor = std::exp(alpha * sol.bnorm * t);
    sol.g = gilbert_angle(sol.v0, sol.bnorm, alpha, t);
    return sol;
}

Vec3 gilbert_flow(const Vec3& z, const Vec3& b, double alpha, double t) {
    if (alpha == 0.0 || t == 0.0 || squared_norm(b) == 0.0) return z;
    const Vec3 w0 = cross(z, b);
    const double wn2 = squared_norm(w0);
    // (Anti)parallel within rounding dust is a fixed point; the remaining
    // rotation angle is below 1e-140 radians.
    if (wn2 <= 1e-280) return z;
    const double wn = std::sqrt(wn2);
    const double bn = norm(b);
    const double v0 = std::clamp(dot(z, b), -bn, bn);
    const double theta = rotation_angle(wn, v0, bn, alpha * bn * t);
    const Vec3 axis = w0 * (1.0 / wn);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // Full Rodrigues form. When z is nearly aligned with B the computed w0
    // is cancellation-dominated and not exactly orthogonal to z; the axial
    // term keeps the map a true rotation, so spin length survives even then.
    return c * z + s * cross(axis, z) + ((1.0 - c) * dot(axis, z)) * axis;
}

double alpha_rate(const SpinLattice& lat, const ModelParams& p) {
    if (!(p.temperature > 0.0)) {
        throw std::invalid_argument("alpha_rate: temperature must be positive");
    }
    const int n = lat.size();
    double acc = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const Vec3 field = effective_field(lat, p, i, j);
            const double v = dot(lat.spin(i, j), field);
            acc += v * v - squared_norm(field) - 2.0 * p.temperature * v;
        }
    }
    const double scale = p.coupling / p.temperature;
    return -scale * scale * acc;
}

}  // namespace spinsplit
