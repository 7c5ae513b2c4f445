#pragma once

#include <cmath>

namespace spinsplit {

/// Plain 3-vector used for spins, effective fields, and anisotropy diagonals.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    constexpr double& operator[](int k) { return k == 0 ? x : (k == 1 ? y : z); }
    constexpr const double& operator[](int k) const { return k == 0 ? x : (k == 1 ? y : z); }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(double s, Vec3 v) { return v *= s; }
constexpr Vec3 operator*(Vec3 v, double s) { return v *= s; }
constexpr Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }

constexpr bool operator==(const Vec3& a, const Vec3& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
}

constexpr double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

constexpr double squared_norm(const Vec3& v) { return dot(v, v); }

inline double norm(const Vec3& v) { return std::sqrt(squared_norm(v)); }

/// Component-wise product, used to apply diagonal matrices.
constexpr Vec3 cmul(const Vec3& diag, const Vec3& v) {
    return {diag.x * v.x, diag.y * v.y, diag.z * v.z};
}

inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

}  // namespace spinsplit
