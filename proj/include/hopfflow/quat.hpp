#pragma once

// Quaternion arithmetic, the Hopf fibration pi(q) = invol(q)*q, its
// differential and the induced rotations of the 2-sphere.
//
// Conventions: basis order (w, x, y, z) <-> (1, i, j, k). The 2-sphere is
// the unit sphere of span{1, j, k}, so a surface point (p1, p2, p3) maps to
// the quaternion p1 + p2*j + p3*k.

#include <cmath>

#include "hopfflow/errors.hpp"
#include "hopfflow/vec3.hpp"

namespace hopfflow {

inline constexpr double kUnitTol = 1e-9;

struct Quat {
    double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

    constexpr Quat() = default;
    constexpr Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    constexpr Quat operator+(const Quat& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    constexpr Quat operator-(const Quat& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
    constexpr Quat operator-() const { return {-w, -x, -y, -z}; }
    constexpr Quat operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
    constexpr Quat operator/(double s) const { return {w / s, x / s, y / s, z / s}; }
    Quat& operator+=(const Quat& o) { w += o.w; x += o.x; y += o.y; z += o.z; return *this; }

    // Hamilton product, i*j = k.
    constexpr Quat operator*(const Quat& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    constexpr Quat conj() const { return {w, -x, -y, -z}; }
    constexpr double dot(const Quat& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
    constexpr double norm_sq() const { return dot(*this); }
    double norm() const { return std::sqrt(norm_sq()); }
    Quat normalized() const {
        const double n = norm();
        return {w / n, x / n, y / n, z / n};
    }
};

inline constexpr Quat operator*(double s, const Quat& q) { return q * s; }

// The involution fixing 1, j, k and sending i to -i. It reverses products
// like conjugation does: invol(p*q) = invol(q)*invol(p).
inline constexpr Quat involution(const Quat& q) { return {q.w, -q.x, q.y, q.z}; }

// e^{i*phi} = cos(phi) + i sin(phi); generates the Hopf fibers by left
// multiplication.
inline Quat exp_i(double phi) { return {std::cos(phi), std::sin(phi), 0.0, 0.0}; }

// Embedding of the 2-sphere coordinates into span{1, j, k} and back.
inline constexpr Quat to_quat(const Vec3& p) { return {p.x, 0.0, p.y, p.z}; }
inline constexpr Vec3 sphere_coords(const Quat& q) { return {q.w, q.y, q.z}; }

inline void require_unit(const Quat& q, const char* what) {
    if (std::abs(q.norm() - 1.0) > kUnitTol) throw NonUnitInput(what);
}
inline void require_unit(const Vec3& p, const char* what) {
    if (std::abs(p.norm() - 1.0) > kUnitTol) throw NonUnitInput(what);
}

// Hopf fibration S^3 -> S^2, q |-> invol(q)*q. Fibers are the left circles
// e^{i phi} q.
inline Vec3 hopf_map(const Quat& q) {
    require_unit(q, "hopf_map: input not on S^3");
    const Quat p = involution(q) * q;
    return sphere_coords(p);
}

// Differential of the Hopf map at q applied to a tangent vector v:
// invol(v)*q + invol(q)*v, a vector in span{1, j, k}.
inline Vec3 hopf_differential(const Quat& q, const Quat& v) {
    require_unit(q, "hopf_differential: base point not on S^3");
    if (std::abs(q.dot(v)) > kUnitTol * (1.0 + v.norm()))
        throw NonTangentInput("hopf_differential: v not tangent at q");
    const Quat d = involution(v) * q + involution(q) * v;
    return sphere_coords(d);
}

// Rotation of S^2 induced by r in S^3: p |-> invol(r)*p*r.
inline Vec3 rotate_s2(const Vec3& p, const Quat& r) {
    require_unit(p, "rotate_s2: point not on S^2");
    require_unit(r, "rotate_s2: rotor not on S^3");
    const Quat q = involution(r) * to_quat(p) * r;
    return sphere_coords(q);
}

// A point of the Hopf fiber over p: the square root of p inside the
// subalgebra span{1, j, k}, so that hopf_map(fiber_point(p)) = p.
inline Quat fiber_point(const Vec3& p) {
    require_unit(p, "fiber_point: input not on S^2");
    const double r = std::hypot(p.y, p.z);
    if (r < 1e-14) return p.x > 0.0 ? Quat{1, 0, 0, 0} : Quat{0, 0, 1, 0};
    const double theta = std::atan2(r, p.x);
    const double s = std::sin(0.5 * theta) / r;
    return Quat{std::cos(0.5 * theta), 0.0, s * p.y, s * p.z};
}

// Generalized cross product in R^4: the vector orthogonal to a, b, c with
// components given by the formal 4x4 determinant expansion.
inline Quat cross4(const Quat& a, const Quat& b, const Quat& c) {
    auto det3 = [](double a1, double a2, double a3, double b1, double b2, double b3,
                   double c1, double c2, double c3) {
        return a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1);
    };
    return {+det3(a.x, a.y, a.z, b.x, b.y, b.z, c.x, c.y, c.z),
            -det3(a.w, a.y, a.z, b.w, b.y, b.z, c.w, c.y, c.z),
            +det3(a.w, a.x, a.z, b.w, b.x, b.z, c.w, c.x, c.z),
            -det3(a.w, a.x, a.y, b.w, b.x, b.y, c.w, c.x, c.y)};
}

}  // namespace hopfflow
