#pragma once

// Upper half-plane points, integral 2x2 matrices, the Moebius action,
// the cocycle j(g,z) = cz+d and the displacement invariant
//   u_g(z) = j(g,z) * (conj(z) - g.z) / Im(z),
// together with the generic / upper-triangular / parabolic trichotomy
// of determinant-l matrices.

#include <complex>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>

namespace suplab {

using i64 = std::int64_t;
using cplx = std::complex<double>;

// Absolute slack used for floating-point comparisons throughout the
// geometry layer (see also kGapSlack in atkin_lehner.hpp).
inline constexpr double kGeomSlack = 1e-9;

struct HPoint {
    double x = 0.0;
    double y = 1.0;

    HPoint() = default;
    HPoint(double x_, double y_) : x(x_), y(y_) {
        if (!(y_ > 0.0) || !std::isfinite(x_) || !std::isfinite(y_))
            throw std::invalid_argument("HPoint: requires finite x and y > 0");
    }

    cplx value() const { return {x, y}; }
};

inline HPoint to_hpoint(cplx z) { return HPoint(z.real(), z.imag()); }

struct IntMat {
    i64 a = 1, b = 0, c = 0, d = 1;

    i64 det() const { return a * d - b * c; }
    i64 trace() const { return a + d; }
    IntMat neg() const { return {-a, -b, -c, -d}; }

    friend bool operator==(const IntMat&, const IntMat&) = default;
};

// Canonical ordering used whenever matrix lists are compared or emitted:
// lexicographic on (c, d, a, b).
inline bool canonical_less(const IntMat& m, const IntMat& n) {
    if (m.c != n.c) return m.c < n.c;
    if (m.d != n.d) return m.d < n.d;
    if (m.a != n.a) return m.a < n.a;
    return m.b < n.b;
}

inline IntMat mat_mul(const IntMat& m, const IntMat& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

enum class MatClass { Generic, UpperTriangular, Parabolic };

inline const char* to_string(MatClass c) {
    switch (c) {
        case MatClass::Generic: return "generic";
        case MatClass::UpperTriangular: return "upper-triangular";
        case MatClass::Parabolic: return "parabolic";
    }
    return "?";
}

namespace detail {

// Core formulas on raw real entries, shared by IntMat and the real-entry
// variants needed for conjugation tests and Atkin-Lehner operators.
inline cplx moebius_apply(double a, double b, double c, double d, cplx z) {
    return (a * z + b) / (c * z + d);
}

inline cplx u_value_raw(double a, double b, double c, double d, cplx z) {
    // u = (c|z|^2 + d*conj(z) - a*z - b) / y; equals j(g,z)(conj(z)-g.z)/y.
    const double y = z.imag();
    return (c * std::norm(z) + d * std::conj(z) - a * z - b) / y;
}

} // namespace detail

inline HPoint moebius(const IntMat& m, const HPoint& z) {
    if (m.det() <= 0) throw std::invalid_argument("moebius: det must be positive");
    cplx w = detail::moebius_apply(double(m.a), double(m.b), double(m.c), double(m.d), z.value());
    return to_hpoint(w);
}

inline cplx cocycle_j(const IntMat& m, const HPoint& z) {
    return double(m.c) * z.value() + double(m.d);
}

inline cplx u_value(const IntMat& m, const HPoint& z) {
    if (m.det() <= 0) throw std::invalid_argument("u_value: det must be positive");
    return detail::u_value_raw(double(m.a), double(m.b), double(m.c), double(m.d), z.value());
}

// Real-entry matrix, used for conjugation identities and scaled
// Atkin-Lehner matrices; same conventions as IntMat.
struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;

    Mat2() = default;
    Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}
    explicit Mat2(const IntMat& m) : a(double(m.a)), b(double(m.b)), c(double(m.c)), d(double(m.d)) {}

    double det() const { return a * d - b * c; }
};

inline Mat2 mat_mul(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

inline Mat2 mat_inverse_unimodular(const Mat2& m) {
    // Inverse of a determinant-1 matrix.
    return {m.d, -m.b, -m.c, m.a};
}

inline cplx moebius(const Mat2& m, cplx z) {
    if (!(m.det() > 0)) throw std::invalid_argument("moebius: det must be positive");
    return detail::moebius_apply(m.a, m.b, m.c, m.d, z);
}

inline cplx u_value(const Mat2& m, const HPoint& z) {
    if (!(m.det() > 0)) throw std::invalid_argument("u_value: det must be positive");
    return detail::u_value_raw(m.a, m.b, m.c, m.d, z.value());
}

// Partition of determinant-l integral matrices:
//   parabolic        iff (a+d)^2 = 4l,
//   upper-triangular iff c = 0 and a != d,
//   generic          iff c != 0 and (a+d)^2 != 4l.
// The residual case (c = 0, a = d, trace^2 != 4l) cannot occur for det = l.
inline MatClass classify(const IntMat& m, i64 l) {
    if (m.det() != l)
        throw std::invalid_argument("classify: det(m) != l");
    const i64 t = m.trace();
    if (t * t == 4 * l) return MatClass::Parabolic;
    if (m.c == 0) {
        if (m.a == m.d)
            throw std::logic_error("classify: c=0, a=d with trace^2 != 4l is inconsistent with det=l");
        return MatClass::UpperTriangular;
    }
    return MatClass::Generic;
}

} // namespace suplab
