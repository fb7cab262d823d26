#pragma once

#include <array>
#include <cmath>

#include "rateobs/errors.hpp"

namespace rateobs {

/// Dense 3-vector. Plain value type: arithmetic never validates, boundary
/// code that ingests external data goes through `checked`.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    /// Throws InvalidInput on NaN/Inf components.
    static Vec3 checked(double x, double y, double z);

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
    /// Throws InvalidInput when the norm is zero.
    Vec3 normalized() const;

    bool operator==(const Vec3& o) const = default;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> e{};

    double& operator()(int r, int c) { return e[3 * r + c]; }
    double operator()(int r, int c) const { return e[3 * r + c]; }

    static Mat3 identity();
    static Mat3 zero() { return {}; }
    /// u v^T
    static Mat3 outer(const Vec3& u, const Vec3& v);

    Mat3 transposed() const;
    double det() const;
    /// Adjugate-based inverse; throws NumericFailure on near-singular input.
    Mat3 inverse() const;
    double frobenius() const;
    double max_abs() const;
    bool finite() const;

    Mat3 operator+(const Mat3& o) const;
    Mat3 operator-(const Mat3& o) const;
    Mat3 operator*(double s) const;
    Mat3 operator*(const Mat3& o) const;
    Vec3 operator*(const Vec3& v) const;
};

inline Mat3 operator*(double s, const Mat3& m) { return m * s; }

/// Cross-product matrix: skew(v) * y == v x y.
Mat3 skew(const Vec3& v);

/// Proper rotation. Construction through `from_matrix` enforces
/// orthonormality (1e-9 Frobenius) and det +1; composition of valid
/// rotations skips the check.
class Rotation {
public:
    Rotation() : m_(Mat3::identity()) {}

    /// Validates m^T m = I (1e-9 Frobenius) and det = +1 (1e-9).
    static Rotation from_matrix(const Mat3& m);
    /// Rodrigues formula: cos(z) I + sin(z) skew(u) + (1 - cos(z)) u u^T.
    /// The axis must be unit length within 1e-9.
    static Rotation about_axis(const Vec3& axis, double angle_rad);

    const Mat3& matrix() const { return m_; }
    Rotation transposed() const { return Rotation(m_.transposed(), Unchecked{}); }

    Vec3 operator*(const Vec3& v) const { return m_ * v; }
    /// R^T v without forming the transpose.
    Vec3 apply_inverse(const Vec3& v) const;
    Rotation operator*(const Rotation& o) const {
        return Rotation(m_ * o.m_, Unchecked{});
    }

private:
    struct Unchecked {};
    Rotation(const Mat3& m, Unchecked) : m_(m) {}
    Mat3 m_;

    friend Rotation reorthonormalize(const Mat3&);
};

/// Nearest rotation in the polar-decomposition sense. Input must lie within
/// Frobenius distance 0.1 of a rotation; idempotent on exact rotations.
Rotation reorthonormalize(const Mat3& m);

/// Eigenvalues of a symmetric 3x3 matrix, ascending, via cyclic Jacobi.
/// Throws InvalidInput when the asymmetry exceeds 1e-12 (scaled).
std::array<double, 3> sym_eigenvalues(const Mat3& m);
double sym_min_eigenvalue(const Mat3& m);

/// Stacked 6-vector; |X|^2 = |upper|^2 + |lower|^2 by construction.
struct Vec6 {
    Vec3 upper, lower;

    double norm2() const { return upper.norm2() + lower.norm2(); }
    double norm() const { return std::sqrt(norm2()); }

    Vec6 operator+(const Vec6& o) const { return {upper + o.upper, lower + o.lower}; }
    Vec6 operator*(double s) const { return {upper * s, lower * s}; }
};

/// Row-major 6x6 matrix.
struct Mat6 {
    std::array<double, 36> e{};

    double& operator()(int r, int c) { return e[6 * r + c]; }
    double operator()(int r, int c) const { return e[6 * r + c]; }

    static Mat6 identity();
    /// Assembles [[a, b], [c, d]] from 3x3 blocks.
    static Mat6 from_blocks(const Mat3& a, const Mat3& b, const Mat3& c, const Mat3& d);

    Mat6 transposed() const;
    double frobenius() const;

    Mat6 operator+(const Mat6& o) const;
    Mat6 operator*(double s) const;
    Mat6 operator*(const Mat6& o) const;
    Vec6 operator*(const Vec6& v) const;
};

inline Mat6 operator*(double s, const Mat6& m) { return m * s; }

}  // namespace rateobs
