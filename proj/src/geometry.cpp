#include "rateobs/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rateobs {

Vec3 Vec3::checked(double x, double y, double z) {
    Vec3 v{x, y, z};
    if (!v.finite()) throw InvalidInput("vector component is not finite");
    return v;
}

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n == 0.0) throw InvalidInput("cannot normalize a zero vector");
    return {x / n, y / n, z / n};
}

Mat3 Mat3::identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
}

Mat3 Mat3::outer(const Vec3& u, const Vec3& v) {
    Mat3 m;
    const double ue[3] = {u.x, u.y, u.z};
    const double ve[3] = {v.x, v.y, v.z};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = ue[r] * ve[c];
    return m;
}

Mat3 Mat3::transposed() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
    return t;
}

double Mat3::det() const {
    const Mat3& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Mat3 Mat3::inverse() const {
    const Mat3& m = *this;
    const double d = det();
    if (std::abs(d) < 1e-300 * std::max(1.0, max_abs()))
        throw NumericFailure("3x3 matrix is singular");
    Mat3 inv;
    inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
    inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
    inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
    inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
    inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
    inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
    inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
    inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
    inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
    return inv;
}

double Mat3::frobenius() const {
    double s = 0.0;
    for (double v : e) s += v * v;
    return std::sqrt(s);
}

double Mat3::max_abs() const {
    double s = 0.0;
    for (double v : e) s = std::max(s, std::abs(v));
    return s;
}

bool Mat3::finite() const {
    for (double v : e)
        if (!std::isfinite(v)) return false;
    return true;
}

Mat3 Mat3::operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.e[i] = e[i] + o.e[i];
    return r;
}

Mat3 Mat3::operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.e[i] = e[i] - o.e[i];
    return r;
}

Mat3 Mat3::operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.e[i] = e[i] * s;
    return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
    const Mat3& m = *this;
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

Mat3 skew(const Vec3& v) {
    Mat3 m;
    m(0, 1) = -v.z; m(0, 2) = v.y;
    m(1, 0) = v.z;  m(1, 2) = -v.x;
    m(2, 0) = -v.y; m(2, 1) = v.x;
    return m;
}

namespace {

double orthonormality_defect(const Mat3& m) {
    return (m.transposed() * m - Mat3::identity()).frobenius();
}

}  // namespace

Rotation Rotation::from_matrix(const Mat3& m) {
    if (!m.finite()) throw InvalidInput("rotation matrix has non-finite entries");
    if (orthonormality_defect(m) > 1e-9)
        throw InvalidInput("matrix is not orthonormal within 1e-9");
    if (std::abs(m.det() - 1.0) > 1e-9)
        throw InvalidInput("matrix determinant is not +1 within 1e-9");
    return Rotation(m, Unchecked{});
}

Rotation Rotation::about_axis(const Vec3& axis, double angle_rad) {
    if (!axis.finite() || !std::isfinite(angle_rad))
        throw InvalidInput("rotation axis/angle must be finite");
    if (std::abs(axis.norm() - 1.0) > 1e-9)
        throw InvalidInput("rotation axis must be unit length within 1e-9");
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    Mat3 m = Mat3::identity() * c + skew(axis) * s + Mat3::outer(axis, axis) * (1.0 - c);
    return Rotation(m, Unchecked{});
}

Vec3 Rotation::apply_inverse(const Vec3& v) const {
    const Mat3& m = m_;
    return {m(0, 0) * v.x + m(1, 0) * v.y + m(2, 0) * v.z,
            m(0, 1) * v.x + m(1, 1) * v.y + m(2, 1) * v.z,
            m(0, 2) * v.x + m(1, 2) * v.y + m(2, 2) * v.z};
}

Rotation reorthonormalize(const Mat3& m) {
    if (!m.finite()) throw InvalidInput("matrix has non-finite entries");
    if (m.det() <= 0.0)
        throw InvalidInput("matrix is too far from SO(3): non-positive determinant");

    // Newton iteration for the orthogonal polar factor: X <- (X + X^-T)/2.
    Mat3 x = m;
    bool converged = false;
    for (int it = 0; it < 40; ++it) {
        if (orthonormality_defect(x) < 1e-14) {
            converged = true;
            break;
        }
        x = (x + x.inverse().transposed()) * 0.5;
    }
    if (!converged && orthonormality_defect(x) > 1e-12)
        throw NumericFailure("polar iteration did not converge");
    if ((m - x).frobenius() > 0.1)
        throw InvalidInput("matrix is too far from SO(3) (Frobenius distance > 0.1)");
    return Rotation(x, Rotation::Unchecked{});
}

std::array<double, 3> sym_eigenvalues(const Mat3& m) {
    const double scale = std::max(1.0, m.max_abs());
    double asym = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = r + 1; c < 3; ++c)
            asym = std::max(asym, std::abs(m(r, c) - m(c, r)));
    if (asym > 1e-12 * scale)
        throw InvalidInput("matrix is not symmetric within 1e-12");

    // Cyclic Jacobi on the symmetrized copy; 3x3 converges in a few sweeps.
    double a[3][3];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a[r][c] = 0.5 * (m(r, c) + m(c, r));

    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = std::sqrt(a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]);
        if (off < 1e-15 * scale) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double app = a[p][p], aqq = a[q][q], apq = a[p][q];
                a[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a[p][q] = a[q][p] = 0.0;
                for (int r = 0; r < 3; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a[r][p], arq = a[r][q];
                    a[r][p] = a[p][r] = c * arp - s * arq;
                    a[r][q] = a[q][r] = s * arp + c * arq;
                }
            }
    }
    std::array<double, 3> ev = {a[0][0], a[1][1], a[2][2]};
    std::sort(ev.begin(), ev.end());
    return ev;
}

double sym_min_eigenvalue(const Mat3& m) { return sym_eigenvalues(m)[0]; }

Mat6 Mat6::identity() {
    Mat6 m;
    for (int i = 0; i < 6; ++i) m(i, i) = 1.0;
    return m;
}

Mat6 Mat6::from_blocks(const Mat3& a, const Mat3& b, const Mat3& c, const Mat3& d) {
    Mat6 m;
    for (int r = 0; r < 3; ++r)
        for (int cc = 0; cc < 3; ++cc) {
            m(r, cc) = a(r, cc);
            m(r, cc + 3) = b(r, cc);
            m(r + 3, cc) = c(r, cc);
            m(r + 3, cc + 3) = d(r, cc);
        }
    return m;
}

Mat6 Mat6::transposed() const {
    Mat6 t;
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) t(r, c) = (*this)(c, r);
    return t;
}

double Mat6::frobenius() const {
    double s = 0.0;
    for (double v : e) s += v * v;
    return std::sqrt(s);
}

Mat6 Mat6::operator+(const Mat6& o) const {
    Mat6 r;
    for (int i = 0; i < 36; ++i) r.e[i] = e[i] + o.e[i];
    return r;
}

Mat6 Mat6::operator*(double s) const {
    Mat6 r;
    for (int i = 0; i < 36; ++i) r.e[i] = e[i] * s;
    return r;
}

Mat6 Mat6::operator*(const Mat6& o) const {
    Mat6 r;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            double s = 0.0;
            for (int k = 0; k < 6; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    return r;
}

Vec6 Mat6::operator*(const Vec6& v) const {
    const double in[6] = {v.upper.x, v.upper.y, v.upper.z, v.lower.x, v.lower.y, v.lower.z};
    double out[6] = {};
    for (int i = 0; i < 6; ++i)
        for (int k = 0; k < 6; ++k) out[i] += (*this)(i, k) * in[k];
    return {{out[0], out[1], out[2]}, {out[3], out[4], out[5]}};
}

}  // namespace rateobs
