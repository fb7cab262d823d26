#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rateobs/geometry.hpp"
#include "rateobs/rng.hpp"
#include "test_support.hpp"

using namespace rateobs;
using test_support::cubic_min_eigenvalue;
using test_support::frobenius_distance;
using test_support::polar_oracle;
using test_support::random_rotation;
using test_support::random_unit;
using test_support::random_vec;

namespace {
const Vec3 e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
}

TEST_CASE("skew reproduces the cross product on the basis") {
    CHECK((skew(e1) * e2 - e3).norm() == 0.0);
    CHECK((skew(e2) * e3 - e1).norm() == 0.0);
    CHECK((skew(e3) * e1 - e2).norm() == 0.0);
}

TEST_CASE("skew(v) v vanishes and skew is antisymmetric in its arguments") {
    Pcg32 rng(42);
    for (int i = 0; i < 200; ++i) {
        const Vec3 v = random_vec(rng, 5.0);
        const Vec3 w = random_vec(rng, 5.0);
        CHECK((skew(v) * v).norm() == 0.0);
        CHECK((skew(v) * w + skew(w) * v).norm() <= 1e-14 * (v.norm() * w.norm() + 1.0));
        const Mat3 s = skew(v);
        CHECK((s + s.transposed()).frobenius() == 0.0);
    }
}

TEST_CASE("skew squared of a unit vector is the projector identity") {
    Pcg32 rng(7);
    for (int i = 0; i < 200; ++i) {
        const Vec3 u = random_unit(rng);
        const Mat3 lhs = skew(u) * skew(u);
        const Mat3 rhs = Mat3::outer(u, u) - Mat3::identity();
        CHECK(frobenius_distance(lhs, rhs) <= 1e-15);
        // Gramian form used by the excitation analysis.
        const Mat3 g = skew(u).transposed() * skew(u);
        CHECK(frobenius_distance(g, Mat3::identity() - Mat3::outer(u, u)) <= 1e-14);
    }
}

TEST_CASE("rotation about an axis: basic identities") {
    const Rotation r0 = Rotation::about_axis(e3, 0.0);
    CHECK(frobenius_distance(r0.matrix(), Mat3::identity()) == 0.0);

    const Rotation quarter = Rotation::about_axis(e3, M_PI / 2.0);
    CHECK((quarter * e1 - e2).norm() <= 1e-15);

    Pcg32 rng(3);
    for (int i = 0; i < 100; ++i) {
        const Vec3 u = random_unit(rng);
        const double zeta = test_support::uniform(rng, -6.0, 6.0);
        const Rotation r = Rotation::about_axis(u, zeta);
        CHECK((r * u - u).norm() <= 1e-15);
        const Rotation inv = Rotation::about_axis(u, -zeta);
        CHECK(frobenius_distance((r * inv).matrix(), Mat3::identity()) <= 1e-12);
    }
}

TEST_CASE("rotation about a non-unit axis is rejected") {
    CHECK_THROWS_AS(Rotation::about_axis(Vec3{1.0, 1.0, 0.0}, 0.5), InvalidInput);
    CHECK_THROWS_AS(Rotation::about_axis(Vec3{0.0, 0.0, 0.0}, 0.5), InvalidInput);
}

TEST_CASE("Rotation::from_matrix validates orthonormality and handedness") {
    CHECK_NOTHROW(Rotation::from_matrix(Mat3::identity()));
    Mat3 sheared = Mat3::identity();
    sheared(0, 1) = 1e-6;
    CHECK_THROWS_AS(Rotation::from_matrix(sheared), InvalidInput);
    Mat3 mirror = Mat3::identity();
    mirror(2, 2) = -1.0;
    CHECK_THROWS_AS(Rotation::from_matrix(mirror), InvalidInput);
}

TEST_CASE("reorthonormalize: identity fixed point, scale removal") {
    const Rotation id = reorthonormalize(Mat3::identity());
    CHECK(frobenius_distance(id.matrix(), Mat3::identity()) == 0.0);

    Pcg32 rng(11);
    for (int i = 0; i < 50; ++i) {
        const Rotation r = random_rotation(rng);
        const Rotation back = reorthonormalize(r.matrix() * 1.001);
        CHECK(frobenius_distance(back.matrix(), r.matrix()) <= 1e-12);
        // Idempotence on exact rotations.
        const Rotation again = reorthonormalize(back.matrix());
        CHECK(frobenius_distance(again.matrix(), back.matrix()) == 0.0);
    }
}

TEST_CASE("reorthonormalize matches the polar-decomposition oracle") {
    Pcg32 rng(13);
    for (int i = 0; i < 100; ++i) {
        const Rotation r = random_rotation(rng);
        Mat3 noise{};
        for (auto& v : noise.e) v = test_support::uniform(rng, -1.0, 1.0);
        noise = noise * (1.0 / noise.frobenius());

        const Mat3 perturbed = r.matrix() + noise * 1e-7;
        const Rotation fixed = reorthonormalize(perturbed);
        CHECK(frobenius_distance(fixed.matrix(), r.matrix()) <= 1e-6);
        CHECK(frobenius_distance(fixed.matrix(), polar_oracle(perturbed)) <= 1e-12);

        // Larger perturbations still agree with the oracle.
        const Mat3 rough = r.matrix() + noise * 0.02;
        CHECK(frobenius_distance(reorthonormalize(rough).matrix(), polar_oracle(rough)) <=
              1e-10);
    }
}

TEST_CASE("reorthonormalize rejects inputs far from SO(3)") {
    CHECK_THROWS_AS(reorthonormalize(Mat3::identity() * 2.0), InvalidInput);
    Mat3 mirror = Mat3::identity();
    mirror(1, 1) = -1.0;
    CHECK_THROWS_AS(reorthonormalize(mirror), InvalidInput);
}

TEST_CASE("symmetric eigenvalues: diagonal cases") {
    CHECK(sym_min_eigenvalue(Mat3::identity()) == doctest::Approx(1.0).epsilon(1e-14));
    Mat3 d{};
    d(0, 0) = 3.0;
    d(1, 1) = 2.0;
    d(2, 2) = 5.0;
    CHECK(sym_min_eigenvalue(d) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("symmetric eigenvalues agree with the characteristic-cubic oracle") {
    Pcg32 rng(17);
    for (int i = 0; i < 300; ++i) {
        Mat3 m{};
        for (int r = 0; r < 3; ++r)
            for (int c = r; c < 3; ++c) {
                const double v = test_support::uniform(rng, -3.0, 3.0);
                m(r, c) = v;
                m(c, r) = v;
            }
        const double got = sym_min_eigenvalue(m);
        const double want = cubic_min_eigenvalue(m);
        CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("asymmetric input to the eigen solver is rejected") {
    Mat3 m = Mat3::identity();
    m(0, 1) = 1e-3;
    CHECK_THROWS_AS(sym_min_eigenvalue(m), InvalidInput);
}

TEST_CASE("Vec6 norm decomposition is exact") {
    Pcg32 rng(23);
    for (int i = 0; i < 100; ++i) {
        const Vec6 x{random_vec(rng, 4.0), random_vec(rng, 4.0)};
        CHECK(x.norm2() == x.upper.norm2() + x.lower.norm2());
    }
}

TEST_CASE("checked vector construction rejects non-finite components") {
    CHECK_THROWS_AS(Vec3::checked(std::nan(""), 0.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(Vec3::checked(0.0, INFINITY, 0.0), InvalidInput);
    CHECK_NOTHROW(Vec3::checked(1.0, -2.0, 3.0));
}

TEST_CASE("Mat6 block assembly and multiplication") {
    const Mat6 a = Mat6::from_blocks(Mat3::identity() * -1.0, skew(e1), skew(e1), Mat3::zero());
    CHECK(a(0, 0) == -1.0);
    CHECK(a(1, 1) == -1.0);
    CHECK(a(2, 2) == -1.0);
    CHECK(a(1, 5) == -1.0);  // skew(e1)(1,2)
    CHECK(a(2, 4) == 1.0);
    CHECK(a(4, 2) == -1.0);
    CHECK(a(5, 1) == 1.0);

    const Mat6 prod = Mat6::identity() * a;
    CHECK((prod.transposed().transposed() + a * -1.0).frobenius() == 0.0);
}
