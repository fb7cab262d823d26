#include "rateobs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rateobs {

namespace {

constexpr double kOmegaBlowupLimit = 1e6;  // rad/s

}  // namespace

InertiaModel::InertiaModel(double j1, double j2, double j3) : j_{j1, j2, j3} {
    for (double j : j_) {
        if (!std::isfinite(j) || j <= 0.0)
            throw InvalidInput("inertia moments must be finite and positive");
    }
    // Ji <= Jj + Jk for all permutations; equality happens for flat bodies.
    const double slack = 1e-12 * std::max({j1, j2, j3});
    if (j1 > j2 + j3 + slack || j2 > j1 + j3 + slack || j3 > j1 + j2 + slack)
        throw InvalidInput("inertia moments violate the rigid-body triangle inequality");
}

double InertiaModel::min() const { return std::min({j_[0], j_[1], j_[2]}); }

double distordance(const InertiaModel& J) {
    const double d1 = std::abs(J.j3() - J.j2()) / J.j1();
    const double d2 = std::abs(J.j1() - J.j3()) / J.j2();
    const double d3 = std::abs(J.j2() - J.j1()) / J.j3();
    return std::max({d1, d2, d3});
}

Vec3 gyroscopic_term(const InertiaModel& J, const Vec3& omega) {
    return {(J.j2() - J.j3()) / J.j1() * omega.y * omega.z,
            (J.j3() - J.j1()) / J.j2() * omega.z * omega.x,
            (J.j1() - J.j2()) / J.j3() * omega.x * omega.y};
}

Vec3 euler_rhs(const InertiaModel& J, const Vec3& omega, const Vec3& tau) {
    const Vec3 e = gyroscopic_term(J, omega);
    return {e.x + tau.x / J.j1(), e.y + tau.y / J.j2(), e.z + tau.z / J.j3()};
}

TorqueModel TorqueModel::constant(const Vec3& value) {
    TorqueModel t;
    t.kind_ = Kind::Constant;
    t.value_ = Vec3::checked(value.x, value.y, value.z);
    return t;
}

TorqueModel TorqueModel::from_function(std::function<Vec3(double)> fn) {
    TorqueModel t;
    t.kind_ = Kind::Function;
    t.fn_ = std::move(fn);
    return t;
}

Vec3 TorqueModel::at(double t) const {
    switch (kind_) {
        case Kind::Zero: return {0.0, 0.0, 0.0};
        case Kind::Constant: return value_;
        case Kind::Function: return fn_(t);
    }
    return {0.0, 0.0, 0.0};
}

BodyMotion coupled_rhs(const BodyMotion& s, const InertiaModel& J, const Vec3& tau) {
    return {s.attitude * skew(s.omega), euler_rhs(J, s.omega, tau)};
}

RigidBodyState body_step(const InertiaModel& J, const TorqueModel& torque, double t,
                         const RigidBodyState& s, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("integration step must be positive");
    const BodyMotion raw{s.attitude.matrix(), s.omega};
    const BodyMotion next = rk4_step(
        [&](double tt, const BodyMotion& x) { return coupled_rhs(x, J, torque.at(tt)); }, t,
        raw, dt);
    return {reorthonormalize(next.attitude), next.omega};
}

Trajectory simulate(const InertiaModel& J, const TorqueModel& torque, const Rotation& r0,
                    const Vec3& omega0, const SimulationGrid& grid, double t0) {
    if (!(grid.dt > 0.0) || !std::isfinite(grid.dt))
        throw InvalidInput("grid.dt must be positive");
    if (!(grid.duration >= grid.dt) || !std::isfinite(grid.duration))
        throw InvalidInput("grid.duration must be at least grid.dt");

    const auto steps = static_cast<std::size_t>(grid.duration / grid.dt + 1e-9);
    Trajectory traj;
    traj.t0 = t0;
    traj.dt = grid.dt;
    traj.states.reserve(steps + 1);
    traj.states.push_back({r0, omega0});

    for (std::size_t n = 0; n < steps; ++n) {
        const double t = t0 + static_cast<double>(n) * grid.dt;
        RigidBodyState next = body_step(J, torque, t, traj.states.back(), grid.dt);
        if (!next.omega.finite() || next.omega.norm() > kOmegaBlowupLimit)
            throw NumericFailure("angular velocity blew up at t = " + std::to_string(t));
        traj.states.push_back(next);
    }
    return traj;
}

double kinetic_quadratic(const InertiaModel& J, const Vec3& omega) {
    return dot(omega, J.apply(omega));
}

Vec3 angular_momentum_inertial(const InertiaModel& J, const RigidBodyState& s) {
    return s.attitude * J.apply(s.omega);
}

double omega_bound_free_rotation(const InertiaModel& J, const Vec3& omega0) {
    return J.apply(omega0).norm() / J.min();
}

namespace {

// Groups principal axes by equal inertia within the relative tolerance.
// Returns group id per axis (0-based, by first member).
std::array<int, 3> inertia_groups(const InertiaModel& J, double rel_tol) {
    std::array<int, 3> group = {0, 1, 2};
    const double scale = std::max({J.j1(), J.j2(), J.j3()});
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < a; ++b)
            if (std::abs(J.j(a) - J.j(b)) <= rel_tol * scale) {
                group[a] = group[b];
                break;
            }
    return group;
}

double component(const Vec3& v, int axis) {
    return axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
}

// Angle between omega and the eigenspace spanned by the axes of one group.
double angle_to_eigenspace(const Vec3& omega, const std::array<int, 3>& group, int gid) {
    double proj2 = 0.0;
    for (int a = 0; a < 3; ++a)
        if (group[a] == gid) {
            const double c = component(omega, a);
            proj2 += c * c;
        }
    const double n2 = omega.norm2();
    const double resid = std::sqrt(std::max(0.0, n2 - proj2));
    return std::atan2(resid, std::sqrt(proj2));
}

}  // namespace

TrajectoryClass classify_trajectory(const InertiaModel& J, const Vec3& omega0,
                                    const ClassifyTolerances& tol) {
    TrajectoryClass out;
    if (omega0.norm() == 0.0) {
        // Degenerate constant solution; treated as a steady spin with no axis.
        out.type = TrajectoryType::SteadySpin;
        out.axis = -1;
        return out;
    }

    const std::array<int, 3> group = inertia_groups(J, tol.inertia_rel);

    // Eigenvector test against every distinct eigenspace.
    for (int gid = 0; gid < 3; ++gid) {
        bool exists = false;
        for (int a = 0; a < 3; ++a) exists = exists || group[a] == gid;
        if (!exists) continue;
        if (angle_to_eigenspace(omega0, group, gid) <= tol.axis_angle) {
            out.type = TrajectoryType::SteadySpin;
            // Report the group axis carrying the largest component.
            int best = -1;
            double best_abs = -1.0;
            for (int a = 0; a < 3; ++a)
                if (group[a] == gid && std::abs(component(omega0, a)) > best_abs) {
                    best = a;
                    best_abs = std::abs(component(omega0, a));
                }
            out.axis = best;
            return out;
        }
    }

    // Exactly two equal inertias -> axisymmetric precession.
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            if (group[a] == group[b] && group[3 - a - b] != group[a]) {
                out.type = TrajectoryType::AxisymmetricPrecession;
                out.equal_pair = {a, b};
                return out;
            }

    // Strict ordering from here on. Sort axes by descending inertia.
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return J.j(a) > J.j(b); });
    const double jl = J.j(idx[0]), jm = J.j(idx[1]), js = J.j(idx[2]);
    const double gamma = std::sqrt(js * (jm - js) / (jl * (jl - jm)));
    const double lhs = std::abs(component(omega0, idx[0]));
    const double rhs = gamma * std::abs(component(omega0, idx[2]));
    const double denom = std::max(lhs, rhs);
    if (denom > 0.0 && std::abs(lhs - rhs) <= tol.separatrix_rel * denom) {
        out.type = TrajectoryType::Separatrix;
        return out;
    }
    out.type = TrajectoryType::GenericTumble;
    return out;
}

SteadySpinSolution::SteadySpinSolution(const Rotation& r0, const Vec3& axis_inertial,
                                       double rate, double t0)
    : r0_(r0), axis_(axis_inertial), rate_(rate), t0_(t0) {}

Rotation SteadySpinSolution::at(double t) const {
    return Rotation::about_axis(axis_, rate_ * (t - t0_)) * r0_;
}

SteadySpinSolution analytic_steady_spin(const InertiaModel& J, const Rotation& r0,
                                        const Vec3& omega0, double t0,
                                        const ClassifyTolerances& tol) {
    const double w = omega0.norm();
    if (w == 0.0) return SteadySpinSolution(r0, {1.0, 0.0, 0.0}, 0.0, t0);
    const TrajectoryClass cls = classify_trajectory(J, omega0, tol);
    if (cls.type != TrajectoryType::SteadySpin)
        throw InvalidInput("omega0 is not a principal-axis eigenvector of J");
    const Vec3 u = r0 * (omega0 * (1.0 / w));
    return SteadySpinSolution(r0, u, w, t0);
}

AxisymmetricParams axisymmetric_params(const InertiaModel& J, const Vec3& omega0,
                                       const ClassifyTolerances& tol) {
    const std::array<int, 3> group = inertia_groups(J, tol.inertia_rel);
    AxisymmetricParams out;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            if (group[a] == group[b] && group[3 - a - b] != group[a]) {
                out.symmetric_pair = {a, b};
                out.spin_axis = 3 - a - b;
            }
    if (out.spin_axis < 0)
        throw InvalidInput("axisymmetric parameters require exactly two equal inertias");

    const double js = 0.5 * (J.j(out.symmetric_pair[0]) + J.j(out.symmetric_pair[1]));
    const double jq = J.j(out.spin_axis);
    const double wq = component(omega0, out.spin_axis);
    const double w_s1 = component(omega0, out.symmetric_pair[0]);
    const double w_s2 = component(omega0, out.symmetric_pair[1]);
    const double transverse2 = w_s1 * w_s1 + w_s2 * w_s2;
    if (transverse2 == 0.0)
        throw InvalidInput("omega0 has no transverse component (steady spin, not precession)");
    if (wq == 0.0)
        throw InvalidInput("omega0 has no spin-axis component (planar rotation)");

    const Vec3 m = J.apply(omega0);
    out.p = js * std::sqrt(transverse2) / m.norm();
    out.xi1 = std::sqrt(transverse2 + (jq / js) * (jq / js) * wq * wq);
    out.xi2 = (jq / js - 1.0) * wq;
    return out;
}

}  // namespace rateobs
