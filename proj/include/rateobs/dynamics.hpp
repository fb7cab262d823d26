#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "rateobs/geometry.hpp"

namespace rateobs {

/// Principal moments of inertia, held in SI units (kg m^2).
/// Valid models are positive and satisfy the rigid-body triangle
/// inequalities Ji <= Jj + Jk.
class InertiaModel {
public:
    InertiaModel(double j1, double j2, double j3);

    double j1() const { return j_[0]; }
    double j2() const { return j_[1]; }
    double j3() const { return j_[2]; }
    double j(int axis) const { return j_[axis]; }
    double min() const;

    /// J v
    Vec3 apply(const Vec3& v) const { return {j_[0] * v.x, j_[1] * v.y, j_[2] * v.z}; }
    /// J^{-1} v
    Vec3 solve(const Vec3& v) const { return {v.x / j_[0], v.y / j_[1], v.z / j_[2]}; }

private:
    std::array<double, 3> j_;
};

/// Asymmetry measure: max of the normalized inertia differences
/// |Jk - Jj| / Ji over the three cyclic index choices. 0 for a symmetric
/// body, at most 1 for any physically valid inertia.
double distordance(const InertiaModel& J);

/// Gyroscopic part of the Euler equations: E(w) = J^{-1}(J w x w).
Vec3 gyroscopic_term(const InertiaModel& J, const Vec3& omega);

/// Euler equations right-hand side: J^{-1}(J w x w + tau).
Vec3 euler_rhs(const InertiaModel& J, const Vec3& omega, const Vec3& tau);

/// External torque in body frame (N m).
class TorqueModel {
public:
    static TorqueModel zero() { return TorqueModel{}; }
    static TorqueModel constant(const Vec3& value);
    static TorqueModel from_function(std::function<Vec3(double)> fn);

    Vec3 at(double t) const;
    bool is_zero() const { return kind_ == Kind::Zero; }

private:
    enum class Kind { Zero, Constant, Function };
    Kind kind_ = Kind::Zero;
    Vec3 value_{};
    std::function<Vec3(double)> fn_;
};

/// Attitude + body-frame angular velocity. `attitude` columns are the body
/// axes expressed in the inertial frame, so a body vector v reads
/// attitude * v in inertial coordinates and the reference direction maps to
/// the body frame as attitude^T * a_ring.
struct RigidBodyState {
    Rotation attitude;
    Vec3 omega;
};

/// Unconstrained integration state: the attitude block is a plain matrix so
/// RK4 stage arithmetic stays linear; it is projected back to SO(3) once per
/// step.
struct BodyMotion {
    Mat3 attitude;
    Vec3 omega;

    BodyMotion operator+(const BodyMotion& o) const {
        return {attitude + o.attitude, omega + o.omega};
    }
    BodyMotion operator*(double s) const { return {attitude * s, omega * s}; }
};

/// Coupled kinematics/dynamics right-hand side: (R skew(w), euler_rhs).
BodyMotion coupled_rhs(const BodyMotion& s, const InertiaModel& J, const Vec3& tau);

/// Classical fixed-step RK4 for any state with + and scalar *.
template <class State, class Rhs>
State rk4_step(Rhs&& rhs, double t, const State& s, double dt) {
    const State k1 = rhs(t, s);
    const State k2 = rhs(t + 0.5 * dt, s + k1 * (0.5 * dt));
    const State k3 = rhs(t + 0.5 * dt, s + k2 * (0.5 * dt));
    const State k4 = rhs(t + dt, s + k3 * dt);
    return s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
}

/// One RK4 step of the coupled rigid-body system; the attitude is
/// reorthonormalized after the step.
RigidBodyState body_step(const InertiaModel& J, const TorqueModel& torque, double t,
                         const RigidBodyState& s, double dt);

struct SimulationGrid {
    double dt = 0.0;       // s, > 0
    double duration = 0.0; // s, >= dt
};

struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<RigidBodyState> states;

    std::size_t size() const { return states.size(); }
    double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

/// Integrates the rigid body over the sample grid t0 + n dt, n = 0..N with
/// N = floor(duration/dt). Throws InvalidInput on a bad grid and
/// NumericFailure if |omega| exceeds 1e6 rad/s or turns non-finite.
Trajectory simulate(const InertiaModel& J, const TorqueModel& torque, const Rotation& r0,
                    const Vec3& omega0, const SimulationGrid& grid, double t0 = 0.0);

/// Twice the rotational kinetic energy, w^T J w. Conserved in free rotation.
double kinetic_quadratic(const InertiaModel& J, const Vec3& omega);

/// Angular momentum in the inertial frame, R J w. Conserved in free rotation.
Vec3 angular_momentum_inertial(const InertiaModel& J, const RigidBodyState& s);

/// |omega(t)| bound along a free-rotation trajectory: |J w0| / Jmin.
double omega_bound_free_rotation(const InertiaModel& J, const Vec3& omega0);

/// Free-rotation solution taxonomy.
enum class TrajectoryType {
    SteadySpin,              // omega is a principal-axis eigenvector (constant)
    Separatrix,              // strict inertia ordering, singular initial set
    GenericTumble,           // strict ordering, periodic non-planar omega
    AxisymmetricPrecession,  // exactly two equal inertias, omega not an eigenvector
};

struct TrajectoryClass {
    TrajectoryType type = TrajectoryType::GenericTumble;
    int axis = -1;                          // SteadySpin: principal axis index (0..2), -1 if omega0 = 0
    std::array<int, 2> equal_pair = {-1, -1};  // AxisymmetricPrecession: the equal-inertia axes
};

struct ClassifyTolerances {
    double axis_angle = 1e-8;     // rad, angle to a principal eigenspace
    double inertia_rel = 1e-9;    // relative inertia equality
    double separatrix_rel = 1e-9; // relative residual of the separatrix condition
};

/// Classifies the free-rotation solution type from the initial angular
/// velocity. omega0 = 0 is reported as a degenerate SteadySpin.
TrajectoryClass classify_trajectory(const InertiaModel& J, const Vec3& omega0,
                                    const ClassifyTolerances& tol = {});

/// Closed-form steady-spin attitude: R(t) = r_u(w (t - t0)) R0 with
/// w = |omega0| and u = R0 omega0 / w.
class SteadySpinSolution {
public:
    SteadySpinSolution(const Rotation& r0, const Vec3& axis_inertial, double rate, double t0);

    Rotation at(double t) const;
    const Vec3& axis() const { return axis_; }
    double rate() const { return rate_; }

private:
    Rotation r0_;
    Vec3 axis_;
    double rate_;
    double t0_;
};

/// Builds the steady-spin closed form; omega0 must be a principal-axis
/// eigenvector of J within the angular tolerance, else InvalidInput.
SteadySpinSolution analytic_steady_spin(const InertiaModel& J, const Rotation& r0,
                                        const Vec3& omega0, double t0 = 0.0,
                                        const ClassifyTolerances& tol = {});

/// Axisymmetric-precession constants. With the inertial frame aligned so
/// e3 = M/|M|, the body axis of symmetry traces
/// (p cos xi1 (t-t1), p sin xi1 (t-t1), sqrt(1-p^2)).
struct AxisymmetricParams {
    double p = 0.0;    // in (0,1)
    double xi1 = 0.0;  // precession rate, > 0 (equals |M| / J_transverse)
    double xi2 = 0.0;  // body-frame relative spin rate, != 0
    std::array<int, 2> symmetric_pair = {-1, -1};
    int spin_axis = -1;  // the distinct-inertia axis
};

/// Computes (p, xi1, xi2) for a body with exactly two equal inertias.
/// Requires a nonzero transverse component and nonzero spin-axis component.
AxisymmetricParams axisymmetric_params(const InertiaModel& J, const Vec3& omega0,
                                       const ClassifyTolerances& tol = {});

}  // namespace rateobs
