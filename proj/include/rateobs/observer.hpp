#pragma once

#include <optional>
#include <vector>

#include "rateobs/dynamics.hpp"
#include "rateobs/geometry.hpp"
#include "rateobs/measurement.hpp"

namespace rateobs {

/// Extended observer state (a_hat, omega_hat). a_hat is deliberately not
/// projected to unit norm: the estimation law never does, and projecting
/// would change the error dynamics the convergence analysis relies on.
struct ObserverState {
    Vec3 a_hat;
    Vec3 omega_hat;

    ObserverState operator+(const ObserverState& o) const {
        return {a_hat + o.a_hat, omega_hat + o.omega_hat};
    }
    ObserverState operator*(double s) const { return {a_hat * s, omega_hat * s}; }
};

struct ObserverConfig {
    double k = 1.0;  // gain, > 0
    std::optional<ObserverState> init;  // default: a_hat = first measurement, omega_hat = 0
};

/// Estimation error (a - a_hat, omega - omega_hat).
struct ErrorState {
    Vec3 a_tilde;
    Vec3 omega_tilde;

    double norm() const {
        return std::sqrt(a_tilde.norm2() + omega_tilde.norm2());
    }
};

/// Observer vector field. Both output-injection terms use the measured
/// direction: a_hat' = a x omega_hat - k (a_hat - a), and
/// omega_hat' = E(omega_hat) + J^{-1} tau + k^2 a x (a_hat - a).
ObserverState observer_rhs(const ObserverState& xhat, const Vec3& a_meas,
                           const InertiaModel& J, const Vec3& tau, double k);

struct ObserverRun {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<ObserverState> estimates;
    std::vector<ErrorState> errors;  // empty when no truth was provided

    std::size_t size() const { return estimates.size(); }
    double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

/// Integrates the observer over the measurement grid with RK4, sampling the
/// measurement series at the substage times (cubic between nodes). When a
/// truth trajectory is given (together with the reference vector) it must
/// share the grid, and the error series is filled alongside the estimates.
ObserverRun run_observer(const MeasurementSeries& measurements, const InertiaModel& J,
                         const TorqueModel& torque, const ObserverConfig& config,
                         const Trajectory* truth = nullptr,
                         const ReferenceVector* a_ring = nullptr);

/// Norm of the error-dynamics disturbance, |E(omega) - E(omega_hat)| / k.
double true_disturbance_norm(const InertiaModel& J, const Vec3& omega,
                             const Vec3& omega_tilde, double k);

/// Bound on the disturbance: d (sqrt(2) omega_max |Z| + k |Z|^2) with
/// Z = (a_tilde, omega_tilde / k).
double disturbance_bound(const ErrorState& err, double k, double d, double omega_max);

/// Sufficient-condition quantities for exponential convergence, evaluated
/// from an empirical window-decay constant c.
struct ConvergenceBudget {
    double c = 0.0;          // window decay constant, in (0,1)
    double T = 0.0;          // window length, s
    double mu = 0.0;         // excitation margin
    double omega_max = 0.0;  // rad/s
    double k = 0.0;
    double d = 0.0;          // distordance of the body
    double d_star = 0.0;     // (1-c) / (2 sqrt(2) T omega_max)
    double r = 0.0;          // basin-ellipsoid radius; 0 when d >= d_star, inf when d = 0
    bool d_below_d_star = false;
};

/// Evaluates d_star and the basin radius r. Throws InvalidInput unless
/// 0 < c < 1, T > 0, k > 0 and omega_max > 0.
ConvergenceBudget convergence_budget(double c, double T, double mu, double omega_max,
                                     double d, double k);

}  // namespace rateobs
