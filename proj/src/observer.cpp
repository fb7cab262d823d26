#include "rateobs/observer.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rateobs {

ObserverState observer_rhs(const ObserverState& xhat, const Vec3& a_meas,
                           const InertiaModel& J, const Vec3& tau, double k) {
    if (!(k > 0.0)) throw InvalidInput("observer gain must be positive");
    const Vec3 innovation = xhat.a_hat - a_meas;
    return {cross(a_meas, xhat.omega_hat) - innovation * k,
            euler_rhs(J, xhat.omega_hat, tau) + cross(a_meas, innovation) * (k * k)};
}

ObserverRun run_observer(const MeasurementSeries& measurements, const InertiaModel& J,
                         const TorqueModel& torque, const ObserverConfig& config,
                         const Trajectory* truth, const ReferenceVector* a_ring) {
    if (!(config.k > 0.0)) throw InvalidInput("observer gain must be positive");
    if (measurements.size() < 2) throw InvalidInput("measurement series needs >= 2 samples");
    if (truth) {
        if (!a_ring)
            throw InvalidInput("error series requires the reference vector alongside the truth");
        const bool grid_match = truth->size() == measurements.size() &&
                                std::abs(truth->t0 - measurements.t0) < 1e-12 &&
                                std::abs(truth->dt - measurements.dt) < 1e-12;
        if (!grid_match)
            throw InvalidInput("truth trajectory grid does not match the measurement grid");
    }

    ObserverRun run;
    run.t0 = measurements.t0;
    run.dt = measurements.dt;
    run.estimates.reserve(measurements.size());

    ObserverState x = config.init.value_or(
        ObserverState{measurements.values.front(), Vec3{0.0, 0.0, 0.0}});
    run.estimates.push_back(x);

    const double k = config.k;
    for (std::size_t n = 0; n + 1 < measurements.size(); ++n) {
        const double t = measurements.time(n);
        x = rk4_step(
            [&](double tt, const ObserverState& s) {
                return observer_rhs(s, sample_series(measurements, tt), J, torque.at(tt), k);
            },
            t, x, measurements.dt);
        if (!x.a_hat.finite() || !x.omega_hat.finite() || x.omega_hat.norm() > 1e6)
            throw NumericFailure("observer state blew up at t = " + std::to_string(t));
        run.estimates.push_back(x);
    }

    if (truth) {
        run.errors.reserve(run.size());
        for (std::size_t i = 0; i < run.size(); ++i) {
            const Vec3 a_true = measure_clean(truth->states[i].attitude, *a_ring);
            run.errors.push_back(ErrorState{a_true - run.estimates[i].a_hat,
                                            truth->states[i].omega - run.estimates[i].omega_hat});
        }
    }
    return run;
}

double true_disturbance_norm(const InertiaModel& J, const Vec3& omega,
                             const Vec3& omega_tilde, double k) {
    if (!(k > 0.0)) throw InvalidInput("gain must be positive");
    const Vec3 diff = gyroscopic_term(J, omega) - gyroscopic_term(J, omega - omega_tilde);
    return diff.norm() / k;
}

double disturbance_bound(const ErrorState& err, double k, double d, double omega_max) {
    if (!(k > 0.0)) throw InvalidInput("gain must be positive");
    const double z = std::sqrt(err.a_tilde.norm2() + err.omega_tilde.norm2() / (k * k));
    return d * (std::sqrt(2.0) * omega_max * z + k * z * z);
}

ConvergenceBudget convergence_budget(double c, double T, double mu, double omega_max,
                                     double d, double k) {
    if (!(c > 0.0) || !(c < 1.0)) throw InvalidInput("decay constant c must lie in (0,1)");
    if (!(T > 0.0)) throw InvalidInput("window length T must be positive");
    if (!(k > 0.0)) throw InvalidInput("gain must be positive");
    if (!(omega_max > 0.0)) throw InvalidInput("omega_max must be positive");
    if (d < 0.0) throw InvalidInput("distordance must be >= 0");

    ConvergenceBudget b;
    b.c = c;
    b.T = T;
    b.mu = mu;
    b.omega_max = omega_max;
    b.k = k;
    b.d = d;
    b.d_star = (1.0 - c) / (2.0 * std::sqrt(2.0) * T * omega_max);
    b.d_below_d_star = d < b.d_star;
    if (d == 0.0) {
        b.r = std::numeric_limits<double>::infinity();
    } else if (!b.d_below_d_star) {
        b.r = 0.0;  // the sufficient condition gives no basin
    } else {
        const double factor = 1.0 - 2.0 * std::sqrt(2.0) * d * T * omega_max / (1.0 - c);
        const double r2 = std::pow(1.0 - c, 3) /
                          (8.0 * std::sqrt(3.0) * d * d * T * T * T * k * k * k) * factor *
                          factor;
        b.r = std::sqrt(r2);
    }
    return b;
}

}  // namespace rateobs
