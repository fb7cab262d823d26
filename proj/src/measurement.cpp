#include "rateobs/measurement.hpp"

#include <cmath>

namespace rateobs {

ReferenceVector::ReferenceVector(const Vec3& unit) : v_(unit) {
    if (!v_.finite()) throw InvalidInput("reference vector must be finite");
    if (std::abs(v_.norm() - 1.0) > 1e-12)
        throw InvalidInput("reference vector must be unit length within 1e-12");
}

Vec3 measure_clean(const Rotation& attitude, const ReferenceVector& a_ring) {
    return attitude.apply_inverse(a_ring.value());
}

double noise_sample_std(double noise_density, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("sample period must be positive");
    return noise_density / std::sqrt(2.0 * dt);
}

Vec3 apply_sensor(const Vec3& clean, const SensorModel& sensor, double dt, NoiseRng& rng) {
    if (sensor.noise_density < 0.0) throw InvalidInput("noise density must be >= 0");
    if (sensor.noise_density == 0.0) {
        // Mounting round-trip is exact: R_mb^T R_mb = I.
        return clean;
    }
    const double sigma = noise_sample_std(sensor.noise_density, dt);
    const Vec3 mounted = sensor.mounting * clean;
    const Vec3 noisy = mounted + Vec3{sigma * rng.normal(), sigma * rng.normal(),
                                      sigma * rng.normal()};
    Vec3 out = sensor.mounting.apply_inverse(noisy);
    if (sensor.renormalize) {
        const double n = out.norm();
        if (n > 0.5) out = out * (1.0 / n);
    }
    return out;
}

MeasurementSeries measure_trajectory(const Trajectory& traj, const ReferenceVector& a_ring) {
    MeasurementSeries series;
    series.t0 = traj.t0;
    series.dt = traj.dt;
    series.values.reserve(traj.size());
    for (const RigidBodyState& s : traj.states)
        series.values.push_back(measure_clean(s.attitude, a_ring));
    return series;
}

MeasurementSeries apply_sensor_series(const MeasurementSeries& clean, const SensorModel& sensor) {
    MeasurementSeries out;
    out.t0 = clean.t0;
    out.dt = clean.dt;
    out.values.reserve(clean.size());
    NoiseRng rng(sensor.seed);
    for (const Vec3& v : clean.values)
        out.values.push_back(apply_sensor(v, sensor, clean.dt, rng));
    return out;
}

Vec3 sample_series(const MeasurementSeries& series, double t) {
    const std::size_t n = series.size();
    if (n == 0) throw InvalidInput("empty measurement series");
    if (n == 1) return series.values[0];

    const double pos = (t - series.t0) / series.dt;
    if (pos < -1e-9 || pos > static_cast<double>(n - 1) + 1e-9)
        throw InvalidInput("sample time outside the measurement series");

    const double rounded = std::round(pos);
    if (std::abs(pos - rounded) < 1e-9 && rounded >= 0.0 &&
        rounded <= static_cast<double>(n - 1)) {
        return series.values[static_cast<std::size_t>(rounded)];
    }

    // 4-point Lagrange cubic around the bracketing interval.
    auto base_of = [&](double p) {
        auto i = static_cast<long>(std::floor(p));
        long b = i - 1;
        if (b < 0) b = 0;
        if (b + 3 > static_cast<long>(n - 1)) b = static_cast<long>(n - 1) - 3;
        if (b < 0) b = 0;  // series with 2-3 samples degrade gracefully
        return b;
    };
    const long b = base_of(pos);
    const long m = std::min<long>(3, static_cast<long>(n - 1) - b);
    const double xr = pos - static_cast<double>(b);

    Vec3 acc{};
    for (long j = 0; j <= m; ++j) {
        double w = 1.0;
        for (long k = 0; k <= m; ++k) {
            if (k == j) continue;
            w *= (xr - static_cast<double>(k)) / static_cast<double>(j - k);
        }
        acc += series.values[static_cast<std::size_t>(b + j)] * w;
    }
    return acc;
}

}  // namespace rateobs
