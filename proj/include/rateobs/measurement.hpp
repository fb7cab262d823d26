#pragma once

#include <cstdint>
#include <vector>

#include "rateobs/dynamics.hpp"
#include "rateobs/geometry.hpp"
#include "rateobs/rng.hpp"

namespace rateobs {

/// Constant reference direction expressed in the inertial frame, unit norm
/// within 1e-12.
class ReferenceVector {
public:
    explicit ReferenceVector(const Vec3& unit);
    const Vec3& value() const { return v_; }

private:
    Vec3 v_;
};

/// Vector sensor: constant mounting rotation, white-noise density in
/// Hz^(-1/2) and the seed that makes noisy runs reproducible.
struct SensorModel {
    Rotation mounting{};           // sensor-to-body alignment, identity by default
    double noise_density = 0.0;    // Hz^(-1/2)
    std::uint64_t seed = 0;
    bool renormalize = false;
};

/// Uniform-grid series of body-frame direction samples.
struct MeasurementSeries {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<Vec3> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double end_time() const { return time(size() - 1); }
};

/// Ideal measurement: the reference direction seen from the body frame,
/// R^T a_ring.
Vec3 measure_clean(const Rotation& attitude, const ReferenceVector& a_ring);

/// Per-sample standard deviation of the white-noise model at sample
/// period dt: noise_density / sqrt(2 dt).
double noise_sample_std(double noise_density, double dt);

/// One sensor reading: mount the clean direction, add per-axis Gaussian
/// noise, undo the mounting. With `renormalize` set the output is scaled to
/// unit norm whenever its norm exceeds 0.5. Advances rng in place.
Vec3 apply_sensor(const Vec3& clean, const SensorModel& sensor, double dt, NoiseRng& rng);

/// Clean measurement series along a simulated trajectory.
MeasurementSeries measure_trajectory(const Trajectory& traj, const ReferenceVector& a_ring);

/// Applies the sensor model sample by sample, seeding the noise stream from
/// sensor.seed.
MeasurementSeries apply_sensor_series(const MeasurementSeries& clean, const SensorModel& sensor);

/// Sample the series between grid nodes with the 4-point Lagrange cubic
/// (one-sided at the ends). At grid nodes this returns the stored sample
/// exactly; it exists so integrators can evaluate RK4 substages without
/// degrading to first order.
Vec3 sample_series(const MeasurementSeries& series, double t);

}  // namespace rateobs
