#pragma once

#include <optional>
#include <vector>

#include "rateobs/dynamics.hpp"
#include "rateobs/geometry.hpp"
#include "rateobs/measurement.hpp"

namespace rateobs {

/// Sliding-window excitation Gramian of the measured direction:
/// (1/T) integral of skew(a)^T skew(a) over [t, t+T], trapezoidal on the
/// sample grid. Symmetric positive semidefinite with trace 2 for unit-norm
/// series.
Mat3 excitation_gramian(const MeasurementSeries& a_series, double t, double T);

enum class PEVerdict { PE, NotPE, Inconclusive };

/// Margin threshold separating PE from not-PE; values in
/// [inconclusive_floor, pe_threshold) are reported as inconclusive.
inline constexpr double kPeThreshold = 1e-3;
inline constexpr double kInconclusiveFloor = 1e-6;

struct PEWindow {
    double start = 0.0;
    double lambda_min = 0.0;
};

/// Theorem-style prediction of excitation from initial conditions.
/// Excitation fails only when the inertial angular momentum is aligned with
/// the reference vector on a steady spin or on a separatrix solution.
enum class PredictedCase { SteadySpinAligned, SeparatrixAligned, Generic };

struct PEPrediction {
    PredictedCase kase = PredictedCase::Generic;
    std::optional<double> mu_theoretical;  // steady spin, non-aligned only

    bool predicted_pe() const { return kase == PredictedCase::Generic; }
};

const char* to_string(PredictedCase c);
const char* to_string(PEVerdict v);

struct PEReport {
    double T = 0.0;
    double mu_empirical = 0.0;
    double min_window_start = 0.0;
    std::vector<PEWindow> windows;
    PEVerdict verdict = PEVerdict::Inconclusive;
    std::optional<PEPrediction> prediction;  // filled by the harness
};

/// Minimum Gramian eigenvalue over sliding window starts; verdict by the
/// thresholds above. Stride defaults to T/10.
PEReport pe_margin(const MeasurementSeries& a_series, double T, double stride = 0.0);

/// Predicts excitation for the free-rotation taxonomy. For a non-aligned
/// steady spin the closed-form margin min(1 - a1^2, (1 + a1^2)/2) is
/// reported, a1 being the reference-vector component along the momentum
/// axis.
PEPrediction predict_pe(const InertiaModel& J, const Rotation& r0, const Vec3& omega0,
                        const ReferenceVector& a_ring, const ClassifyTolerances& tol = {});

/// Default analysis window: the attitude period 2 pi / |omega| for steady
/// spins, the angular-velocity period located by autocorrelation for the
/// periodic tumbling/precession types. Returns 0 when no period exists
/// (separatrix solutions, zero spin); callers fall back to a caller-chosen
/// window.
double default_window_length(const InertiaModel& J, const Trajectory& traj,
                             const ClassifyTolerances& tol = {});

}  // namespace rateobs
