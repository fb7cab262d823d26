#include "rateobs/pe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rateobs {

namespace {

std::size_t snap_index(const MeasurementSeries& s, double t, const char* what) {
    const double pos = (t - s.t0) / s.dt;
    const double rounded = std::round(pos);
    if (rounded < 0.0 || rounded > static_cast<double>(s.size() - 1))
        throw InvalidInput(std::string(what) + " outside the measurement series");
    return static_cast<std::size_t>(rounded);
}

}  // namespace

Mat3 excitation_gramian(const MeasurementSeries& a_series, double t, double T) {
    if (a_series.size() < 2) throw InvalidInput("direction series needs >= 2 samples");
    if (!(T > 0.0)) throw InvalidInput("window length must be positive");
    const std::size_t i0 = snap_index(a_series, t, "window start");
    const std::size_t i1 = snap_index(a_series, t + T, "window end");
    if (i1 <= i0) throw InvalidInput("window shorter than one sample period");

    Mat3 acc = Mat3::zero();
    for (std::size_t i = i0; i <= i1; ++i) {
        const Mat3 s = skew(a_series.values[i]);
        const double w = (i == i0 || i == i1) ? 0.5 : 1.0;
        acc = acc + s.transposed() * s * w;
    }
    return acc * (1.0 / static_cast<double>(i1 - i0));
}

const char* to_string(PredictedCase c) {
    switch (c) {
        case PredictedCase::SteadySpinAligned: return "steady_spin_aligned";
        case PredictedCase::SeparatrixAligned: return "separatrix_aligned";
        case PredictedCase::Generic: return "generic";
    }
    return "generic";
}

const char* to_string(PEVerdict v) {
    switch (v) {
        case PEVerdict::PE: return "PE";
        case PEVerdict::NotPE: return "not-PE";
        case PEVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

PEReport pe_margin(const MeasurementSeries& a_series, double T, double stride) {
    if (a_series.size() < 2) throw InvalidInput("direction series needs >= 2 samples");
    if (!(T > 0.0)) throw InvalidInput("window length must be positive");
    const double dt = a_series.dt;
    auto t_steps = static_cast<std::size_t>(std::llround(T / dt));
    if (t_steps == 0) t_steps = 1;
    if (t_steps > a_series.size() - 1)
        throw InvalidInput("window length exceeds the series duration");
    if (stride <= 0.0) stride = T / 10.0;
    auto s_steps = static_cast<std::size_t>(std::llround(stride / dt));
    if (s_steps == 0) s_steps = 1;

    PEReport report;
    report.T = static_cast<double>(t_steps) * dt;
    report.mu_empirical = std::numeric_limits<double>::infinity();
    for (std::size_t start = 0; start + t_steps <= a_series.size() - 1; start += s_steps) {
        const double t = a_series.time(start);
        const Mat3 g = excitation_gramian(a_series, t, report.T);
        const double lmin = sym_min_eigenvalue(g);
        report.windows.push_back({t, lmin});
        if (lmin < report.mu_empirical) {
            report.mu_empirical = lmin;
            report.min_window_start = t;
        }
    }
    if (report.windows.empty()) throw InvalidInput("series too short for one window");
    if (report.mu_empirical >= kPeThreshold)
        report.verdict = PEVerdict::PE;
    else if (report.mu_empirical < kInconclusiveFloor)
        report.verdict = PEVerdict::NotPE;
    else
        report.verdict = PEVerdict::Inconclusive;
    return report;
}

PEPrediction predict_pe(const InertiaModel& J, const Rotation& r0, const Vec3& omega0,
                        const ReferenceVector& a_ring, const ClassifyTolerances& tol) {
    PEPrediction out;
    const Vec3 m = r0 * J.apply(omega0);
    if (m.norm() == 0.0) {
        // Zero spin: the measured direction is frozen regardless of the
        // reference vector.
        out.kase = PredictedCase::SteadySpinAligned;
        return out;
    }
    const Vec3 u = m * (1.0 / m.norm());
    const double sin_angle = cross(u, a_ring.value()).norm();
    const bool aligned = sin_angle <= tol.axis_angle;

    const TrajectoryClass cls = classify_trajectory(J, omega0, tol);
    if (cls.type == TrajectoryType::SteadySpin) {
        if (aligned) {
            out.kase = PredictedCase::SteadySpinAligned;
            return out;
        }
        const double a1 = dot(a_ring.value(), u);
        out.mu_theoretical = std::min(1.0 - a1 * a1, 0.5 * (1.0 + a1 * a1));
        return out;
    }
    if (cls.type == TrajectoryType::Separatrix && aligned) {
        out.kase = PredictedCase::SeparatrixAligned;
        return out;
    }
    return out;
}

namespace {

// First strong autocorrelation peak of the centered angular-velocity
// series; parabolic refinement around the winning lag.
double autocorrelation_period(const Trajectory& traj) {
    const std::size_t n = traj.size();
    if (n < 16) return 0.0;

    Vec3 mean{};
    for (const auto& s : traj.states) mean += s.omega * (1.0 / static_cast<double>(n));
    std::vector<Vec3> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = traj.states[i].omega - mean;

    const std::size_t max_lag = (3 * n) / 4;
    const std::size_t min_lag = 4;
    if (max_lag <= min_lag) return 0.0;

    std::vector<double> rho(max_lag + 1, 0.0);
    double c0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) c0 += dot(c[i], c[i]);
    if (c0 <= 0.0) return 0.0;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
        double acc = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) acc += dot(c[i], c[i + lag]);
        rho[lag] = acc / c0 * (static_cast<double>(n) / static_cast<double>(n - lag));
    }

    // Skip the zero-lag bump: peaks only count once the correlation has
    // decayed below 0.5.
    std::size_t search_from = 0;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag)
        if (rho[lag] < 0.5) {
            search_from = lag + 1;
            break;
        }
    if (search_from == 0) return 0.0;

    double best = 0.0;
    for (std::size_t lag = search_from; lag <= max_lag; ++lag) best = std::max(best, rho[lag]);
    if (best <= 0.25) return 0.0;

    for (std::size_t lag = std::max(search_from, min_lag + 1); lag + 1 <= max_lag; ++lag) {
        if (rho[lag] >= rho[lag - 1] && rho[lag] >= rho[lag + 1] && rho[lag] >= 0.9 * best) {
            // Parabolic peak refinement.
            const double y0 = rho[lag - 1], y1 = rho[lag], y2 = rho[lag + 1];
            const double denom = y0 - 2.0 * y1 + y2;
            double shift = 0.0;
            if (denom < 0.0) shift = 0.5 * (y0 - y2) / denom;
            return (static_cast<double>(lag) + shift) * traj.dt;
        }
    }
    return 0.0;
}

}  // namespace

double default_window_length(const InertiaModel& J, const Trajectory& traj,
                             const ClassifyTolerances& tol) {
    if (traj.size() < 2) return 0.0;
    const Vec3 omega0 = traj.states.front().omega;
    const TrajectoryClass cls = classify_trajectory(J, omega0, tol);
    switch (cls.type) {
        case TrajectoryType::SteadySpin: {
            const double w = omega0.norm();
            return w > 0.0 ? 2.0 * M_PI / w : 0.0;  // attitude period
        }
        case TrajectoryType::Separatrix:
            return 0.0;  // omega is not periodic
        case TrajectoryType::GenericTumble:
        case TrajectoryType::AxisymmetricPrecession:
            return autocorrelation_period(traj);
    }
    return 0.0;
}

}  // namespace rateobs
