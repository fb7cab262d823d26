#include "rateobs/ltv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rateobs {

Mat6 build_system_matrix(const Vec3& a) {
    if (!a.finite()) throw InvalidInput("direction must be finite");
    if (std::abs(a.norm() - 1.0) > 1e-6)
        throw InvalidInput("direction must be unit length within 1e-6");
    const Mat3 s = skew(a);
    return Mat6::from_blocks(Mat3::identity() * -1.0, s, s, Mat3::zero());
}

double induced_norm(const Mat6& m) {
    const Mat6 g = m.transposed() * m;

    // Power iteration with a fixed, non-degenerate start vector.
    Vec6 v{{1.0, 0.9, 0.8}, {0.7, 0.6, 0.5}};
    v = v * (1.0 / v.norm());
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it) {
        const Vec6 gv = g * v;
        const double n = gv.norm();
        if (n == 0.0) return 0.0;
        const Vec6 w = gv * (1.0 / n);
        const Vec6 gw = g * w;
        const double next = gw.upper.x * w.upper.x + gw.upper.y * w.upper.y +
                            gw.upper.z * w.upper.z + gw.lower.x * w.lower.x +
                            gw.lower.y * w.lower.y + gw.lower.z * w.lower.z;
        const bool done = std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next));
        v = w;
        lambda = next;
        if (done) break;
    }
    return std::sqrt(std::max(0.0, lambda));
}

namespace {

std::size_t snap_index(const MeasurementSeries& s, double t, const char* what) {
    const double pos = (t - s.t0) / s.dt;
    const double rounded = std::round(pos);
    if (rounded < 0.0 || rounded > static_cast<double>(s.size() - 1))
        throw InvalidInput(std::string(what) + " outside the measurement series");
    return static_cast<std::size_t>(rounded);
}

}  // namespace

TransitionMatrix transition_matrix(const MeasurementSeries& a_series, double k, double t0,
                                   double t1) {
    if (!(k > 0.0)) throw InvalidInput("gain must be positive");
    if (a_series.size() < 2) throw InvalidInput("direction series needs >= 2 samples");
    const std::size_t i0 = snap_index(a_series, t0, "window start");
    const std::size_t i1 = snap_index(a_series, t1, "window end");
    if (i1 < i0) throw InvalidInput("window end precedes window start");

    TransitionMatrix out;
    out.t0 = a_series.time(i0);
    out.t1 = a_series.time(i1);

    Mat6 phi = Mat6::identity();
    for (std::size_t i = i0; i < i1; ++i) {
        const double t = a_series.time(i);
        phi = rk4_step(
            [&](double tt, const Mat6& p) {
                return build_system_matrix(sample_series(a_series, tt)) * p * k;
            },
            t, phi, a_series.dt);
    }
    out.phi = phi;
    return out;
}

DecayEstimate estimate_decay(const MeasurementSeries& a_series, double k, double T,
                             double stride) {
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

    DecayEstimate est;
    est.T = static_cast<double>(t_steps) * dt;
    est.c_hat = 0.0;
    for (std::size_t start = 0; start + t_steps <= a_series.size() - 1; start += s_steps) {
        const double t = a_series.time(start);
        const TransitionMatrix tm = transition_matrix(a_series, k, t, t + est.T);
        const double n = induced_norm(tm.phi);
        if (n * n > est.c_hat) {
            est.c_hat = n * n;
            est.worst_window_start = t;
        }
        ++est.windows_checked;
    }
    if (est.windows_checked == 0) throw InvalidInput("series too short for one window");
    est.c_hat = std::min(est.c_hat, 1.0);
    return est;
}

}  // namespace rateobs
