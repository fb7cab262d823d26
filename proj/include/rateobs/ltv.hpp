#pragma once

#include <cstddef>

#include "rateobs/geometry.hpp"
#include "rateobs/measurement.hpp"
#include "rateobs/observer.hpp"

namespace rateobs {

/// Scaled error coordinates Z = (a_tilde, omega_tilde / k).
struct ZState {
    Vec3 z1;  // a_tilde
    Vec3 z2;  // omega_tilde / k

    static ZState from_error(const ErrorState& e, double k) {
        return {e.a_tilde, e.omega_tilde * (1.0 / k)};
    }
    Vec6 as_vec6() const { return {z1, z2}; }
    double norm() const { return as_vec6().norm(); }
};

/// System matrix of the unperturbed error dynamics Z' = k A(t) Z:
/// A = [[-I, skew(a)], [skew(a), 0]]. The direction must be unit within 1e-6.
Mat6 build_system_matrix(const Vec3& a);

/// Largest singular value of a 6x6 matrix (induced 2-norm), via power
/// iteration on M^T M with a fixed start vector and 1e-10 convergence.
double induced_norm(const Mat6& m);

struct TransitionMatrix {
    Mat6 phi = Mat6::identity();
    double t0 = 0.0;
    double t1 = 0.0;
};

/// State-transition matrix of Z' = k A(t) Z over [t0, t1], integrated with
/// RK4 against the given direction series (endpoints snapped to the sample
/// grid so that window composition is exact). Throws InvalidInput when the
/// interval leaves the series.
TransitionMatrix transition_matrix(const MeasurementSeries& a_series, double k, double t0,
                                   double t1);

/// Empirical window-decay constant: the worst squared induced norm of the
/// transition matrix over sliding windows of length T.
struct DecayEstimate {
    double T = 0.0;            // snapped window length, s
    double c_hat = 1.0;        // in (0, 1]; clipped at 1
    double worst_window_start = 0.0;
    std::size_t windows_checked = 0;
};

/// Scans windows [t, t+T] at the given stride (default T/10) and reports
/// c_hat = max ||Phi(t+T, t)||^2, clipped at 1.
DecayEstimate estimate_decay(const MeasurementSeries& a_series, double k, double T,
                             double stride = 0.0);

}  // namespace rateobs
