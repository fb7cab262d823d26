#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rateobs/pe.hpp"
#include "test_support.hpp"

using namespace rateobs;
using test_support::frobenius_distance;
using test_support::random_rotation;
using test_support::random_unit;
using test_support::uniform;

namespace {

InertiaModel cubesat() { return InertiaModel(87e-4, 83e-4, 37e-4); }

constexpr double kSeparatrixGamma = 2.2115163570955448;
// min(1 - cos^2(0.5), (1 + cos^2(0.5))/2)
constexpr double kMuTilted = 0.22984884706593014;

MeasurementSeries constant_series(const Vec3& a, double dt, std::size_t n) {
    MeasurementSeries s;
    s.t0 = 0.0;
    s.dt = dt;
    s.values.assign(n, a);
    return s;
}

MeasurementSeries great_circle_series(const Vec3& u, const Vec3& v, double period, double dt,
                                      double duration) {
    MeasurementSeries s;
    s.t0 = 0.0;
    s.dt = dt;
    const auto n = static_cast<std::size_t>(duration / dt + 1e-9);
    for (std::size_t i = 0; i <= n; ++i) {
        const double th = 2.0 * M_PI * (dt * static_cast<double>(i)) / period;
        s.values.push_back(u * std::cos(th) + v * std::sin(th));
    }
    return s;
}

// Tilted steady spin about the body 2-axis; attitude period 12 s.
struct SpinSetup {
    InertiaModel J = cubesat();
    double w = M_PI / 6.0;
    Vec3 omega0{0, M_PI / 6.0, 0};
    Rotation r0;  // identity: momentum along e2
};

MeasurementSeries tilted_spin_series(double tilt, double duration) {
    SpinSetup setup;
    const Vec3 aring_raw = Vec3{0, 1, 0} * std::cos(tilt) + Vec3{1, 0, 0} * std::sin(tilt);
    const ReferenceVector aring(aring_raw.normalized());
    const Trajectory traj = simulate(setup.J, TorqueModel::zero(), setup.r0, setup.omega0,
                                     {0.01, duration});
    return measure_trajectory(traj, aring);
}

}  // namespace

TEST_CASE("gramian of a frozen direction is the orthogonal projector") {
    const Vec3 a = Vec3{0.3, -0.5, 0.8}.normalized();
    const MeasurementSeries s = constant_series(a, 0.01, 300);
    const Mat3 g = excitation_gramian(s, 0.0, 2.0);
    CHECK(frobenius_distance(g, Mat3::identity() - Mat3::outer(a, a)) <= 1e-14);
    CHECK(std::abs(sym_min_eigenvalue(g)) <= 1e-14);
}

TEST_CASE("gramian identity, trace and spectral duality on a simulated series") {
    const InertiaModel J = cubesat();
    const ReferenceVector aring(Vec3{0.37, -0.55, 0.75}.normalized());
    const Trajectory traj =
        simulate(J, TorqueModel::zero(), Rotation(), {0.35, 0.3, 0.25}, {0.01, 20.0});
    const MeasurementSeries s = measure_trajectory(traj, aring);

    const double T = 6.0;
    for (double t0 : {0.0, 3.7, 11.2}) {
        const Mat3 g = excitation_gramian(s, t0, T);

        // Identity route: I - mean(a a^T), same trapezoid weights.
        const auto i0 = static_cast<std::size_t>(std::llround((t0 - s.t0) / s.dt));
        const auto n = static_cast<std::size_t>(std::llround(T / s.dt));
        Mat3 mean{};
        for (std::size_t i = i0; i <= i0 + n; ++i) {
            const double w = (i == i0 || i == i0 + n) ? 0.5 : 1.0;
            mean = mean + Mat3::outer(s.values[i], s.values[i]) * w;
        }
        mean = mean * (1.0 / static_cast<double>(n));
        CHECK(frobenius_distance(g, Mat3::identity() - mean) <= 1e-12);

        const double trace = g(0, 0) + g(1, 1) + g(2, 2);
        CHECK(std::abs(trace - 2.0) <= 1e-12);

        // lambda_min(G) = 1 - lambda_max(mean)
        const double lmin = sym_min_eigenvalue(g);
        const double lmax_mean = sym_eigenvalues(mean)[2];
        CHECK(std::abs(lmin - (1.0 - lmax_mean)) <= 1e-12);

        const auto ev = sym_eigenvalues(g);
        CHECK(ev[0] >= -1e-14);
        CHECK(ev[2] <= 1.0 + 1e-14);
    }
}

TEST_CASE("great-circle sweep: eigenvalues (1/2, 1/2, 1)") {
    const Vec3 u{1, 0, 0}, v{0, 1, 0};
    const double period = 4.0;
    const MeasurementSeries s = great_circle_series(u, v, period, 0.01, 8.0);
    const Mat3 g = excitation_gramian(s, 0.0, period);
    const auto ev = sym_eigenvalues(g);
    CHECK(std::abs(ev[0] - 0.5) <= 0.005);
    CHECK(std::abs(ev[1] - 0.5) <= 0.005);
    CHECK(std::abs(ev[2] - 1.0) <= 0.005);
    // Full-period trapezoid on a trigonometric integrand is spectrally exact.
    CHECK(std::abs(ev[0] - 0.5) <= 1e-12);
}

TEST_CASE("window bounds are validated") {
    const MeasurementSeries s = constant_series({1, 0, 0}, 0.01, 100);
    CHECK_THROWS_AS(excitation_gramian(s, -0.5, 0.3), InvalidInput);
    CHECK_THROWS_AS(excitation_gramian(s, 0.0, 5.0), InvalidInput);
    CHECK_THROWS_AS(pe_margin(s, 50.0), InvalidInput);
}

TEST_CASE("margin verdicts: frozen direction vs excited spin") {
    // The unobservable configuration: constant measurement.
    const MeasurementSeries frozen = constant_series({1, 0, 0}, 0.01, 2000);
    const PEReport bad = pe_margin(frozen, 5.0);
    CHECK(bad.mu_empirical < 1e-9);
    CHECK(bad.verdict == PEVerdict::NotPE);

    // Tilted steady spin, window = one attitude period.
    const MeasurementSeries good = tilted_spin_series(0.5, 30.0);
    const PEReport report = pe_margin(good, 12.0);
    CHECK(report.verdict == PEVerdict::PE);
    CHECK(std::abs(report.mu_empirical - kMuTilted) / kMuTilted <= 0.02);

    // Generic tumble is excited.
    const InertiaModel J = cubesat();
    const ReferenceVector aring(Vec3{0.37, -0.55, 0.75}.normalized());
    const Trajectory traj = simulate(J, TorqueModel::zero(),
                                     Rotation::about_axis(Vec3{1, 2, 3}.normalized(), 0.7),
                                     {0.30, 0.35, 0.28}, {0.01, 60.0});
    const PEReport tumble = pe_margin(measure_trajectory(traj, aring), 15.0);
    CHECK(tumble.verdict == PEVerdict::PE);
}

TEST_CASE("empirical margin grows with the misalignment angle") {
    const double mu0 = pe_margin(tilted_spin_series(0.0, 30.0), 12.0).mu_empirical;
    const double mu1 = pe_margin(tilted_spin_series(0.1, 30.0), 12.0).mu_empirical;
    const double mu2 = pe_margin(tilted_spin_series(0.5, 30.0), 12.0).mu_empirical;
    CHECK(mu0 < 1e-9);
    CHECK(mu1 > mu0);
    CHECK(mu2 > mu1);
}

TEST_CASE("prediction: aligned spins and separatrix solutions fail, the rest passes") {
    const InertiaModel J = cubesat();
    const Rotation r0;

    // Spin about the 1-axis, reference along the momentum.
    const PEPrediction aligned = predict_pe(J, r0, {0.5, 0, 0}, ReferenceVector({1, 0, 0}));
    CHECK(aligned.kase == PredictedCase::SteadySpinAligned);
    CHECK_FALSE(aligned.predicted_pe());
    CHECK_FALSE(aligned.mu_theoretical.has_value());

    // Same spin, reference orthogonal to the momentum: a1 = 0.
    const PEPrediction ortho = predict_pe(J, r0, {0.5, 0, 0}, ReferenceVector({0, 1, 0}));
    CHECK(ortho.predicted_pe());
    REQUIRE(ortho.mu_theoretical.has_value());
    CHECK(*ortho.mu_theoretical == doctest::Approx(0.5).epsilon(1e-15));

    // Tilted by 0.5 rad.
    const Vec3 tilted = (Vec3{1, 0, 0} * std::cos(0.5) + Vec3{0, 1, 0} * std::sin(0.5));
    const PEPrediction tilt = predict_pe(J, r0, {0.5, 0, 0}, ReferenceVector(tilted.normalized()));
    CHECK(tilt.predicted_pe());
    REQUIRE(tilt.mu_theoretical.has_value());
    CHECK(*tilt.mu_theoretical == doctest::Approx(kMuTilted).epsilon(1e-12));

    // Generic tumble: excited for any attitude/reference.
    Pcg32 rng(21);
    for (int i = 0; i < 20; ++i) {
        const PEPrediction generic = predict_pe(J, random_rotation(rng), {0.3, 0.4, 0.6},
                                                ReferenceVector(random_unit(rng)));
        CHECK(generic.predicted_pe());
        CHECK_FALSE(generic.mu_theoretical.has_value());
    }

    // Separatrix initial conditions: excited unless aligned.
    const Vec3 sep{kSeparatrixGamma * 0.2, 0.0, 0.2};
    const Vec3 m_hat = (r0 * J.apply(sep)).normalized();
    const PEPrediction sep_aligned = predict_pe(J, r0, sep, ReferenceVector(m_hat));
    CHECK(sep_aligned.kase == PredictedCase::SeparatrixAligned);
    CHECK_FALSE(sep_aligned.predicted_pe());
    const PEPrediction sep_free = predict_pe(J, r0, sep, ReferenceVector({0, 0, 1}));
    CHECK(sep_free.predicted_pe());

    // Zero spin freezes the measurement.
    CHECK_FALSE(predict_pe(J, r0, {0, 0, 0}, ReferenceVector({0, 0, 1})).predicted_pe());

    // Anti-aligned counts as aligned.
    const PEPrediction anti = predict_pe(J, r0, {0.5, 0, 0}, ReferenceVector({-1, 0, 0}));
    CHECK_FALSE(anti.predicted_pe());
}

TEST_CASE("default analysis window: spin period and precession period") {
    const InertiaModel J = cubesat();
    const Trajectory spin =
        simulate(J, TorqueModel::zero(), Rotation(), {0, M_PI / 6.0, 0}, {0.01, 30.0});
    CHECK(default_window_length(J, spin) == doctest::Approx(12.0).epsilon(1e-12));

    // Axisymmetric body: omega is periodic with period 2 pi / |xi2|.
    const InertiaModel Jsym(87e-4, 87e-4, 37e-4);
    const Vec3 w0{1, 0, 3};
    const AxisymmetricParams prm = axisymmetric_params(Jsym, w0);
    const double expected = 2.0 * M_PI / std::abs(prm.xi2);
    const Trajectory prec = simulate(Jsym, TorqueModel::zero(), Rotation(), w0, {0.01, 30.0});
    const double est = default_window_length(Jsym, prec);
    CHECK(std::abs(est - expected) / expected <= 0.02);

    // Generic tumble: validate the estimate through the recurrence of omega.
    const Trajectory tumble =
        simulate(J, TorqueModel::zero(), Rotation(), {0.30, 0.35, 0.28}, {0.01, 120.0});
    const double period = default_window_length(J, tumble);
    CHECK(period > 0.0);
    CHECK(period < 90.0);
    const auto lag = static_cast<std::size_t>(std::llround(period / tumble.dt));
    REQUIRE(lag < tumble.size());
    double worst = 0.0, amplitude = 0.0;
    for (std::size_t i = 0; i + lag < tumble.size(); ++i) {
        worst = std::max(worst,
                         (tumble.states[i + lag].omega - tumble.states[i].omega).norm());
        amplitude = std::max(
            amplitude, (tumble.states[i].omega - tumble.states.front().omega).norm());
    }
    CHECK(worst <= 0.05 * amplitude);

    // Separatrix: no period to report.
    const Trajectory sep = simulate(J, TorqueModel::zero(), Rotation(),
                                    {kSeparatrixGamma * 0.2, 0, 0.2}, {0.01, 30.0});
    CHECK(default_window_length(J, sep) == 0.0);
}
