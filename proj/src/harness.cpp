#include "rateobs/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "json.hpp"

namespace rateobs {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

double observed_omega_max(const Trajectory& traj) {
    double m = 0.0;
    for (const auto& s : traj.states) m = std::max(m, s.omega.norm());
    return m;
}

double scenario_omega_max(const Scenario& sc, const Trajectory& traj) {
    if (sc.torque.is_zero()) return omega_bound_free_rotation(sc.inertia, sc.omega0);
    return observed_omega_max(traj);
}

json number_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw IoError("cannot open output file: " + p.string());
    return out;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
}

void write_json_file(const fs::path& p, const json& j) {
    auto out = open_out(p);
    out << j.dump(2) << '\n';
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

SimulateProducts simulate_scenario(const Scenario& sc, bool with_noise) {
    SimulateProducts out;
    out.trajectory = simulate(sc.inertia, sc.torque, sc.attitude0, sc.omega0, sc.grid);
    out.clean = measure_trajectory(out.trajectory, sc.a_ring);
    out.measured = (with_noise && sc.sensor.noise_density > 0.0)
                       ? apply_sensor_series(out.clean, sc.sensor)
                       : out.clean;
    return out;
}

double analysis_window(const Scenario& sc, const Trajectory& traj) {
    const double duration = static_cast<double>(traj.size() - 1) * traj.dt;
    double T = 0.0;
    if (sc.torque.is_zero()) T = default_window_length(sc.inertia, traj);
    if (T <= 0.0 || T > duration / 2.0) T = duration / 3.0;
    return T;
}

namespace {

RunSummary build_summary(const Scenario& sc, const ObserveProducts& p, bool with_noise) {
    RunSummary s;
    s.scenario = sc.name;
    s.k = sc.observer.k;
    s.noise = with_noise && sc.sensor.noise_density > 0.0;
    s.omega0_norm = sc.omega0.norm();
    s.omega_max = scenario_omega_max(sc, p.sim.trajectory);

    const auto& errors = p.run.errors;
    const std::size_t n = errors.size();
    s.final_error_norm = errors.back().norm();
    s.final_omega_error = errors.back().omega_tilde.norm();
    s.final_omega_error_rel =
        s.omega0_norm > 0.0 ? s.final_omega_error / s.omega0_norm : kInf;

    const std::size_t tail_begin = (n * 3) / 4;
    double err2 = 0.0, omega2 = 0.0;
    for (std::size_t i = tail_begin; i < n; ++i) {
        err2 += errors[i].omega_tilde.norm2();
        omega2 += p.sim.trajectory.states[i].omega.norm2();
    }
    const auto tail_n = static_cast<double>(n - tail_begin);
    s.rms_tail_omega_error = std::sqrt(err2 / tail_n);
    const double rms_tail_omega = std::sqrt(omega2 / tail_n);
    s.rms_tail_omega_error_rel =
        rms_tail_omega > 0.0 ? s.rms_tail_omega_error / rms_tail_omega : kInf;

    // First time after which |omega_tilde| stays below 1% of |omega(0)|.
    const double threshold = 0.01 * s.omega0_norm;
    s.time_to_one_percent = kInf;
    for (std::size_t i = n; i-- > 0;) {
        if (errors[i].omega_tilde.norm() > threshold) {
            if (i + 1 < n) s.time_to_one_percent = p.run.time(i + 1);
            break;
        }
        if (i == 0) s.time_to_one_percent = p.run.time(0);
    }

    s.window_T = p.pe.T;
    s.mu_empirical = p.pe.mu_empirical;
    s.pe_verdict = to_string(p.pe.verdict);
    if (p.pe.prediction)
        s.pe_predicted = p.pe.prediction->predicted_pe() ? "PE" : "not-PE";
    s.c_hat = p.decay.c_hat;
    s.d = distordance(sc.inertia);
    if (p.budget) {
        s.d_star = p.budget->d_star;
        s.r = p.budget->r;
        s.d_below_d_star = p.budget->d_below_d_star;
    } else {
        s.d_star = 0.0;
        s.r = 0.0;
        s.d_below_d_star = false;
    }
    return s;
}

}  // namespace

ObserveProducts observe_scenario(const Scenario& sc, bool with_noise) {
    ObserveProducts p;
    p.sim = simulate_scenario(sc, with_noise);
    p.run = run_observer(p.sim.measured, sc.inertia, sc.torque, sc.observer,
                         &p.sim.trajectory, &sc.a_ring);

    const double T = analysis_window(sc, p.sim.trajectory);
    p.pe = pe_margin(p.sim.clean, T);
    if (sc.torque.is_zero())
        p.pe.prediction = predict_pe(sc.inertia, sc.attitude0, sc.omega0, sc.a_ring);

    p.decay = estimate_decay(p.sim.clean, sc.observer.k, T);
    if (p.decay.c_hat > 0.0 && p.decay.c_hat < 1.0) {
        p.budget = convergence_budget(p.decay.c_hat, p.decay.T, p.pe.mu_empirical,
                                      scenario_omega_max(sc, p.sim.trajectory),
                                      distordance(sc.inertia), sc.observer.k);
    }
    p.summary = build_summary(sc, p, with_noise);
    return p;
}

PECheckProducts pe_check_scenario(const Scenario& sc, std::optional<double> T) {
    if (!sc.torque.is_zero())
        throw InvalidInput(
            "pe-check requires a free-rotation scenario (torque.kind = \"zero\"); "
            "the excitation prediction is only defined there");
    PECheckProducts p;
    SimulateProducts sim = simulate_scenario(sc, false);
    const double window = T.value_or(analysis_window(sc, sim.trajectory));
    p.report = pe_margin(sim.clean, window);
    p.report.prediction = predict_pe(sc.inertia, sc.attitude0, sc.omega0, sc.a_ring);
    p.clean = std::move(sim.clean);
    return p;
}

DecayProducts decay_scenario(const Scenario& sc, std::optional<double> k, double T) {
    DecayProducts p;
    p.k = k.value_or(sc.observer.k);
    if (!(p.k > 0.0)) throw InvalidInput("gain must be positive");
    SimulateProducts sim = simulate_scenario(sc, false);
    p.decay = estimate_decay(sim.clean, p.k, T);
    p.mu_empirical = pe_margin(sim.clean, p.decay.T).mu_empirical;
    p.omega_max = scenario_omega_max(sc, sim.trajectory);
    p.d = distordance(sc.inertia);
    if (p.decay.c_hat > 0.0 && p.decay.c_hat < 1.0)
        p.budget = convergence_budget(p.decay.c_hat, p.decay.T, p.mu_empirical, p.omega_max,
                                      p.d, p.k);
    return p;
}

SweepProducts gain_sweep_scenario(const Scenario& sc, const std::vector<double>& ks,
                                  bool with_noise) {
    if (ks.empty()) throw InvalidInput("k-list: must contain at least one gain");
    SweepProducts p;
    for (double k : ks) {
        if (!(k > 0.0) || !std::isfinite(k))
            throw InvalidInput("k-list: gains must be positive numbers");
        const bool dup =
            std::any_of(p.ks.begin(), p.ks.end(), [&](double v) { return v == k; });
        if (dup) {
            p.warnings.push_back("duplicate gain " + format_double(k) + " ignored");
            continue;
        }
        p.ks.push_back(k);
    }
    std::sort(p.ks.begin(), p.ks.end());

    p.runs.resize(p.ks.size());
    std::vector<std::string> failures(p.ks.size());
    std::vector<std::thread> workers;
    workers.reserve(p.ks.size());
    for (std::size_t i = 0; i < p.ks.size(); ++i) {
        workers.emplace_back([&, i] {
            try {
                Scenario run_sc = sc;
                run_sc.observer.k = p.ks[i];
                p.runs[i] = observe_scenario(run_sc, with_noise);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (std::size_t i = 0; i < p.ks.size(); ++i)
        if (!failures[i].empty())
            throw NumericFailure("gain " + format_double(p.ks[i]) + ": " + failures[i]);

    for (std::size_t i = 0; i < p.ks.size(); ++i) {
        const RunSummary& s = p.runs[i].summary;
        p.table.push_back(
            {p.ks[i], s.time_to_one_percent, s.final_omega_error, s.rms_tail_omega_error});
    }
    return p;
}

namespace {

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t,q11,q12,q13,q21,q22,q23,q31,q32,q33,w1,w2,w3\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& s = traj.states[i];
        out << format_double(traj.time(i));
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out << ',' << format_double(s.attitude.matrix()(r, c));
        out << ',' << format_double(s.omega.x) << ',' << format_double(s.omega.y) << ','
            << format_double(s.omega.z) << '\n';
    }
}

void write_measurements_csv(const fs::path& path, const MeasurementSeries& series) {
    auto out = open_out(path);
    out << "t,a1,a2,a3\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Vec3& v = series.values[i];
        out << format_double(series.time(i)) << ',' << format_double(v.x) << ','
            << format_double(v.y) << ',' << format_double(v.z) << '\n';
    }
}

void write_observer_csv(const fs::path& path, const ObserverRun& run) {
    auto out = open_out(path);
    out << "t,ahat1,ahat2,ahat3,what1,what2,what3,"
           "atil1,atil2,atil3,wtil1,wtil2,wtil3,err_norm\n";
    for (std::size_t i = 0; i < run.size(); ++i) {
        const ObserverState& e = run.estimates[i];
        const ErrorState& err = run.errors[i];
        out << format_double(run.time(i)) << ',' << format_double(e.a_hat.x) << ','
            << format_double(e.a_hat.y) << ',' << format_double(e.a_hat.z) << ','
            << format_double(e.omega_hat.x) << ',' << format_double(e.omega_hat.y) << ','
            << format_double(e.omega_hat.z) << ',' << format_double(err.a_tilde.x) << ','
            << format_double(err.a_tilde.y) << ',' << format_double(err.a_tilde.z) << ','
            << format_double(err.omega_tilde.x) << ',' << format_double(err.omega_tilde.y)
            << ',' << format_double(err.omega_tilde.z) << ','
            << format_double(err.norm()) << '\n';
    }
}

void write_pe_windows_csv(const fs::path& path, const PEReport& report) {
    auto out = open_out(path);
    out << "t_start,lambda_min\n";
    for (const PEWindow& w : report.windows)
        out << format_double(w.start) << ',' << format_double(w.lambda_min) << '\n';
}

json pe_report_json(const PEReport& report) {
    json j{{"T", report.T},
           {"mu_empirical", report.mu_empirical},
           {"min_window_start", report.min_window_start},
           {"windows_checked", report.windows.size()},
           {"verdict", to_string(report.verdict)}};
    if (report.prediction) {
        const PEPrediction& pred = *report.prediction;
        j["predicted"] = pred.predicted_pe() ? "PE" : "not-PE";
        j["predicted_case"] = to_string(pred.kase);
        j["mu_theoretical"] =
            pred.mu_theoretical ? json(*pred.mu_theoretical) : json(nullptr);
        j["agreement"] =
            (pred.predicted_pe() && report.verdict == PEVerdict::PE) ||
            (!pred.predicted_pe() && report.verdict == PEVerdict::NotPE);
    }
    return j;
}

json budget_json(const std::optional<ConvergenceBudget>& budget) {
    if (!budget) return nullptr;
    return json{{"c", budget->c},
                {"T", budget->T},
                {"mu", budget->mu},
                {"omega_max", budget->omega_max},
                {"k", budget->k},
                {"d", budget->d},
                {"d_star", budget->d_star},
                {"r", number_or_null(budget->r)},
                {"d_below_d_star", budget->d_below_d_star}};
}

json summary_json(const RunSummary& s) {
    return json{{"scenario", s.scenario},
                {"k", s.k},
                {"noise", s.noise},
                {"omega0_norm", s.omega0_norm},
                {"omega_max", s.omega_max},
                {"final_error_norm", s.final_error_norm},
                {"final_omega_error", s.final_omega_error},
                {"final_omega_error_rel", number_or_null(s.final_omega_error_rel)},
                {"rms_tail_omega_error", s.rms_tail_omega_error},
                {"rms_tail_omega_error_rel", number_or_null(s.rms_tail_omega_error_rel)},
                {"time_to_one_percent", number_or_null(s.time_to_one_percent)},
                {"window_T", s.window_T},
                {"mu_empirical", s.mu_empirical},
                {"pe_verdict", s.pe_verdict},
                {"pe_predicted", s.pe_predicted},
                {"c_hat", s.c_hat},
                {"d", s.d},
                {"d_star", s.d_star},
                {"r", number_or_null(s.r)},
                {"d_below_d_star", s.d_below_d_star}};
}

}  // namespace

std::string summary_json_text(const SimulateProducts& p) {
    const double duration = static_cast<double>(p.trajectory.size() - 1) * p.trajectory.dt;
    return json{{"samples", p.trajectory.size()},
                {"dt", p.trajectory.dt},
                {"duration", duration}}
        .dump(2);
}

std::string summary_json_text(const ObserveProducts& p) { return summary_json(p.summary).dump(2); }

std::string summary_json_text(const PECheckProducts& p) { return pe_report_json(p.report).dump(2); }

std::string summary_json_text(const DecayProducts& p) {
    return json{{"T", p.decay.T},
                {"c_hat", p.decay.c_hat},
                {"windows_checked", p.decay.windows_checked},
                {"worst_window_start", p.decay.worst_window_start},
                {"contractive", p.decay.c_hat < 1.0},
                {"k", p.k},
                {"mu_empirical", p.mu_empirical},
                {"omega_max", p.omega_max},
                {"d", p.d},
                {"budget", budget_json(p.budget)}}
        .dump(2);
}

std::string summary_json_text(const SweepProducts& p) {
    json rows = json::array();
    for (const SweepRow& row : p.table)
        rows.push_back(json{{"k", row.k},
                            {"time_to_one_percent", number_or_null(row.time_to_one_percent)},
                            {"final_omega_error", row.final_omega_error},
                            {"rms_tail_omega_error", row.rms_tail_omega_error}});
    return json{{"runs", rows}}.dump(2);
}

void write_artifacts(const SimulateProducts& p, const std::string& out_dir) {
    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    write_trajectory_csv(dir / "trajectory.csv", p.trajectory);
    write_measurements_csv(dir / "measurements.csv", p.measured);
}

void write_artifacts(const ObserveProducts& p, const std::string& out_dir) {
    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    write_trajectory_csv(dir / "trajectory.csv", p.sim.trajectory);
    write_measurements_csv(dir / "measurements.csv", p.sim.measured);
    write_observer_csv(dir / "observer.csv", p.run);
    write_pe_windows_csv(dir / "pe_windows.csv", p.pe);
    write_json_file(dir / "pe_report.json", pe_report_json(p.pe));
    write_json_file(dir / "decay.json",
                    json{{"T", p.decay.T},
                         {"c_hat", p.decay.c_hat},
                         {"windows_checked", p.decay.windows_checked},
                         {"worst_window_start", p.decay.worst_window_start},
                         {"contractive", p.decay.c_hat < 1.0},
                         {"budget", budget_json(p.budget)}});
    write_json_file(dir / "summary.json", summary_json(p.summary));
}

void write_artifacts(const PECheckProducts& p, const std::string& out_dir) {
    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    write_measurements_csv(dir / "measurements.csv", p.clean);
    write_pe_windows_csv(dir / "pe_windows.csv", p.report);
    write_json_file(dir / "pe_report.json", pe_report_json(p.report));
}

void write_artifacts(const DecayProducts& p, const std::string& out_dir) {
    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    write_json_file(dir / "decay.json",
                    json{{"T", p.decay.T},
                         {"c_hat", p.decay.c_hat},
                         {"windows_checked", p.decay.windows_checked},
                         {"worst_window_start", p.decay.worst_window_start},
                         {"contractive", p.decay.c_hat < 1.0},
                         {"k", p.k},
                         {"mu_empirical", p.mu_empirical},
                         {"omega_max", p.omega_max},
                         {"d", p.d},
                         {"budget", budget_json(p.budget)}});
}

void write_artifacts(const SweepProducts& p, const std::string& out_dir) {
    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    {
        auto out = open_out(dir / "sweep.csv");
        out << "k,time_to_one_percent,final_omega_error,rms_tail_omega_error\n";
        for (const SweepRow& row : p.table) {
            out << format_double(row.k) << ','
                << (std::isfinite(row.time_to_one_percent)
                        ? format_double(row.time_to_one_percent)
                        : std::string("never"))
                << ',' << format_double(row.final_omega_error) << ','
                << format_double(row.rms_tail_omega_error) << '\n';
        }
    }
    for (std::size_t i = 0; i < p.ks.size(); ++i) {
        const fs::path sub = dir / ("k_" + format_double(p.ks[i]));
        write_artifacts(p.runs[i], sub.string());
    }
}

}  // namespace rateobs
