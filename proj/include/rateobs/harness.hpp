#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rateobs/ltv.hpp"
#include "rateobs/pe.hpp"
#include "rateobs/scenario.hpp"

namespace rateobs {

struct SimulateProducts {
    Trajectory trajectory;
    MeasurementSeries clean;
    MeasurementSeries measured;  // equals `clean` unless noise was requested
};

/// Simulates the scenario and builds the measurement series. Noise is
/// applied only when requested and the scenario defines a positive density.
SimulateProducts simulate_scenario(const Scenario& sc, bool with_noise);

/// Scalar metrics of an observer run; every value is recomputable from the
/// emitted files. Tail statistics cover the last quarter of the run.
struct RunSummary {
    std::string scenario;
    double k = 0.0;
    bool noise = false;
    double omega0_norm = 0.0;
    double omega_max = 0.0;
    double final_error_norm = 0.0;       // |(a_tilde, omega_tilde)| at the end
    double final_omega_error = 0.0;      // |omega_tilde| at the end
    double final_omega_error_rel = 0.0;  // relative to |omega(0)|
    double rms_tail_omega_error = 0.0;
    double rms_tail_omega_error_rel = 0.0;  // relative to tail RMS of |omega|
    double time_to_one_percent = 0.0;       // inf when the run never settles
    double window_T = 0.0;
    double mu_empirical = 0.0;
    std::string pe_verdict;
    std::string pe_predicted;  // "PE" / "not-PE" / "" when not applicable
    double c_hat = 1.0;
    double d = 0.0;
    double d_star = 0.0;
    double r = 0.0;
    bool d_below_d_star = false;
};

struct ObserveProducts {
    SimulateProducts sim;
    ObserverRun run;
    PEReport pe;
    DecayEstimate decay;
    std::optional<ConvergenceBudget> budget;
    RunSummary summary;
};

/// Full pipeline: simulate, measure, run the observer, analyse excitation
/// and LTV decay on the clean series, summarize.
ObserveProducts observe_scenario(const Scenario& sc, bool with_noise);

/// Excitation analysis window: the scenario's natural period when one
/// exists, otherwise a third of the run.
double analysis_window(const Scenario& sc, const Trajectory& traj);

struct PECheckProducts {
    PEReport report;
    MeasurementSeries clean;
};

/// Empirical margin plus the initial-condition prediction. The prediction
/// only covers free rotation, so a torqued scenario is rejected.
PECheckProducts pe_check_scenario(const Scenario& sc, std::optional<double> T);

struct DecayProducts {
    DecayEstimate decay;
    std::optional<ConvergenceBudget> budget;  // absent when c_hat is not contractive
    double mu_empirical = 0.0;
    double omega_max = 0.0;
    double d = 0.0;
    double k = 0.0;
};

DecayProducts decay_scenario(const Scenario& sc, std::optional<double> k, double T);

struct SweepRow {
    double k = 0.0;
    double time_to_one_percent = 0.0;
    double final_omega_error = 0.0;
    double rms_tail_omega_error = 0.0;
};

struct SweepProducts {
    std::vector<double> ks;  // deduplicated, ascending
    std::vector<ObserveProducts> runs;
    std::vector<SweepRow> table;
    std::vector<std::string> warnings;
};

/// Runs `observe` once per gain, one worker thread per gain.
SweepProducts gain_sweep_scenario(const Scenario& sc, const std::vector<double>& ks,
                                  bool with_noise);

/// Shortest round-trip decimal formatting used by every emitted file.
std::string format_double(double v);

/// Scalar metrics of a run as JSON text (consumed by the C API and CLI).
std::string summary_json_text(const SimulateProducts& p);
std::string summary_json_text(const ObserveProducts& p);
std::string summary_json_text(const PECheckProducts& p);
std::string summary_json_text(const DecayProducts& p);
std::string summary_json_text(const SweepProducts& p);

void write_artifacts(const SimulateProducts& p, const std::string& out_dir);
void write_artifacts(const ObserveProducts& p, const std::string& out_dir);
void write_artifacts(const PECheckProducts& p, const std::string& out_dir);
void write_artifacts(const DecayProducts& p, const std::string& out_dir);
void write_artifacts(const SweepProducts& p, const std::string& out_dir);

}  // namespace rateobs
