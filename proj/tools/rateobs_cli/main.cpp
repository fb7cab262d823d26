// Command-line front end. Deliberately restricted to the C API so it doubles
// as a usage example for external bindings.
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rateobs.h"

namespace {

struct CommonArgs {
    std::string scenario_path;
    std::string out_dir;
    bool noise = false;
    std::optional<std::uint64_t> seed;
    std::optional<double> gain;
};

int status_to_exit(rateobs_status rc) {
    switch (rc) {
        case RATEOBS_OK: return 0;
        case RATEOBS_ERR_INPUT: return 2;
        case RATEOBS_ERR_NUMERIC: return 3;
        default: return 1;
    }
}

int fail(rateobs_status rc) {
    std::fprintf(stderr, "error: %s\n", rateobs_last_error());
    return status_to_exit(rc);
}

class Scenario {
public:
    ~Scenario() { rateobs_scenario_free(handle_); }
    rateobs_scenario* get() const { return handle_; }
    rateobs_scenario** out() { return &handle_; }

private:
    rateobs_scenario* handle_ = nullptr;
};

class Run {
public:
    ~Run() { rateobs_run_free(handle_); }
    rateobs_run* get() const { return handle_; }
    rateobs_run** out() { return &handle_; }

private:
    rateobs_run* handle_ = nullptr;
};

int load_scenario(const CommonArgs& args, Scenario& sc) {
    rateobs_status rc = rateobs_scenario_load_file(args.scenario_path.c_str(), sc.out());
    if (rc != RATEOBS_OK) return fail(rc);
    if (args.seed) {
        rc = rateobs_scenario_set_seed(sc.get(), *args.seed);
        if (rc != RATEOBS_OK) return fail(rc);
    }
    if (args.gain) {
        rc = rateobs_scenario_set_gain(sc.get(), *args.gain);
        if (rc != RATEOBS_OK) return fail(rc);
    }
    return 0;
}

int finish_run(const Run& run, const std::string& out_dir) {
    rateobs_status rc = rateobs_run_write(run.get(), out_dir.c_str());
    if (rc != RATEOBS_OK) return fail(rc);

    char* warnings = nullptr;
    if (rateobs_run_warnings(run.get(), &warnings) == RATEOBS_OK && warnings) {
        if (warnings[0] != '\0') std::fprintf(stderr, "warning: %s\n", warnings);
        rateobs_string_free(warnings);
    }

    char* summary = nullptr;
    rc = rateobs_run_summary_json(run.get(), &summary);
    if (rc != RATEOBS_OK) return fail(rc);
    std::printf("%s\n", summary);
    rateobs_string_free(summary);
    return 0;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_noise_flag = true) {
    cmd->add_option("--scenario", args.scenario_path, "Scenario JSON file")->required();
    cmd->add_option("--out", args.out_dir, "Output directory")->required();
    cmd->add_option("--seed", args.seed, "Override the scenario noise seed");
    if (with_noise_flag)
        cmd->add_flag("--noise", args.noise, "Apply the scenario's sensor noise model");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Angular-velocity observer workbench: simulate rigid-body rotation, "
                 "filter single-vector measurements, analyse excitation"};
    app.require_subcommand(1);

    CommonArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Integrate the scenario and write "
                                                   "trajectory/measurement CSVs");
    add_common(sim, sim_args);

    CommonArgs obs_args;
    CLI::App* obs = app.add_subcommand("observe", "Full pipeline: simulate, measure, run the "
                                                  "observer, write artifacts and summary");
    add_common(obs, obs_args);
    obs->add_option("--k", obs_args.gain, "Observer gain override");

    CommonArgs pe_args;
    double pe_window = 0.0;
    CLI::App* pe = app.add_subcommand("pe-check", "Excitation margin and the "
                                                  "initial-condition prediction");
    add_common(pe, pe_args, false);
    pe->add_option("--T", pe_window, "Analysis window length in seconds");

    CommonArgs decay_args;
    double decay_window = 0.0;
    CLI::App* decay = app.add_subcommand("estimate-decay", "Window decay constant of the "
                                                           "error dynamics plus the "
                                                           "convergence budget");
    add_common(decay, decay_args, false);
    decay->add_option("--T", decay_window, "Window length in seconds")->required();
    decay->add_option("--k", decay_args.gain, "Gain override");

    CommonArgs sweep_args;
    std::string k_list;
    CLI::App* sweep = app.add_subcommand("gain-sweep", "Observe once per gain and tabulate "
                                                       "convergence metrics");
    add_common(sweep, sweep_args);
    sweep->add_option("--k-list", k_list, "Comma-separated gains, e.g. 0.2,1,5")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    auto run_pipeline = [](const CommonArgs& args, auto&& start) {
        Scenario sc;
        if (int rc = load_scenario(args, sc)) return rc;
        Run run;
        rateobs_status status = start(sc, run);
        if (status != RATEOBS_OK) return fail(status);
        return finish_run(run, args.out_dir);
    };

    if (sim->parsed()) {
        return run_pipeline(sim_args, [&](Scenario& sc, Run& run) {
            return rateobs_run_simulate(sc.get(), sim_args.noise ? 1 : 0, run.out());
        });
    }
    if (obs->parsed()) {
        return run_pipeline(obs_args, [&](Scenario& sc, Run& run) {
            return rateobs_run_observe(sc.get(), obs_args.noise ? 1 : 0, run.out());
        });
    }
    if (pe->parsed()) {
        return run_pipeline(pe_args, [&](Scenario& sc, Run& run) {
            return rateobs_run_pe_check(sc.get(), pe_window, run.out());
        });
    }
    if (decay->parsed()) {
        return run_pipeline(decay_args, [&](Scenario& sc, Run& run) {
            return rateobs_run_estimate_decay(sc.get(), decay_args.gain.value_or(0.0),
                                              decay_window, run.out());
        });
    }
    if (sweep->parsed()) {
        std::vector<double> gains;
        std::size_t pos = 0;
        while (pos <= k_list.size()) {
            const std::size_t comma = k_list.find(',', pos);
            const std::string tok =
                k_list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!tok.empty()) {
                try {
                    std::size_t used = 0;
                    const double v = std::stod(tok, &used);
                    if (used != tok.size()) throw std::invalid_argument(tok);
                    gains.push_back(v);
                } catch (const std::exception&) {
                    std::fprintf(stderr, "error: k-list: '%s' is not a number\n", tok.c_str());
                    return 2;
                }
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return run_pipeline(sweep_args, [&](Scenario& sc, Run& run) {
            return rateobs_run_gain_sweep(sc.get(), gains.data(), gains.size(),
                                          sweep_args.noise ? 1 : 0, run.out());
        });
    }
    return 2;
}
