#include "rateobs.h"

#include <cstring>
#include <string>
#include <variant>
#include <vector>

#include "rateobs/harness.hpp"

namespace {

thread_local std::string g_last_error;

constexpr int kAbiVersion = 1;

template <class F>
rateobs_status guarded(F&& f) {
    try {
        f();
        return RATEOBS_OK;
    } catch (const rateobs::NumericFailure& e) {
        g_last_error = e.what();
        return RATEOBS_ERR_NUMERIC;
    } catch (const rateobs::InvalidInput& e) {
        g_last_error = e.what();
        return RATEOBS_ERR_INPUT;
    } catch (const rateobs::IoError& e) {
        g_last_error = e.what();
        return RATEOBS_ERR_INPUT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RATEOBS_ERR_INTERNAL;
    }
}

rateobs_status require_arg(bool ok, const char* msg) {
    if (ok) return RATEOBS_OK;
    g_last_error = msg;
    return RATEOBS_ERR_INPUT;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

struct rateobs_scenario {
    rateobs::Scenario sc;
};

struct rateobs_run {
    std::variant<rateobs::SimulateProducts, rateobs::ObserveProducts,
                 rateobs::PECheckProducts, rateobs::DecayProducts, rateobs::SweepProducts>
        products;
};

extern "C" {

int rateobs_abi_version(void) { return kAbiVersion; }

const char* rateobs_last_error(void) { return g_last_error.c_str(); }

rateobs_status rateobs_scenario_load_file(const char* path, rateobs_scenario** out) {
    if (auto rc = require_arg(path && out, "null argument")) return rc;
    return guarded([&] { *out = new rateobs_scenario{rateobs::load_scenario_file(path)}; });
}

rateobs_status rateobs_scenario_load_string(const char* json_text, rateobs_scenario** out) {
    if (auto rc = require_arg(json_text && out, "null argument")) return rc;
    return guarded(
        [&] { *out = new rateobs_scenario{rateobs::load_scenario_string(json_text)}; });
}

rateobs_status rateobs_scenario_clone(const rateobs_scenario* sc, rateobs_scenario** out) {
    if (auto rc = require_arg(sc && out, "null argument")) return rc;
    return guarded([&] { *out = new rateobs_scenario{sc->sc}; });
}

void rateobs_scenario_free(rateobs_scenario* sc) { delete sc; }

rateobs_status rateobs_scenario_set_seed(rateobs_scenario* sc, uint64_t seed) {
    if (auto rc = require_arg(sc != nullptr, "null scenario")) return rc;
    sc->sc.sensor.seed = seed;
    return RATEOBS_OK;
}

rateobs_status rateobs_scenario_set_gain(rateobs_scenario* sc, double k) {
    if (auto rc = require_arg(sc != nullptr, "null scenario")) return rc;
    if (auto rc = require_arg(k > 0.0, "observer gain must be positive")) return rc;
    sc->sc.observer.k = k;
    return RATEOBS_OK;
}

rateobs_status rateobs_scenario_name(const rateobs_scenario* sc, char** out) {
    if (auto rc = require_arg(sc && out, "null argument")) return rc;
    *out = dup_string(sc->sc.name);
    return RATEOBS_OK;
}

rateobs_status rateobs_run_simulate(const rateobs_scenario* sc, int noise,
                                    rateobs_run** out) {
    if (auto rc = require_arg(sc && out, "null argument")) return rc;
    return guarded(
        [&] { *out = new rateobs_run{rateobs::simulate_scenario(sc->sc, noise != 0)}; });
}

rateobs_status rateobs_run_observe(const rateobs_scenario* sc, int noise, rateobs_run** out) {
    if (auto rc = require_arg(sc && out, "null argument")) return rc;
    return guarded(
        [&] { *out = new rateobs_run{rateobs::observe_scenario(sc->sc, noise != 0)}; });
}

rateobs_status rateobs_run_pe_check(const rateobs_scenario* sc, double window_or_zero,
                                    rateobs_run** out) {
    if (auto rc = require_arg(sc && out, "null argument")) return rc;
    return guarded([&] {
        std::optional<double> window;
        if (window_or_zero > 0.0) window = window_or_zero;
        *out = new rateobs_run{rateobs::pe_check_scenario(sc->sc, window)};
    });
}

rateobs_status rateobs_run_estimate_decay(const rateobs_scenario* sc, double gain_or_zero,
                                          double window, rateobs_run** out) {
    if (auto rc = require_arg(sc && out, "null argument")) return rc;
    return guarded([&] {
        std::optional<double> gain;
        if (gain_or_zero > 0.0) gain = gain_or_zero;
        *out = new rateobs_run{rateobs::decay_scenario(sc->sc, gain, window)};
    });
}

rateobs_status rateobs_run_gain_sweep(const rateobs_scenario* sc, const double* gains,
                                      size_t n_gains, int noise, rateobs_run** out) {
    if (auto rc = require_arg(sc && out, "null argument")) return rc;
    if (auto rc = require_arg(gains != nullptr || n_gains == 0, "null gains array")) return rc;
    return guarded([&] {
        std::vector<double> ks(gains, gains + n_gains);
        *out = new rateobs_run{rateobs::gain_sweep_scenario(sc->sc, ks, noise != 0)};
    });
}

void rateobs_run_free(rateobs_run* run) { delete run; }

rateobs_status rateobs_run_write(const rateobs_run* run, const char* out_dir) {
    if (auto rc = require_arg(run && out_dir, "null argument")) return rc;
    return guarded([&] {
        std::visit([&](const auto& products) { rateobs::write_artifacts(products, out_dir); },
                   run->products);
    });
}

rateobs_status rateobs_run_summary_json(const rateobs_run* run, char** out) {
    if (auto rc = require_arg(run && out, "null argument")) return rc;
    return guarded([&] {
        const std::string text = std::visit(
            [](const auto& products) { return rateobs::summary_json_text(products); },
            run->products);
        *out = dup_string(text);
    });
}

rateobs_status rateobs_run_warnings(const rateobs_run* run, char** out) {
    if (auto rc = require_arg(run && out, "null argument")) return rc;
    std::string text;
    if (const auto* sweep = std::get_if<rateobs::SweepProducts>(&run->products)) {
        for (const std::string& w : sweep->warnings) {
            if (!text.empty()) text += '\n';
            text += w;
        }
    }
    *out = dup_string(text);
    return RATEOBS_OK;
}

void rateobs_string_free(char* s) { delete[] s; }

}  // extern "C"
