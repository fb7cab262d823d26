/*
 * rateobs — angular-velocity estimation from single reference-vector
 * measurements: rigid-body simulation, nonlinear observer, excitation
 * analysis.
 *
 * C interface of the shared library. All objects are opaque handles; every
 * entry point returns a status code and leaves a thread-local message
 * retrievable through rateobs_last_error().
 */
#ifndef RATEOBS_H
#define RATEOBS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rateobs_status {
    RATEOBS_OK = 0,
    RATEOBS_ERR_INPUT = 2,   /* schema violation or precondition failure */
    RATEOBS_ERR_NUMERIC = 3, /* numeric blow-up or failed convergence */
    RATEOBS_ERR_INTERNAL = 4
} rateobs_status;

typedef struct rateobs_scenario rateobs_scenario;
typedef struct rateobs_run rateobs_run;

int rateobs_abi_version(void);

/* Message describing the most recent failure on this thread. Never NULL. */
const char* rateobs_last_error(void);

/* ---- scenarios ---------------------------------------------------- */

rateobs_status rateobs_scenario_load_file(const char* path, rateobs_scenario** out);
rateobs_status rateobs_scenario_load_string(const char* json_text, rateobs_scenario** out);
rateobs_status rateobs_scenario_clone(const rateobs_scenario* sc, rateobs_scenario** out);
void rateobs_scenario_free(rateobs_scenario* sc);

rateobs_status rateobs_scenario_set_seed(rateobs_scenario* sc, uint64_t seed);
rateobs_status rateobs_scenario_set_gain(rateobs_scenario* sc, double k);
/* Scenario name as a fresh string; release with rateobs_string_free. */
rateobs_status rateobs_scenario_name(const rateobs_scenario* sc, char** out);

/* ---- pipelines ----------------------------------------------------
 * `noise` != 0 applies the scenario's sensor noise model; 0 keeps the
 * measurements ideal. Runs own all produced series and reports.
 */

rateobs_status rateobs_run_simulate(const rateobs_scenario* sc, int noise,
                                    rateobs_run** out);
rateobs_status rateobs_run_observe(const rateobs_scenario* sc, int noise,
                                   rateobs_run** out);
/* window_or_zero <= 0 selects the scenario's natural analysis window. */
rateobs_status rateobs_run_pe_check(const rateobs_scenario* sc, double window_or_zero,
                                    rateobs_run** out);
/* gain_or_zero <= 0 uses the scenario gain. */
rateobs_status rateobs_run_estimate_decay(const rateobs_scenario* sc, double gain_or_zero,
                                          double window, rateobs_run** out);
rateobs_status rateobs_run_gain_sweep(const rateobs_scenario* sc, const double* gains,
                                      size_t n_gains, int noise, rateobs_run** out);

void rateobs_run_free(rateobs_run* run);

/* Writes the run's artifact files (CSV + JSON) into out_dir. */
rateobs_status rateobs_run_write(const rateobs_run* run, const char* out_dir);

/* Scalar metrics of the run as a JSON object; release with
 * rateobs_string_free. */
rateobs_status rateobs_run_summary_json(const rateobs_run* run, char** out);

/* Newline-separated warnings accumulated by the run ("" when none). */
rateobs_status rateobs_run_warnings(const rateobs_run* run, char** out);

void rateobs_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RATEOBS_H */
