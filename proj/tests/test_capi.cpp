// Exercises the shared-library C interface end to end: handle lifecycle,
// error codes, artifact writing, summary retrieval.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rateobs.h"

namespace fs = std::filesystem;

namespace {

const char* kScenario = R"({
  "name": "capi",
  "inertia": {"values": [87, 83, 37], "unit": "kg_cm2"},
  "omega0": [0.3, 0.35, 0.28],
  "a_ring": [0.37, -0.55, 0.75],
  "sensor": {"noise_density": 0.03, "seed": 11},
  "grid": {"dt": 0.01, "duration": 10.0},
  "observer": {"k": 1.0}
})";

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("rateobs_capi_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("abi version and error reporting surface") {
    CHECK(rateobs_abi_version() == 1);
    CHECK(rateobs_last_error() != nullptr);
}

TEST_CASE("scenario lifecycle: load, clone, mutate, name") {
    rateobs_scenario* sc = nullptr;
    REQUIRE(rateobs_scenario_load_string(kScenario, &sc) == RATEOBS_OK);

    char* name = nullptr;
    REQUIRE(rateobs_scenario_name(sc, &name) == RATEOBS_OK);
    CHECK(std::strcmp(name, "capi") == 0);
    rateobs_string_free(name);

    rateobs_scenario* copy = nullptr;
    REQUIRE(rateobs_scenario_clone(sc, &copy) == RATEOBS_OK);
    CHECK(rateobs_scenario_set_gain(copy, 2.0) == RATEOBS_OK);
    CHECK(rateobs_scenario_set_gain(copy, -1.0) == RATEOBS_ERR_INPUT);
    CHECK(rateobs_scenario_set_seed(copy, 99) == RATEOBS_OK);

    rateobs_scenario_free(copy);
    rateobs_scenario_free(sc);
}

TEST_CASE("invalid scenario text maps to the input error code with a message") {
    rateobs_scenario* sc = nullptr;
    CHECK(rateobs_scenario_load_string("{\"name\": 3}", &sc) == RATEOBS_ERR_INPUT);
    CHECK(std::string(rateobs_last_error()).find("name") != std::string::npos);
    CHECK(rateobs_scenario_load_string(nullptr, &sc) == RATEOBS_ERR_INPUT);
    CHECK(rateobs_scenario_load_file("/nonexistent.json", &sc) == RATEOBS_ERR_INPUT);
}

TEST_CASE("numeric blow-up maps to the numeric error code") {
    const char* explosive = R"({
      "name": "boom",
      "inertia": {"values": [1, 1, 1], "unit": "kg_m2"},
      "torque": {"kind": "constant", "value": [1e9, 0, 0]},
      "omega0": [0, 0, 0],
      "a_ring": [1, 0, 0],
      "grid": {"dt": 0.01, "duration": 5.0}
    })";
    rateobs_scenario* sc = nullptr;
    REQUIRE(rateobs_scenario_load_string(explosive, &sc) == RATEOBS_OK);
    rateobs_run* run = nullptr;
    CHECK(rateobs_run_simulate(sc, 0, &run) == RATEOBS_ERR_NUMERIC);
    rateobs_scenario_free(sc);
}

TEST_CASE("observe run: write artifacts and read the summary") {
    rateobs_scenario* sc = nullptr;
    REQUIRE(rateobs_scenario_load_string(kScenario, &sc) == RATEOBS_OK);

    rateobs_run* run = nullptr;
    REQUIRE(rateobs_run_observe(sc, 0, &run) == RATEOBS_OK);

    char* summary_text = nullptr;
    REQUIRE(rateobs_run_summary_json(run, &summary_text) == RATEOBS_OK);
    const nlohmann::json summary = nlohmann::json::parse(summary_text);
    CHECK(summary["scenario"] == "capi");
    CHECK(summary["k"] == 1.0);
    CHECK(summary["noise"] == false);
    CHECK(summary["final_omega_error"].is_number());
    rateobs_string_free(summary_text);

    TempDir dir;
    REQUIRE(rateobs_run_write(run, dir.path.c_str()) == RATEOBS_OK);
    CHECK(fs::exists(dir.path / "observer.csv"));
    CHECK(fs::exists(dir.path / "summary.json"));

    rateobs_run_free(run);
    rateobs_scenario_free(sc);
}

TEST_CASE("pe-check and estimate-decay runs through the C surface") {
    rateobs_scenario* sc = nullptr;
    REQUIRE(rateobs_scenario_load_string(kScenario, &sc) == RATEOBS_OK);

    rateobs_run* pe = nullptr;
    REQUIRE(rateobs_run_pe_check(sc, 0.0, &pe) == RATEOBS_OK);
    char* text = nullptr;
    REQUIRE(rateobs_run_summary_json(pe, &text) == RATEOBS_OK);
    CHECK(nlohmann::json::parse(text)["verdict"] == "PE");
    rateobs_string_free(text);
    rateobs_run_free(pe);

    rateobs_run* decay = nullptr;
    REQUIRE(rateobs_run_estimate_decay(sc, 0.0, 3.0, &decay) == RATEOBS_OK);
    REQUIRE(rateobs_run_summary_json(decay, &text) == RATEOBS_OK);
    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["c_hat"].get<double>() <= 1.0);
    CHECK(j["c_hat"].get<double>() > 0.0);
    rateobs_string_free(text);
    rateobs_run_free(decay);

    rateobs_scenario_free(sc);
}

TEST_CASE("gain sweep through the C surface reports duplicate warnings") {
    rateobs_scenario* sc = nullptr;
    REQUIRE(rateobs_scenario_load_string(kScenario, &sc) == RATEOBS_OK);

    const double gains[3] = {1.0, 0.5, 1.0};
    rateobs_run* run = nullptr;
    REQUIRE(rateobs_run_gain_sweep(sc, gains, 3, 0, &run) == RATEOBS_OK);

    char* warnings = nullptr;
    REQUIRE(rateobs_run_warnings(run, &warnings) == RATEOBS_OK);
    CHECK(std::string(warnings).find("duplicate") != std::string::npos);
    rateobs_string_free(warnings);

    rateobs_run* empty = nullptr;
    CHECK(rateobs_run_gain_sweep(sc, gains, 0, 0, &empty) == RATEOBS_ERR_INPUT);

    rateobs_run_free(run);
    rateobs_scenario_free(sc);
}

TEST_CASE("null arguments are rejected, not crashed on") {
    CHECK(rateobs_run_write(nullptr, "/tmp") == RATEOBS_ERR_INPUT);
    CHECK(rateobs_run_summary_json(nullptr, nullptr) == RATEOBS_ERR_INPUT);
    CHECK(rateobs_scenario_name(nullptr, nullptr) == RATEOBS_ERR_INPUT);
    rateobs_run_free(nullptr);
    rateobs_scenario_free(nullptr);
    rateobs_string_free(nullptr);
}
