#pragma once

#include <string>

#include "rateobs/dynamics.hpp"
#include "rateobs/measurement.hpp"
#include "rateobs/observer.hpp"

namespace rateobs {

/// Full experiment description. Loaded from a JSON file; every module
/// invariant is enforced at load time with a field-path diagnostic.
struct Scenario {
    std::string name;
    std::string description;
    InertiaModel inertia;  // converted to SI at load
    TorqueModel torque;
    Rotation attitude0;
    Vec3 omega0;
    ReferenceVector a_ring;
    SensorModel sensor;
    SimulationGrid grid;
    ObserverConfig observer;
};

/// Parses and validates a scenario from JSON text. InvalidInput messages
/// name the offending field path (e.g. "grid.dt: must be > 0").
Scenario load_scenario_string(const std::string& json_text);

/// Reads the file (IoError on failure) and parses it.
Scenario load_scenario_file(const std::string& path);

}  // namespace rateobs
