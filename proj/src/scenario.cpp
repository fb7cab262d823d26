#include "rateobs/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rateobs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw InvalidInput(path + ": " + msg);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "must be a boolean");
    return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "must be a string");
    return j.get<std::string>();
}

Vec3 as_vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "must be an array of 3 numbers");
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]"),
            as_number(j[2], path + "[2]")};
}

Rotation as_rotation(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "must be an object with either axis/angle or matrix");
    if (j.contains("matrix")) {
        const json& m = j["matrix"];
        if (!m.is_array() || m.size() != 9)
            fail(join(path, "matrix"), "must be an array of 9 numbers (row-major)");
        Mat3 mat;
        for (int i = 0; i < 9; ++i)
            mat.e[static_cast<std::size_t>(i)] =
                as_number(m[static_cast<std::size_t>(i)],
                          join(path, "matrix") + "[" + std::to_string(i) + "]");
        try {
            return Rotation::from_matrix(mat);
        } catch (const InvalidInput& e) {
            fail(join(path, "matrix"), e.what());
        }
    }
    const Vec3 axis = as_vec3(require(j, "axis", path), join(path, "axis"));
    const double angle = as_number(require(j, "angle", path), join(path, "angle"));
    if (axis.norm() == 0.0) fail(join(path, "axis"), "must be a nonzero vector");
    return Rotation::about_axis(axis.normalized(), angle);
}

InertiaModel parse_inertia(const json& root) {
    const json& node = require(root, "inertia", "");
    const Vec3 values = as_vec3(require(node, "values", "inertia"), "inertia.values");
    double scale = 1.0;
    if (node.contains("unit")) {
        const std::string unit = as_string(node["unit"], "inertia.unit");
        if (unit == "kg_m2")
            scale = 1.0;
        else if (unit == "kg_cm2")
            scale = 1e-4;
        else
            fail("inertia.unit", "must be \"kg_m2\" or \"kg_cm2\"");
    }
    try {
        return InertiaModel(values.x * scale, values.y * scale, values.z * scale);
    } catch (const InvalidInput& e) {
        fail("inertia.values", e.what());
    }
}

TorqueModel parse_torque(const json& root) {
    if (!root.contains("torque")) return TorqueModel::zero();
    const json& node = root["torque"];
    const std::string kind = as_string(require(node, "kind", "torque"), "torque.kind");
    if (kind == "zero") return TorqueModel::zero();
    if (kind == "constant") {
        const Vec3 v = as_vec3(require(node, "value", "torque"), "torque.value");
        return TorqueModel::constant(v);
    }
    fail("torque.kind", "must be \"zero\" or \"constant\"");
}

SensorModel parse_sensor(const json& root) {
    SensorModel sensor;
    if (!root.contains("sensor")) return sensor;
    const json& node = root["sensor"];
    if (!node.is_object()) fail("sensor", "must be an object");
    if (node.contains("noise_density")) {
        sensor.noise_density = as_number(node["noise_density"], "sensor.noise_density");
        if (sensor.noise_density < 0.0) fail("sensor.noise_density", "must be >= 0");
    }
    if (node.contains("seed")) {
        const json& s = node["seed"];
        if (!s.is_number_unsigned() && !s.is_number_integer())
            fail("sensor.seed", "must be a non-negative integer");
        const auto v = s.get<std::int64_t>();
        if (v < 0) fail("sensor.seed", "must be a non-negative integer");
        sensor.seed = static_cast<std::uint64_t>(v);
    }
    if (node.contains("renormalize"))
        sensor.renormalize = as_bool(node["renormalize"], "sensor.renormalize");
    if (node.contains("mounting"))
        sensor.mounting = as_rotation(node["mounting"], "sensor.mounting");
    return sensor;
}

SimulationGrid parse_grid(const json& root) {
    const json& node = require(root, "grid", "");
    SimulationGrid grid;
    grid.dt = as_number(require(node, "dt", "grid"), "grid.dt");
    grid.duration = as_number(require(node, "duration", "grid"), "grid.duration");
    if (!(grid.dt > 0.0)) fail("grid.dt", "must be > 0");
    if (!(grid.duration >= grid.dt)) fail("grid.duration", "must be >= grid.dt");
    return grid;
}

ObserverConfig parse_observer(const json& root) {
    ObserverConfig cfg;
    if (!root.contains("observer")) return cfg;
    const json& node = root["observer"];
    if (!node.is_object()) fail("observer", "must be an object");
    if (node.contains("k")) {
        cfg.k = as_number(node["k"], "observer.k");
        if (!(cfg.k > 0.0)) fail("observer.k", "must be > 0");
    }
    if (node.contains("init")) {
        const json& init = node["init"];
        ObserverState s{};
        s.a_hat = as_vec3(require(init, "a_hat", "observer.init"), "observer.init.a_hat");
        s.omega_hat =
            as_vec3(require(init, "omega_hat", "observer.init"), "observer.init.omega_hat");
        cfg.init = s;
    }
    return cfg;
}

Scenario parse_scenario(const json& root) {
    if (!root.is_object()) throw InvalidInput("<root>: scenario must be a JSON object");

    const std::string name = as_string(require(root, "name", ""), "name");
    std::string description;
    if (root.contains("description"))
        description = as_string(root["description"], "description");

    InertiaModel inertia = parse_inertia(root);
    TorqueModel torque = parse_torque(root);

    Rotation attitude0;
    if (root.contains("attitude0")) attitude0 = as_rotation(root["attitude0"], "attitude0");

    const Vec3 omega0 = as_vec3(require(root, "omega0", ""), "omega0");

    const Vec3 a_raw = as_vec3(require(root, "a_ring", ""), "a_ring");
    if (a_raw.norm() == 0.0) fail("a_ring", "must be a nonzero vector");

    return Scenario{name,
                    description,
                    inertia,
                    torque,
                    attitude0,
                    omega0,
                    ReferenceVector(a_raw.normalized()),
                    parse_sensor(root),
                    parse_grid(root),
                    parse_observer(root)};
}

}  // namespace

Scenario load_scenario_string(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("scenario JSON parse error: ") + e.what());
    }
    return parse_scenario(root);
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario_string(buf.str());
}

}  // namespace rateobs
