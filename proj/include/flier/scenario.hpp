#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "flier/design.hpp"
#include "flier/flight.hpp"

namespace flier::scenario {

// Configuration problem (unreadable file, bad JSON, invalid field). Carries a
// field-path / position diagnostic in the message.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// One configuration document shared by all commands; every field has a
// default matching the reference hardware.
struct Scenario {
    // Default mission: drop pre-armed, fire on the low-altitude pressure check.
    Scenario() { policy.kind = power::TriggerPolicy::Kind::Pressure; }

    // structure / design
    int n_cells = 4;
    double length = 0.030;        // m
    double tip_fraction = 0.3;
    double rest_psi = deg2rad(55.0);
    double stiffness_scale = design::kStiffnessScaleDefault;
    design::FilmSpec film;
    design::CutPattern cut;
    design::RootStructure root;

    // actuator
    flier::actuator::ActuatorSpec actuator;
    flier::actuator::CapacitorBank bank;

    // power / radio
    power::PowerCircuit circuit;
    power::TriggerPolicy policy;
    power::RadioModel radio;
    double irradiance_w_m2 = 800.0;
    double power_duration_s = 30.0;
    double power_record_dt_s = 0.1;
    double power_range_m = 10.0;  // radio range assumed for the bench run

    // flight
    double altitude_m = 40.0;
    int n_trials = 200;
    double payload_mass_kg = 0.0;
    bool pre_armed = true;
    flight::Mode initial_mode = flight::Mode::Tumbling;
    double sensor_noise_pa = 12.0;
    double p0_pa = 101325.0;
    flight::DescentModel descent;
    flight::WindModel wind;

    // run control
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = all available cores
    std::string format = "csv";

    origami::OrigamiSpec make_origami() const;
    flight::DropScenario make_drop() const;
    void validate() const;  // throws ConfigError with a field diagnostic
};

// Parse a JSON configuration document; unknown fields are rejected with their
// path, type mismatches and invalid values with a field diagnostic.
Scenario load_scenario(const std::string& json_text);

struct LoadedScenario {
    Scenario scenario;
    std::uint64_t config_hash = 0;  // FNV-1a over the raw document bytes
};

// Read and parse a configuration file; empty path yields the defaults (hash
// of the canonical default document).
LoadedScenario load_scenario_file(const std::string& path);

// Canonical JSON dump of a scenario (stable key order).
std::string dump_scenario(const Scenario& s);

}  // namespace flier::scenario
