#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "flier/actuator.hpp"
#include "flier/origami.hpp"
#include "flier/power.hpp"
#include "flier/rng.hpp"

namespace flier::flight {

enum class Mode { Tumbling, Stable };

struct DescentModel {
    double v_terminal_tumbling = 3.0;   // m/s (4-cell default)
    double v_terminal_stable = 1.1;     // m/s
    double lateral_coupling_tumbling = 1.0;
    double lateral_coupling_stable = 0.13;
    double vertical_relax_time = 0.5;   // s, approach to terminal velocity
    double cop_oscillation_range = 10e-3;  // m, center-of-pressure excursion
    double tumble_frequency_hz = 10.0;  // characteristic tumble rate (4-cell)
    double tumble_gust_speed = 0.2;     // m/s lateral fluctuation scale
    double upright_prob_tumbling = 0.52;
    double upright_prob_stable = 0.87;

    double terminal(Mode m) const {
        return m == Mode::Tumbling ? v_terminal_tumbling : v_terminal_stable;
    }
    double coupling(Mode m) const {
        return m == Mode::Tumbling ? lateral_coupling_tumbling
                                   : lateral_coupling_stable;
    }
    void validate() const;
};

struct WindModel {
    double mean_speed = 3.0;      // m/s
    double reversion_time = 5.0;  // s
    double volatility = 0.76;     // m/s/sqrt(s); stationary sd ~ 1.2 m/s
    double direction_rad = 0.0;   // fixed azimuth

    // One Ornstein-Uhlenbeck step; speeds clipped at zero.
    double step(double speed, double dt, Rng& rng) const;
};

struct BodyState {
    Vec3 pos{0, 0, 0};
    double vz = 0.0;           // descent rate, positive down
    Mode mode = Mode::Tumbling;
    double tumble_phase = 0.0;  // rad; flips counted as phase/pi
    double lateral_fluct_x = 0.0;  // OU fluctuation, tumbling only
    double lateral_fluct_y = 0.0;
};

void step_dynamics(BodyState& state, const DescentModel& model,
                   double wind_speed, double wind_dir_rad, double dt,
                   Rng& rng);

struct TelemetryPacket {
    double t = 0.0;
    double altitude_m = 0.0;     // barometric, with sensor noise
    double temperature_c = 0.0;
    bool delivered = false;
};

struct TrajectorySample {
    double t = 0.0;
    Vec3 pos;
    Mode mode = Mode::Tumbling;
    power::Phase phase = power::Phase::Dark;
};

enum class DropOutcome { Transitioned, NoTransition };

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<TelemetryPacket> packets;
    DropOutcome outcome = DropOutcome::NoTransition;
    double transition_time = 0.0;   // s, valid when transitioned
    double landing_distance = 0.0;  // m, planar
    bool landed_upright = false;
    double airborne_time = 0.0;     // s
    double fraction_time_tumbling = 1.0;
    double flips = 0.0;             // accumulated half-turns while tumbling
};

struct DropScenario {
    double altitude_m = 40.0;
    origami::OrigamiSpec origami;     // must be bistable for transitions
    actuator::ActuatorSpec actuator;
    actuator::CapacitorBank bank;
    power::PowerCircuit circuit;
    power::TriggerPolicy policy;
    power::RadioModel radio;
    DescentModel descent;
    WindModel wind;
    double irradiance_w_m2 = 800.0;
    double payload_mass_kg = 0.0;
    double sensor_noise_pa = 12.0;  // ~1 m of altitude
    double p0_pa = 101325.0;
    double sample_dt = 5e-3;
    std::uint64_t seed = 1;
    Mode initial_mode = Mode::Tumbling;
    // Start with the coil bank pre-charged and the FSM armed (skips harvest
    // latency; used by immediate-trigger studies).
    bool pre_armed = false;
};

Trajectory run_drop(const DropScenario& scenario);

struct DispersalStats {
    std::vector<double> distances_m;
    std::vector<double> fraction_tumbling;
    std::vector<bool> upright;
    double mean_distance = 0.0;
    double median_distance = 0.0;
    double max_distance = 0.0;
    double upright_fraction = 0.0;
    std::vector<std::pair<double, double>> landing_xy;
};

DispersalStats monte_carlo(const DropScenario& scenario, int n_trials,
                           std::uint64_t seed, int n_threads = 1);

bool landing_orientation(Mode mode, const DescentModel& model, Rng& rng);

// Tumbling-state terminal velocity per cell count (n = 3..8).
std::map<int, double> terminal_velocity_table();
double terminal_velocity(int n_cells);

}  // namespace flier::flight
