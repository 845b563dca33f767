#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "flier/actuator.hpp"
#include "flier/common.hpp"

namespace flier::power {

struct SolarModel {
    int n_solar_cells = 2;             // 2 or 4
    double voc_per_cell = 2.8;         // V in bright sunlight
    double slope_two_cell = 6.0e-6;    // A per (W/m^2)
    double slope_four_cell = 12.0e-6;  // A per (W/m^2)
    double intercept = 0.0;            // A
    double source_resistance = 50.0;   // ohm, sets the charge-current rolloff

    // Two cells in series (the 4-cell array is two series pairs in parallel).
    double open_circuit_voltage() const { return 2.0 * voc_per_cell; }
    void validate() const;
};

double harvest_current(const SolarModel& solar, double irradiance_w_m2,
                       int n_solar_cells);

enum class Phase { Dark, ColdStart, McuOn, ChargingCoil, Armed, Triggered };
const char* phase_name(Phase p);

struct PowerState {
    double v_store = 0.0;  // V on the storage capacitor
    double v_coil = 0.0;   // V on the actuator capacitor bank
    Phase phase = Phase::Dark;
    bool v_switch = false;  // harvest redirected to the coil bank
    bool v_trig = false;    // actuator fire line
    double elapsed = 0.0;   // s
    int cold_starts = 0;    // completed cold-start events
};

struct TriggerPolicy {
    enum class Kind { Timer, Pressure, Radio } kind = Kind::Timer;
    // timer
    double timer_delay = 0.0;  // s
    // pressure
    double pressure_threshold_m = 5.0;
    bool require_descending = true;
    // radio
    int command_id = 1;
    double rx_period = 1.0;    // s
    double rx_window = 5e-3;   // s
    double rx_phase = 0.0;     // s, receiver schedule offset
    double clock_skew_ppm = 0.0;

    void validate() const;
};

struct TriggerTelemetry {
    double elapsed = 0.0;                 // s
    std::vector<double> altitudes_m;      // time-ordered samples
    std::vector<double> command_times_s;  // received radio commands
};

bool evaluate_trigger(const TriggerPolicy& policy,
                      const TriggerTelemetry& telemetry);

struct RadioModel {
    double pdr_midpoint_m = 75.0;  // logistic midpoint
    double pdr_width_m = 4.0;      // logistic width
    double max_rate_hz = 50.0;     // 1 packet / 20 ms
    double low_power_rate_hz = 1.0;
    double rx_period = 1.0;        // s
    double rx_window = 5e-3;       // s
    double packet_energy = 120e-6;  // J
};

// Fixed circuit parameters of the harvesting board.
struct PowerCircuit {
    SolarModel solar;
    double c_store = 7.5e-3 + 100e-6;  // F (transient buffer lumped in)
    double c_coil = 440e-6;            // F actuator bank
    double v_store_max = 2.6;          // absolute regulator tolerance
    double v_store_full = 2.5;         // clamp / "fully charged" level
    double v_hysteresis = 0.05;
    double v_brownout = 1.9;           // MCU rail dropout
    double v_coil_fire = 5.0;          // actuation threshold
    double sleep_current = 20e-6;      // A, MCU asleep
    double cold_start_leak = 1e-6;     // A, before the MCU runs
};

PowerState fsm_step(const PowerCircuit& circuit, const PowerState& state,
                    double dt, double irradiance_w_m2,
                    const TriggerPolicy& policy,
                    const TriggerTelemetry& telemetry);

inline constexpr double kNeverStarts = std::numeric_limits<double>::infinity();

// Time from zero charge to MCU operation; kNeverStarts below the viability
// floor.
double cold_start_time(const PowerCircuit& circuit, double irradiance_w_m2,
                       int n_solar_cells);

struct CoilChargeReport {
    double seconds = 0.0;              // kNeverStarts if unreachable
    double min_drop_altitude_m = 0.0;  // charge latency * descent speed
};

CoilChargeReport coil_charge_time(const PowerCircuit& circuit,
                                  double irradiance_w_m2, int n_solar_cells,
                                  const actuator::CapacitorBank& bank,
                                  double descent_speed_m_s = 3.0);

// Standard-atmosphere barometric conversion.
double pressure_to_altitude(double p_pa, double p0_pa);
double altitude_to_pressure(double h_m, double p0_pa);

double link_budget(const RadioModel& radio, double distance_m);
double throughput(const RadioModel& radio, const SolarModel& solar,
                  double irradiance_w_m2, int n_solar_cells);
// Seconds of 1 Hz transmission sustained from v_store with zero input.
double packet_budget(const PowerCircuit& circuit, const RadioModel& radio,
                     double v_store);

// Simulated latency from "receiver starts duty-cycling" to "command caught in
// an open window", for a command stream at 20 ms period. Returns
// kNeverStarts when no window catches within t_max. Variance across seeds
// comes from the random command phase and receiver clock skew.
double radio_trigger_latency(const RadioModel& radio, double distance_m,
                             std::uint64_t seed, double t_max = 600.0);

}  // namespace flier::power
