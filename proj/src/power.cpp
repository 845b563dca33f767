#include "flier/power.hpp"

#include <algorithm>
#include <cmath>

#include "flier/rng.hpp"

namespace flier::power {

void SolarModel::validate() const {
    if (n_solar_cells != 2 && n_solar_cells != 4)
        throw DomainError("n_solar_cells must be 2 or 4");
    if (slope_two_cell < 0 || slope_four_cell < slope_two_cell)
        throw DomainError("4-cell slope must be >= 2-cell slope >= 0");
}

void TriggerPolicy::validate() const {
    if (timer_delay < 0) throw DomainError("timer delay must be >= 0");
    if (rx_period <= 0 || rx_window <= 0)
        throw DomainError("rx schedule must be positive");
}

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Dark: return "dark";
        case Phase::ColdStart: return "cold_start";
        case Phase::McuOn: return "mcu_on";
        case Phase::ChargingCoil: return "charging_coil";
        case Phase::Armed: return "armed";
        case Phase::Triggered: return "triggered";
    }
    return "?";
}

double harvest_current(const SolarModel& solar, double irradiance_w_m2,
                       int n_solar_cells) {
    if (irradiance_w_m2 < 0) throw DomainError("irradiance must be >= 0");
    if (n_solar_cells != 2 && n_solar_cells != 4)
        throw DomainError("n_solar_cells must be 2 or 4");
    double slope = n_solar_cells == 2 ? solar.slope_two_cell
                                      : solar.slope_four_cell;
    return std::max(0.0, slope * irradiance_w_m2 + solar.intercept);
}

namespace {

// Harvest current limited by the array's open-circuit rolloff near v_target.
double charge_current(const PowerCircuit& c, double irradiance, double v_target) {
    double i = harvest_current(c.solar, irradiance, c.solar.n_solar_cells);
    double headroom = (c.solar.open_circuit_voltage() - v_target) /
                      c.solar.source_resistance;
    return std::max(0.0, std::min(i, headroom));
}

}  // namespace

bool evaluate_trigger(const TriggerPolicy& policy,
                      const TriggerTelemetry& t) {
    policy.validate();
    switch (policy.kind) {
        case TriggerPolicy::Kind::Timer:
            return t.elapsed >= policy.timer_delay;
        case TriggerPolicy::Kind::Pressure: {
            if (t.altitudes_m.size() < 2) return false;
            double last = t.altitudes_m.back();
            double prev = t.altitudes_m[t.altitudes_m.size() - 2];
            if (last > policy.pressure_threshold_m) return false;
            if (policy.require_descending && !(last < prev)) return false;
            return true;
        }
        case TriggerPolicy::Kind::Radio: {
            double skew = 1.0 + policy.clock_skew_ppm * 1e-6;
            for (double tc : t.command_times_s) {
                if (tc > t.elapsed) continue;
                double local = tc / skew - policy.rx_phase;
                double in_period = std::fmod(local, policy.rx_period);
                if (in_period < 0) in_period += policy.rx_period;
                if (in_period < policy.rx_window) return true;
            }
            return false;
        }
    }
    return false;
}

PowerState fsm_step(const PowerCircuit& circuit, const PowerState& state,
                    double dt, double irradiance_w_m2,
                    const TriggerPolicy& policy,
                    const TriggerTelemetry& telemetry) {
    if (!(dt > 0) || dt > 1e-3 + 1e-12)
        throw DomainError("fsm_step requires 0 < dt <= 1 ms");
    PowerState s = state;
    s.elapsed += dt;

    bool mcu_alive = s.phase == Phase::McuOn || s.phase == Phase::ChargingCoil ||
                     s.phase == Phase::Armed || s.phase == Phase::Triggered;
    double load = mcu_alive ? circuit.sleep_current : circuit.cold_start_leak;

    // Harvest routing: the switch sends input power to the coil bank.
    if (s.v_switch && mcu_alive) {
        double i = charge_current(circuit, irradiance_w_m2, s.v_coil);
        s.v_coil += i / circuit.c_coil * dt;
        s.v_coil = std::min(s.v_coil, circuit.solar.open_circuit_voltage());
        s.v_store -= load / circuit.c_store * dt;
    } else {
        double i = charge_current(circuit, irradiance_w_m2, s.v_store);
        s.v_store += (i - load) / circuit.c_store * dt;
    }
    s.v_store = std::clamp(s.v_store, 0.0, circuit.v_store_full);

    // Power-loss reset dominates everything else.
    if (mcu_alive && s.v_store < circuit.v_brownout) {
        s.phase = irradiance_w_m2 > 0 ? Phase::ColdStart : Phase::Dark;
        s.v_switch = false;
        s.v_trig = false;
        return s;
    }

    switch (s.phase) {
        case Phase::Dark:
            if (irradiance_w_m2 > 0) s.phase = Phase::ColdStart;
            break;
        case Phase::ColdStart:
            if (irradiance_w_m2 <= 0 && s.v_store <= 0) {
                s.phase = Phase::Dark;
            } else if (s.v_store >= circuit.v_store_full) {
                s.phase = Phase::McuOn;
                s.cold_starts += 1;
            }
            break;
        case Phase::McuOn:
            if (s.v_store >= circuit.v_store_full - circuit.v_hysteresis) {
                s.v_switch = true;
                s.phase = Phase::ChargingCoil;
            }
            break;
        case Phase::ChargingCoil:
            if (s.v_store < circuit.v_store_full - circuit.v_hysteresis) {
                s.v_switch = false;  // top the store back up first
                s.phase = Phase::McuOn;
            } else if (s.v_coil > circuit.v_coil_fire) {
                s.phase = Phase::Armed;
                s.v_switch = false;  // bank charged; harvest returns to store
            }
            break;
        case Phase::Armed:
            if (s.v_coil <= circuit.v_coil_fire) {
                s.phase = Phase::ChargingCoil;
                s.v_switch = true;
            } else if (evaluate_trigger(policy, telemetry)) {
                s.phase = Phase::Triggered;
                s.v_trig = true;
                s.v_coil = 0.0;  // bank dumped into the coil
                s.v_switch = false;
            }
            break;
        case Phase::Triggered:
            break;
    }
    return s;
}

double cold_start_time(const PowerCircuit& circuit, double irradiance_w_m2,
                       int n_solar_cells) {
    PowerCircuit c = circuit;
    c.solar.n_solar_cells = n_solar_cells;
    double v = 0.0, t = 0.0;
    const double dt = 1e-3, t_cap = 86400.0;
    while (t < t_cap) {
        double di = charge_current(c, irradiance_w_m2, v) - c.cold_start_leak;
        if (di <= 0) return kNeverStarts;
        v += di / c.c_store * dt;
        t += dt;
        if (v >= c.v_store_full) return t;
    }
    return kNeverStarts;
}

CoilChargeReport coil_charge_time(const PowerCircuit& circuit,
                                  double irradiance_w_m2, int n_solar_cells,
                                  const actuator::CapacitorBank& bank,
                                  double descent_speed_m_s) {
    PowerCircuit c = circuit;
    c.solar.n_solar_cells = n_solar_cells;
    double cap = bank.total_capacitance();
    CoilChargeReport rep;
    if (cap <= 0) return rep;  // zero-capacitance bank charges instantly
    double v = 0.0, t = 0.0;
    const double dt = 1e-3, t_cap = 86400.0;
    while (t < t_cap) {
        double i = charge_current(c, irradiance_w_m2, v);
        if (i <= 0) {
            rep.seconds = kNeverStarts;
            rep.min_drop_altitude_m = kNeverStarts;
            return rep;
        }
        v += i / cap * dt;
        t += dt;
        if (v > c.v_coil_fire) break;
    }
    rep.seconds = t >= 86400.0 ? kNeverStarts : t;
    rep.min_drop_altitude_m = rep.seconds * descent_speed_m_s;
    return rep;
}

namespace {
// Standard atmosphere: g*M/(R*L) with L = 6.5 K/km, T0 = 288.15 K.
constexpr double kBaroExponent = 5.255787614126936;
constexpr double kT0 = 288.15;
constexpr double kLapse = 0.0065;
}  // namespace

double pressure_to_altitude(double p_pa, double p0_pa) {
    if (p_pa <= 0 || p0_pa <= 0) throw DomainError("pressure must be positive");
    return kT0 / kLapse *
           (1.0 - std::pow(p_pa / p0_pa, 1.0 / kBaroExponent));
}

double altitude_to_pressure(double h_m, double p0_pa) {
    if (p0_pa <= 0) throw DomainError("pressure must be positive");
    return p0_pa * std::pow(1.0 - kLapse * h_m / kT0, kBaroExponent);
}

double link_budget(const RadioModel& radio, double distance_m) {
    if (distance_m < 0) throw DomainError("distance must be >= 0");
    return 1.0 /
           (1.0 + std::exp((distance_m - radio.pdr_midpoint_m) /
                           radio.pdr_width_m));
}

double throughput(const RadioModel& radio, const SolarModel& solar,
                  double irradiance_w_m2, int n_solar_cells) {
    double i = harvest_current(solar, irradiance_w_m2, n_solar_cells);
    double p = i * solar.open_circuit_voltage() * 0.5;  // near max-power point
    return std::min(radio.max_rate_hz, p / radio.packet_energy);
}

double packet_budget(const PowerCircuit& circuit, const RadioModel& radio,
                     double v_store) {
    double v = std::min(v_store, circuit.v_store_full);
    double t = 0.0;
    const double dt = 1e-3;
    double next_packet = 0.0;
    while (v >= circuit.v_brownout && t < 3600.0) {
        double dq = circuit.sleep_current * dt;
        if (t >= next_packet) {
            dq += radio.packet_energy / v;  // packet energy drawn at v
            next_packet += 1.0 / radio.low_power_rate_hz;
        }
        v -= dq / circuit.c_store;
        t += dt;
    }
    return t;
}

double radio_trigger_latency(const RadioModel& radio, double distance_m,
                             std::uint64_t seed, double t_max) {
    Rng rng(seed);
    double pdr = link_budget(radio, distance_m);
    double skew = 1.0 + rng.uniform(-150.0, 150.0) * 1e-6;  // receiver clock
    const double cmd_period = 0.020;
    double phase = rng.uniform(0.0, cmd_period);
    for (int k = 0;; ++k) {
        double w0 = k * radio.rx_period * skew;  // window opens
        if (w0 > t_max) return kNeverStarts;
        double w1 = w0 + radio.rx_window;
        double tc = phase + std::ceil((w0 - phase) / cmd_period) * cmd_period;
        if (tc <= w1 && rng.bernoulli(pdr)) return tc;
    }
}

}  // namespace flier::power
