#include "flier/flight.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace flier::flight {

void DescentModel::validate() const {
    if (v_terminal_tumbling <= 0 || v_terminal_stable <= 0)
        throw DomainError("terminal velocities must be positive");
    if (vertical_relax_time <= 0)
        throw DomainError("vertical relax time must be positive");
    if (upright_prob_tumbling < 0 || upright_prob_tumbling > 1 ||
        upright_prob_stable < 0 || upright_prob_stable > 1)
        throw DomainError("upright probabilities must be in [0, 1]");
}

double WindModel::step(double speed, double dt, Rng& rng) const {
    double k = dt / reversion_time;
    double next = speed + (mean_speed - speed) * k +
                  volatility * std::sqrt(dt) * rng.normal();
    return std::max(0.0, next);
}

void step_dynamics(BodyState& state, const DescentModel& model,
                   double wind_speed, double wind_dir_rad, double dt,
                   Rng& rng) {
    state.vz += (model.terminal(state.mode) - state.vz) /
                model.vertical_relax_time * dt;
    double cpl = model.coupling(state.mode);
    double wobble_x = 0.0;
    if (state.mode == Mode::Tumbling) {
        // Short-correlation lateral fluctuation from the tumbling motion.
        double tau = 1.0 / (2.0 * kPi * model.tumble_frequency_hz);
        double k = dt / tau;
        double q = model.tumble_gust_speed * std::sqrt(2.0 * k);
        state.lateral_fluct_x += -state.lateral_fluct_x * k + q * rng.normal();
        state.lateral_fluct_y += -state.lateral_fluct_y * k + q * rng.normal();
        state.tumble_phase += 2.0 * kPi * model.tumble_frequency_hz * dt;
        wobble_x = model.cop_oscillation_range * 2.0 * kPi *
                   model.tumble_frequency_hz * std::cos(state.tumble_phase);
    } else {
        double decay = dt / model.vertical_relax_time;
        state.lateral_fluct_x *= std::max(0.0, 1.0 - decay);
        state.lateral_fluct_y *= std::max(0.0, 1.0 - decay);
    }
    state.pos.x += (cpl * wind_speed * std::cos(wind_dir_rad) +
                    state.lateral_fluct_x + wobble_x) *
                   dt;
    state.pos.y += (cpl * wind_speed * std::sin(wind_dir_rad) +
                    state.lateral_fluct_y) *
                   dt;
    state.pos.z -= state.vz * dt;
}

bool landing_orientation(Mode mode, const DescentModel& model, Rng& rng) {
    double p = mode == Mode::Tumbling ? model.upright_prob_tumbling
                                      : model.upright_prob_stable;
    return rng.bernoulli(p);
}

std::map<int, double> terminal_velocity_table() {
    return {{3, 3.05}, {4, 3.0}, {5, 3.3}, {6, 3.5}, {7, 3.7}, {8, 3.9}};
}

double terminal_velocity(int n_cells) {
    auto table = terminal_velocity_table();
    auto it = table.find(n_cells);
    if (it == table.end())
        throw DomainError("terminal velocity table covers 3..8 cells");
    return it->second;
}

namespace {

struct TransitionInfo {
    bool success = false;
};

TransitionInfo compute_transition(const DropScenario& sc) {
    TransitionInfo info;
    try {
        double required =
            origami::transition_force(sc.origami, sc.payload_mass_kg);
        auto trace = actuator::simulate_discharge(sc.actuator, sc.bank);
        auto decision = actuator::transition_check(trace, required,
                                                   sc.actuator.rod_angle_theta);
        info.success = decision.success;
    } catch (const DomainError&) {
        info.success = false;  // monostable design: nothing to transition to
    }
    return info;
}

Trajectory run_drop_impl(const DropScenario& sc, const TransitionInfo* pre) {
    sc.descent.validate();
    sc.origami.validate();
    sc.actuator.validate();
    sc.bank.validate();
    sc.policy.validate();
    if (sc.altitude_m <= 0) throw DomainError("drop altitude must be positive");
    if (sc.sample_dt <= 0) throw DomainError("sample_dt must be positive");

    Rng rng(sc.seed);
    const double dt = 1e-3;

    power::PowerState ps;
    if (sc.pre_armed) {
        ps.phase = power::Phase::Armed;
        ps.v_store = sc.circuit.v_store_full;
        ps.v_coil = sc.bank.initial_voltage;
        ps.v_switch = false;  // bank already charged; harvest feeds the store
    }

    BodyState body;
    body.pos = {0.0, 0.0, sc.altitude_m};
    body.mode = sc.initial_mode;
    body.vz = sc.descent.terminal(body.mode);

    double wind_speed = sc.wind.mean_speed;
    double wind_dir = sc.wind.direction_rad;

    power::TriggerTelemetry tel;
    double radio_fire_time = -1.0;  // resolved once the receiver is armed

    Trajectory traj;
    double t = 0.0;
    double time_tumbling = 0.0;
    double next_sample = 0.0, next_packet = 0.0, next_baro = 0.0;
    bool fired = false;
    const double t_cap = 1800.0;

    while (body.pos.z > 0.0 && t < t_cap) {
        if (t >= next_baro) {
            double p = power::altitude_to_pressure(body.pos.z, sc.p0_pa) +
                       rng.normal() * sc.sensor_noise_pa;
            tel.altitudes_m.push_back(power::pressure_to_altitude(p, sc.p0_pa));
            if (tel.altitudes_m.size() > 16)
                tel.altitudes_m.erase(tel.altitudes_m.begin());
            next_baro += 0.05;
        }
        tel.elapsed = t;

        power::TriggerPolicy epol = sc.policy;
        if (sc.policy.kind == power::TriggerPolicy::Kind::Radio) {
            if (ps.phase == power::Phase::Armed && radio_fire_time < 0.0) {
                double range = std::hypot(body.pos.x, body.pos.y, body.pos.z);
                double lat = power::radio_trigger_latency(
                    sc.radio, range, Rng::substream(sc.seed, 7).next_u64());
                radio_fire_time =
                    lat == power::kNeverStarts ? power::kNeverStarts : t + lat;
            }
            epol.kind = power::TriggerPolicy::Kind::Timer;
            epol.timer_delay =
                radio_fire_time < 0.0 ? power::kNeverStarts : radio_fire_time;
        }

        ps = power::fsm_step(sc.circuit, ps, dt, sc.irradiance_w_m2, epol, tel);

        if (ps.v_trig && !fired) {
            fired = true;
            TransitionInfo info = pre ? *pre : compute_transition(sc);
            if (info.success && body.mode == Mode::Tumbling) {
                body.mode = Mode::Stable;
                traj.outcome = DropOutcome::Transitioned;
                traj.transition_time = t;
            }
        }

        wind_speed = sc.wind.step(wind_speed, dt, rng);
        step_dynamics(body, sc.descent, wind_speed, wind_dir, dt, rng);
        body.pos.z = std::max(0.0, body.pos.z);  // stop at ground level
        if (body.mode == Mode::Tumbling) {
            time_tumbling += dt;
            traj.flips += 40.0 / sc.origami.n_cells * dt;
        }

        if (t >= next_sample) {
            traj.samples.push_back({t, body.pos, body.mode, ps.phase});
            next_sample += sc.sample_dt;
        }
        bool mcu_alive = ps.phase != power::Phase::Dark &&
                         ps.phase != power::Phase::ColdStart;
        if (mcu_alive && t >= next_packet) {
            TelemetryPacket pkt;
            pkt.t = t;
            pkt.altitude_m =
                tel.altitudes_m.empty() ? body.pos.z : tel.altitudes_m.back();
            pkt.temperature_c = 15.0 - 0.0065 * body.pos.z;
            double range = std::hypot(body.pos.x, body.pos.y, body.pos.z);
            pkt.delivered = rng.bernoulli(power::link_budget(sc.radio, range));
            traj.packets.push_back(pkt);
            next_packet += 1.0 / sc.radio.low_power_rate_hz;
        }
        t += dt;
    }

    body.pos.z = std::max(0.0, body.pos.z);
    traj.samples.push_back({t, body.pos, body.mode, ps.phase});
    traj.airborne_time = t;
    traj.landing_distance = std::hypot(body.pos.x, body.pos.y);
    traj.fraction_time_tumbling = t > 0 ? time_tumbling / t : 1.0;
    traj.landed_upright = landing_orientation(body.mode, sc.descent, rng);
    return traj;
}

}  // namespace

Trajectory run_drop(const DropScenario& scenario) {
    return run_drop_impl(scenario, nullptr);
}

DispersalStats monte_carlo(const DropScenario& scenario, int n_trials,
                           std::uint64_t seed, int n_threads) {
    if (n_trials <= 0) throw DomainError("n_trials must be positive");
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min<int>(n_threads, n_trials);

    TransitionInfo shared = compute_transition(scenario);

    struct TrialResult {
        double distance = 0.0;
        double frac_tumbling = 0.0;
        bool upright = false;
        double x = 0.0, y = 0.0;
    };
    std::vector<TrialResult> results(n_trials);

    auto worker = [&](int start) {
        for (int trial = start; trial < n_trials; trial += n_threads) {
            DropScenario sc = scenario;
            sc.seed = Rng::substream(seed, static_cast<std::uint64_t>(trial))
                          .next_u64();
            Trajectory tr = run_drop_impl(sc, &shared);
            auto& out = results[trial];
            out.distance = tr.landing_distance;
            out.frac_tumbling = tr.fraction_time_tumbling;
            out.upright = tr.landed_upright;
            const auto& last = tr.samples.back();
            out.x = last.pos.x;
            out.y = last.pos.y;
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker, i);
        for (auto& th : pool) th.join();
    }

    DispersalStats stats;
    stats.distances_m.reserve(n_trials);
    int upright_count = 0;
    for (const auto& r : results) {
        stats.distances_m.push_back(r.distance);
        stats.fraction_tumbling.push_back(r.frac_tumbling);
        stats.upright.push_back(r.upright);
        stats.landing_xy.emplace_back(r.x, r.y);
        stats.mean_distance += r.distance;
        stats.max_distance = std::max(stats.max_distance, r.distance);
        if (r.upright) ++upright_count;
    }
    stats.mean_distance /= n_trials;
    stats.upright_fraction = static_cast<double>(upright_count) / n_trials;
    std::vector<double> sorted = stats.distances_m;
    std::sort(sorted.begin(), sorted.end());
    stats.median_distance =
        n_trials % 2 == 1
            ? sorted[n_trials / 2]
            : 0.5 * (sorted[n_trials / 2 - 1] + sorted[n_trials / 2]);
    return stats;
}

}  // namespace flier::flight
