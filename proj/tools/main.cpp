#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "flier/io.hpp"
#include "flier/scenario.hpp"

namespace {

using flier::io::fmt;
using flier::io::fmt_g;
using flier::io::Table;
namespace fl = flier;

struct RunContext {
    fl::scenario::Scenario sc;
    std::uint64_t config_hash = 0;
    std::string out_dir = ".";
    std::string meta;
};

int effective_threads(const RunContext& ctx) {
    if (ctx.sc.threads > 0) return ctx.sc.threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void cmd_energy(const RunContext& ctx) {
    auto spec = ctx.sc.make_origami();
    auto land = fl::origami::energy_landscape(spec,
                                              fl::origami::default_psi_grid());
    Table t;
    t.columns = {"psi_deg", "energy_J", "energy_normalized"};
    for (std::size_t i = 0; i < land.psi_grid.size(); ++i) {
        t.add_row({fmt(fl::rad2deg(land.psi_grid[i]), 4),
                   fmt_g(land.energy[i]), fmt_g(land.energy_normalized[i])});
    }
    t.write(ctx.out_dir, "energy_landscape", ctx.sc.format, ctx.meta);
    std::cout << "bistable: " << (land.bistable ? "yes" : "no") << "\n";
    if (land.bistable) {
        std::cout << "barrier_psi_deg: " << fmt(fl::rad2deg(land.barrier_psi), 4)
                  << "\nbarrier_energy_J: " << fmt_g(land.barrier_energy)
                  << "\n";
        for (const auto& [psi, e] : land.minima)
            std::cout << "minimum: psi_deg " << fmt(fl::rad2deg(psi), 4)
                      << " energy_J " << fmt_g(e) << "\n";
    }
}

void cmd_pattern(const RunContext& ctx) {
    auto spec = ctx.sc.make_origami();
    auto pattern = fl::origami::build_leafout(spec);
    std::string svg =
        fl::design::export_cut_pattern(pattern, ctx.sc.cut, ctx.meta);
    fl::io::write_file(fl::io::join_path(ctx.out_dir, "cut_pattern.svg"), svg);

    std::vector<fl::design::FilmSpec> films;
    for (double t_um : {12.5, 25.0, 50.0}) {
        fl::design::FilmSpec f = ctx.sc.film;
        f.thickness = t_um * 1e-6;
        films.push_back(f);
    }
    std::vector<fl::design::CutPattern> cuts;
    for (double frac : {0.0, 0.26, 0.5}) {
        fl::design::CutPattern c = ctx.sc.cut;
        c.cut_fraction = {frac, 0.0, frac, frac};
        cuts.push_back(c);
    }
    auto rows = fl::design::force_table(films, cuts, ctx.sc.n_cells, true,
                                        ctx.sc.stiffness_scale);
    Table t;
    t.columns = {"thickness_um", "cut_pct", "root", "force_mN"};
    for (const auto& r : rows) {
        t.add_row({fmt(r.thickness * 1e6, 1), fmt(r.cut_main * 100.0, 1),
                   r.root ? "1" : "0",
                   r.ok ? fmt(r.force_n * 1e3, 4) : "nan"});
    }
    t.write(ctx.out_dir, "force_table", ctx.sc.format, ctx.meta);
}

void cmd_actuate(const RunContext& ctx) {
    auto trace = fl::actuator::simulate_discharge(ctx.sc.actuator, ctx.sc.bank);
    Table t;
    t.columns = {"t_us", "v_cap_V", "i_A", "x_mm", "f_mN"};
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        t.add_row({fmt(trace.t[i] * 1e6, 1), fmt(trace.v_cap[i], 6),
                   fmt(trace.i_coil[i], 6), fmt(trace.x_magnet[i] * 1e3, 6),
                   fmt((trace.f_lorentz[i] + trace.f_attract[i]) * 1e3, 6)});
    }
    t.write(ctx.out_dir, "discharge", ctx.sc.format, ctx.meta);
    std::cout << "peak_force_mN: " << fmt(trace.peak_force * 1e3, 3)
              << "\ntime_to_peak_ms: " << fmt(trace.time_to_peak * 1e3, 3)
              << "\nreached_top: " << (trace.reached_top ? "yes" : "no")
              << "\n";
}

void cmd_power(const RunContext& ctx) {
    const auto& sc = ctx.sc;
    fl::Rng rng(sc.seed);
    fl::power::PowerState ps;
    fl::power::TriggerTelemetry tel;
    // Bench altitude is fixed; give the pressure policy a constant history.
    tel.altitudes_m = {0.0, 0.0};
    double pdr = fl::power::link_budget(sc.radio, sc.power_range_m);
    const double dt = 1e-3;
    double t = 0.0, next_record = 0.0, next_packet = 0.0;
    long sent = 0, delivered = 0;
    Table table;
    table.columns = {"t_s",       "v_store_V",    "v_coil_V",
                     "phase",     "altitude_m",   "packets_sent",
                     "packets_delivered"};
    while (t <= sc.power_duration_s + 1e-9) {
        if (t >= next_record - 1e-9) {
            table.add_row({fmt(t, 3), fmt(ps.v_store, 6), fmt(ps.v_coil, 6),
                           fl::power::phase_name(ps.phase), fmt(0.0, 2),
                           std::to_string(sent), std::to_string(delivered)});
            next_record += sc.power_record_dt_s;
        }
        tel.elapsed = t;
        ps = fl::power::fsm_step(sc.circuit, ps, dt, sc.irradiance_w_m2,
                                 sc.policy, tel);
        bool mcu_alive = ps.phase != fl::power::Phase::Dark &&
                         ps.phase != fl::power::Phase::ColdStart;
        if (mcu_alive && t >= next_packet) {
            ++sent;
            if (rng.bernoulli(pdr)) ++delivered;
            next_packet += 1.0 / sc.radio.low_power_rate_hz;
        }
        t += dt;
    }
    table.write(ctx.out_dir, "telemetry", sc.format, ctx.meta);
    std::cout << "final_phase: " << fl::power::phase_name(ps.phase)
              << "\ncold_starts: " << ps.cold_starts << "\npackets_sent: "
              << sent << "\npackets_delivered: " << delivered << "\n";
}

void cmd_mission(const RunContext& ctx) {
    auto drop = ctx.sc.make_drop();
    auto traj = fl::flight::run_drop(drop);
    Table t;
    t.columns = {"t_s", "x_m", "y_m", "z_m", "mode", "phase"};
    for (const auto& s : traj.samples) {
        t.add_row({fmt(s.t, 3), fmt(s.pos.x, 6), fmt(s.pos.y, 6),
                   fmt(s.pos.z, 6),
                   s.mode == fl::flight::Mode::Tumbling ? "tumbling" : "stable",
                   fl::power::phase_name(s.phase)});
    }
    t.write(ctx.out_dir, "trajectory", ctx.sc.format, ctx.meta);

    Table tm;
    tm.columns = {"t_s", "altitude_m", "temperature_c", "delivered"};
    for (const auto& p : traj.packets) {
        tm.add_row({fmt(p.t, 3), fmt(p.altitude_m, 4),
                    fmt(p.temperature_c, 4), p.delivered ? "1" : "0"});
    }
    tm.write(ctx.out_dir, "telemetry", ctx.sc.format, ctx.meta);

    std::cout << "outcome: "
              << (traj.outcome == fl::flight::DropOutcome::Transitioned
                      ? "transitioned"
                      : "no-transition")
              << "\nairborne_s: " << fmt(traj.airborne_time, 3)
              << "\nlanding_distance_m: " << fmt(traj.landing_distance, 3)
              << "\nfraction_time_tumbling: "
              << fmt(traj.fraction_time_tumbling, 4)
              << "\nlanded_upright: " << (traj.landed_upright ? "1" : "0")
              << "\n";
}

void cmd_disperse(const RunContext& ctx) {
    auto drop = ctx.sc.make_drop();
    auto stats = fl::flight::monte_carlo(drop, ctx.sc.n_trials, ctx.sc.seed,
                                         effective_threads(ctx));
    Table t;
    t.columns = {"trial", "distance_m", "frac_tumbling", "upright"};
    for (std::size_t i = 0; i < stats.distances_m.size(); ++i) {
        t.add_row({std::to_string(i), fmt(stats.distances_m[i], 4),
                   fmt(stats.fraction_tumbling[i], 4),
                   stats.upright[i] ? "1" : "0"});
    }
    t.write(ctx.out_dir, "dispersal", ctx.sc.format, ctx.meta);

    nlohmann::ordered_json map;
    map["meta"] = ctx.meta;
    map["drop_point"] = {0.0, 0.0};
    map["mean_distance_m"] = stats.mean_distance;
    map["median_distance_m"] = stats.median_distance;
    map["max_distance_m"] = stats.max_distance;
    map["upright_fraction"] = stats.upright_fraction;
    auto landings = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < stats.landing_xy.size(); ++i) {
        landings.push_back({{"x_m", stats.landing_xy[i].first},
                            {"y_m", stats.landing_xy[i].second},
                            {"upright", static_cast<bool>(stats.upright[i])}});
    }
    map["landings"] = std::move(landings);
    fl::io::write_file(fl::io::join_path(ctx.out_dir, "landing_map.json"),
                       map.dump(2) + "\n");

    std::cout << "trials: " << stats.distances_m.size()
              << "\nmean_distance_m: " << fmt(stats.mean_distance, 4)
              << "\nmedian_distance_m: " << fmt(stats.median_distance, 4)
              << "\nmax_distance_m: " << fmt(stats.max_distance, 4)
              << "\nupright_fraction: " << fmt(stats.upright_fraction, 4)
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Origami microflier simulation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = ".", format;
    std::uint64_t seed = 0;
    int threads = -1;
    bool seed_set = false;
    app.add_option("--config", config_path, "Scenario configuration (JSON)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Random seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--threads", threads, "Worker thread count (0 = all cores)");
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* c_energy = app.add_subcommand("energy", "Fold-energy landscape");
    auto* c_pattern = app.add_subcommand("pattern", "Cut pattern + force table");
    auto* c_actuate = app.add_subcommand("actuate", "Actuator discharge trace");
    auto* c_power = app.add_subcommand("power", "Harvesting FSM timeline");
    auto* c_mission = app.add_subcommand("mission", "Single instrumented drop");
    auto* c_disperse = app.add_subcommand("disperse", "Monte Carlo dispersal");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        RunContext ctx;
        auto loaded = fl::scenario::load_scenario_file(config_path);
        ctx.sc = loaded.scenario;
        ctx.config_hash = loaded.config_hash;
        ctx.out_dir = out_dir;
        if (seed_set) ctx.sc.seed = seed;
        if (threads >= 0) ctx.sc.threads = threads;
        if (!format.empty()) ctx.sc.format = format;
        ctx.meta = fl::io::meta_line(ctx.sc.seed, ctx.config_hash);

        if (c_energy->parsed()) cmd_energy(ctx);
        if (c_pattern->parsed()) cmd_pattern(ctx);
        if (c_actuate->parsed()) cmd_actuate(ctx);
        if (c_power->parsed()) cmd_power(ctx);
        if (c_mission->parsed()) cmd_mission(ctx);
        if (c_disperse->parsed()) cmd_disperse(ctx);
        return 0;
    } catch (const fl::scenario::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
