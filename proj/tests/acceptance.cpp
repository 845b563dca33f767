// Acceptance harness: one PASS/FAIL line per release criterion.
//
// Each criterion is self-contained and prints exactly one line; the process
// exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "flier/design.hpp"
#include "flier/flight.hpp"
#include "flier/origami.hpp"
#include "flier/power.hpp"
#include "flier/rng.hpp"
#include "flier/scenario.hpp"
#include "oracle_kinematics.hpp"

using namespace flier;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

void report(int idx, const std::string& name, bool ok, double elapsed,
            const std::string& detail) {
    std::printf("[%d/9] %s %s (%.1f s%s%s)\n", idx, ok ? "PASS" : "FAIL",
                name.c_str(), elapsed, detail.empty() ? "" : "; ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

// --- 1: the normalized snap-through barrier grows with cell count ----------

void criterion_barrier_monotone() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream detail;
    double prev = 0.0;
    auto grid = origami::default_psi_grid();
    for (int n = 3; n <= 8; ++n) {
        auto spec = origami::make_uniform_spec(n);
        auto land = origami::energy_landscape(spec, grid);
        double barrier =
            land.barrier_energy / spec.param(origami::CreaseClass::Main).stiffness;
        ok = ok && land.bistable && barrier > prev;
        detail << (n > 3 ? " " : "") << barrier;
        prev = barrier;
    }
    double elapsed = seconds_since(t0);
    ok = ok && elapsed < 10.0;
    report(1, "normalized barrier strictly increases for 3..8 cells", ok,
           elapsed, detail.str());
}

// --- 2: reduced solver agrees with the position-space reference ------------

double max_edge_error_rel(const origami::FlatPattern& pat,
                          const std::vector<Vec3>& pos, double scale) {
    double worst = 0.0;
    for (const auto& f : pat.faces) {
        for (int e = 0; e < 3; ++e) {
            int a = f[e], b = f[(e + 1) % 3];
            double flat = std::hypot(pat.vertices[a].x - pat.vertices[b].x,
                                     pat.vertices[a].y - pat.vertices[b].y);
            double now = (pos[a] - pos[b]).norm();
            worst = std::max(worst, std::abs(now - flat) / scale);
        }
    }
    return worst;
}

void criterion_solver_vs_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    auto spec = origami::make_uniform_spec(4);
    auto pat = origami::build_leafout(spec);
    auto grid = origami::default_psi_grid();

    double worst_angle = 0.0, worst_edge = 0.0;
    int checked = 0;
    bool converged = true;

    // Continuation from flat outward, one branch at a time.
    for (int branch = 0; branch < 2; ++branch) {
        oracle::LeafoutOracle orc(spec);
        std::vector<double> side;
        for (double psi : grid) {
            if (branch == 0 && psi >= 0.0) side.push_back(psi);
            if (branch == 1 && psi < 0.0) side.push_back(psi);
        }
        if (branch == 0)
            std::sort(side.begin(), side.end());
        else
            std::sort(side.begin(), side.end(), std::greater<>());

        for (double psi : side) {
            auto lib = origami::solve_fold_state(pat, spec, psi);
            worst_edge = std::max(
                worst_edge,
                max_edge_error_rel(pat, lib.positions, spec.length));

            auto ref = orc.solve(psi);
            converged = converged && ref.converged;
            oracle::OracleState lib_state;
            lib_state.positions = lib.positions;
            auto rho_lib = orc.fold_angles(lib_state);
            auto rho_ref = orc.fold_angles(ref);
            oracle::OracleState flipped = ref;
            for (auto& p : flipped.positions) p.y = -p.y;
            auto rho_flip = orc.fold_angles(flipped);

            double direct = 0.0, mirror = 0.0;
            for (std::size_t j = 0; j < rho_lib.size(); ++j) {
                direct = std::max(direct, std::abs(rho_lib[j] - rho_ref[j]));
                mirror = std::max(mirror, std::abs(rho_lib[j] - rho_flip[j]));
            }
            worst_angle = std::max(worst_angle, std::min(direct, mirror));
            ++checked;
        }
    }

    bool ok = converged && checked == 161 && worst_angle <= 1e-6 &&
              worst_edge <= 1e-9;
    std::ostringstream detail;
    detail << "max angle err " << worst_angle << " rad, max edge err "
           << worst_edge;
    report(2, "fold solver matches the reference least-squares solution", ok,
           seconds_since(t0), detail.str());
}

// --- 3: transition-force anchors -------------------------------------------

void criterion_force_anchors() {
    auto t0 = std::chrono::steady_clock::now();
    auto bare = design::make_origami_spec(4, design::FilmSpec{},
                                          design::CutPattern{});
    double f_bare = origami::transition_force(bare);
    design::RootStructure root;
    root.enabled = true;
    auto rooted = design::make_origami_spec(4, design::FilmSpec{},
                                            design::CutPattern{}, root);
    double f_root = origami::transition_force(rooted);

    bool ok = std::abs(f_bare - 6.5e-3) <= 0.15 * 6.5e-3 &&
              std::abs(f_root - 34e-3) <= 0.20 * 34e-3;
    std::ostringstream detail;
    detail << "bare " << f_bare * 1e3 << " mN, rooted " << f_root * 1e3
           << " mN";
    report(3, "transition force hits the bare and rooted anchors", ok,
           seconds_since(t0), detail.str());
}

// --- 4: actuator stroke -----------------------------------------------------

void criterion_actuator() {
    auto t0 = std::chrono::steady_clock::now();
    actuator::ActuatorSpec spec;
    actuator::CapacitorBank bank;
    auto trace = actuator::simulate_discharge(spec, bank);
    auto decision =
        actuator::transition_check(trace, 34e-3, spec.rod_angle_theta);

    bool ok = std::abs(trace.peak_force - 0.250) <= 0.10 * 0.250 &&
              trace.time_to_peak <= 25e-3 &&
              trace.energy_balance_error <= 0.01 && decision.margin >= 6.0;
    std::ostringstream detail;
    detail << "peak " << trace.peak_force * 1e3 << " mN at "
           << trace.time_to_peak * 1e3 << " ms, balance err "
           << trace.energy_balance_error << ", margin " << decision.margin;
    report(4, "actuator delivers the calibrated impulse with margin", ok,
           seconds_since(t0), detail.str());
}

// --- 5: harvesting state machine safety ------------------------------------

void criterion_fsm_safety() {
    auto t0 = std::chrono::steady_clock::now();
    power::PowerCircuit circuit;
    bool ok = true;

    // Randomized irradiance profiles with ascending altitude telemetry: the
    // store must stay in regulation and the pressure trigger must hold fire.
    Rng rng(99);
    for (int profile = 0; profile < 1000 && ok; ++profile) {
        power::PowerState s;
        s.v_store = rng.uniform(0.0, circuit.v_store_full);
        if (rng.bernoulli(0.3)) {
            s.phase = power::Phase::Armed;
            s.v_coil = 5.5;
        }
        power::TriggerPolicy policy;
        policy.kind = power::TriggerPolicy::Kind::Pressure;
        power::TriggerTelemetry tel;
        double altitude = rng.uniform(0.0, 3.0);  // below the trigger floor
        double irr = rng.uniform(0.0, 1500.0);
        for (int k = 0; k < 20000; ++k) {
            if (k % 400 == 0) irr = rng.uniform(0.0, 1500.0);
            altitude += 1e-3;  // ascending: must never fire
            if (k % 50 == 0) {
                tel.altitudes_m.push_back(altitude);
                if (tel.altitudes_m.size() > 16)
                    tel.altitudes_m.erase(tel.altitudes_m.begin());
            }
            tel.elapsed = s.elapsed;
            s = power::fsm_step(circuit, s, 1e-3, irr, policy, tel);
            if (s.v_store > circuit.v_store_max || s.v_trig) {
                ok = false;
                break;
            }
        }
    }

    // Three day/night square-wave cycles: exactly one cold start per day.
    power::PowerState s;
    power::TriggerPolicy hold;
    hold.timer_delay = 1e9;
    power::TriggerTelemetry tel;
    for (int half = 0; half < 6; ++half) {
        double irr = half % 2 == 0 ? 800.0 : 0.0;
        for (int k = 0; k < 12 * 3600 * 1000; ++k) {
            tel.elapsed = s.elapsed;
            s = power::fsm_step(circuit, s, 1e-3, irr, hold, tel);
            if (s.v_store > circuit.v_store_max) ok = false;
        }
    }
    ok = ok && s.cold_starts == 3;

    double elapsed = seconds_since(t0);
    ok = ok && elapsed < 60.0;
    std::ostringstream detail;
    detail << "cold starts over 3 days: " << s.cold_starts;
    report(5, "power FSM stays safe on random light and daily cycles", ok,
           elapsed, detail.str());
}

// --- 6: telemetry endurance and range ---------------------------------------

void criterion_telemetry_budget() {
    auto t0 = std::chrono::steady_clock::now();
    power::PowerCircuit circuit;
    power::RadioModel radio;
    double endurance =
        power::packet_budget(circuit, radio, circuit.v_store_full);
    double pdr60 = power::link_budget(radio, 60.0);
    bool ok = endurance >= 60.0 && pdr60 >= 0.9;
    std::ostringstream detail;
    detail << "endurance " << endurance << " s, pdr(60 m) " << pdr60;
    report(6, "full store sustains the beacon and the 60 m link", ok,
           seconds_since(t0), detail.str());
}

// --- 7: dispersal behavior ---------------------------------------------------

void criterion_dispersal() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream detail;

    scenario::Scenario base;
    flight::DropScenario drop = base.make_drop();

    // Paired mode comparison from 20 m in the same wind field.
    flight::DropScenario tumble = drop;
    tumble.altitude_m = 20.0;
    tumble.pre_armed = false;
    tumble.policy.kind = power::TriggerPolicy::Kind::Timer;
    tumble.policy.timer_delay = 1e9;
    tumble.irradiance_w_m2 = 0.0;
    tumble.initial_mode = flight::Mode::Tumbling;
    flight::DropScenario stable = tumble;
    stable.initial_mode = flight::Mode::Stable;

    auto stats_t = flight::monte_carlo(tumble, 200, 31, 8);
    auto stats_s = flight::monte_carlo(stable, 200, 31, 8);
    double ratio = stats_t.mean_distance / stats_s.mean_distance;
    ok = ok && ratio >= 2.0 && ratio <= 4.0;
    detail << "mode ratio " << ratio;

    // Median landing distance grows with the tumbling fraction of the fall.
    double fall_time = 40.0 / 3.0;
    double prev_median = -1.0;
    detail << ", medians";
    for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        flight::DropScenario sc = drop;
        sc.altitude_m = 40.0;
        sc.pre_armed = true;
        sc.policy.kind = power::TriggerPolicy::Kind::Timer;
        sc.policy.timer_delay = frac >= 1.0 ? 1e9 : frac * fall_time;
        auto stats = flight::monte_carlo(sc, 100, 17, 8);
        ok = ok && stats.median_distance >= prev_median;
        detail << " " << stats.median_distance;
        prev_median = stats.median_distance;
    }

    // The stock mission profile from 40 m stays aloft about 15 seconds.
    flight::Trajectory tr = flight::run_drop(drop);
    ok = ok && std::abs(tr.airborne_time - 15.0) <= 3.0;
    detail << ", airborne " << tr.airborne_time << " s";

    double elapsed = seconds_since(t0);
    ok = ok && elapsed < 120.0;
    report(7, "dispersal scales with mode and tumbling fraction", ok, elapsed,
           detail.str());
}

// --- 8: landing orientation statistics --------------------------------------

void criterion_landing_orientation() {
    auto t0 = std::chrono::steady_clock::now();
    flight::DescentModel model;
    Rng rng(2718);
    int up_t = 0, up_s = 0;
    const int n = 10000;
    for (int k = 0; k < n; ++k) {
        if (flight::landing_orientation(flight::Mode::Tumbling, model, rng))
            ++up_t;
        if (flight::landing_orientation(flight::Mode::Stable, model, rng))
            ++up_s;
    }
    double p_t = up_t / double(n), p_s = up_s / double(n);
    bool ok = std::abs(p_t - 0.52) <= 0.02 && std::abs(p_s - 0.87) <= 0.02;
    std::ostringstream detail;
    detail << "tumbling " << p_t << ", stable " << p_s;
    report(8, "landing orientation rates match the calibrated odds", ok,
           seconds_since(t0), detail.str());
}

// --- 9: output determinism across thread counts ------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_thread_determinism() {
    auto t0 = std::chrono::steady_clock::now();
    namespace fs = std::filesystem;
    fs::path root = fs::temp_directory_path() / "microflier-acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    bool ok = true;
    std::string detail;
    fs::path dirs[2] = {root / "t1", root / "t8"};
    int threads[2] = {1, 8};
    for (int i = 0; i < 2; ++i) {
        std::string cmd = std::string(MICROFLIER_CLI_PATH) +
                          " disperse --seed 5 --threads " +
                          std::to_string(threads[i]) + " --out " +
                          dirs[i].string() + " > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) ok = false;
    }
    if (ok) {
        bool same_csv =
            slurp(dirs[0] / "dispersal.csv") == slurp(dirs[1] / "dispersal.csv");
        bool same_map = slurp(dirs[0] / "landing_map.json") ==
                        slurp(dirs[1] / "landing_map.json");
        ok = same_csv && same_map;
        detail = same_csv && same_map ? "byte-identical" : "outputs differ";
    } else {
        detail = "CLI run failed";
    }
    report(9, "identical seed gives identical bytes at any thread count", ok,
           seconds_since(t0), detail);
}

}  // namespace

int main() {
    criterion_barrier_monotone();
    criterion_solver_vs_oracle();
    criterion_force_anchors();
    criterion_actuator();
    criterion_fsm_safety();
    criterion_telemetry_budget();
    criterion_dispersal();
    criterion_landing_orientation();
    criterion_thread_determinism();
    if (g_failures > 0) {
        std::printf("%d of 9 criteria failed\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
