#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "flier/actuator.hpp"

using namespace flier;
using namespace flier::actuator;

TEST_CASE("coil force is the product of field, current, and wire length") {
    double l = kPi * 2.1e-3;  // one-turn circumference
    CHECK(lorentz_force(0.1, 2.0, l, 90) ==
          doctest::Approx(0.118752202).epsilon(1e-9));
    CHECK(lorentz_force(0.0, 2.0, l, 90) == 0.0);
    CHECK(lorentz_force(0.1, 0.0, l, 90) == 0.0);
    // Reversing the current reverses the force.
    CHECK(lorentz_force(0.1, -2.0, l, 90) ==
          doctest::Approx(-0.118752202).epsilon(1e-9));
    // Linear in every factor.
    CHECK(lorentz_force(0.2, 2.0, l, 90) ==
          doctest::Approx(2.0 * 0.118752202).epsilon(1e-9));
}

TEST_CASE("radial field is antisymmetric, centered, and linear in remanence") {
    ActuatorSpec spec;
    CHECK(std::abs(radial_field(spec, 0.0)) < 1e-12);
    // Positive below the coil center: a seated magnet gets pushed upward.
    double b = radial_field(spec, -1.0e-3);
    CHECK(b > 0.0);
    CHECK(radial_field(spec, 1.0e-3) == doctest::Approx(-b).epsilon(1e-12));

    // Find the peak over the travel range; far away the dipole field decays
    // to under 1% of it.
    double peak = 0.0;
    for (double x = 0; x <= 10e-3; x += 0.05e-3)
        peak = std::max(peak, std::abs(radial_field(spec, x)));
    CHECK(peak > 0.0);
    CHECK(std::abs(radial_field(spec, 50e-3)) < 0.01 * peak);

    ActuatorSpec weak = spec;
    weak.magnet.remanence = 0.5 * spec.magnet.remanence;
    CHECK(radial_field(weak, -1.0e-3) ==
          doctest::Approx(0.5 * b).epsilon(1e-12));
}

TEST_CASE("magnet attraction follows the inverse-quartic dipole law") {
    MagnetSpec magnet;  // 1 mm x 2 mm N52 default
    CHECK(magnet_attraction(4.0e-3, magnet) ==
          doctest::Approx(7.699584961e-3).epsilon(1e-9));
    CHECK(magnet_attraction(8.0e-3, magnet) ==
          doctest::Approx(4.812240601e-4).epsilon(1e-9));
    // Doubling the gap divides the force by 16.
    CHECK(magnet_attraction(4.0e-3, magnet) /
              magnet_attraction(8.0e-3, magnet) ==
          doctest::Approx(16.0).epsilon(1e-12));
    CHECK_THROWS_AS(magnet_attraction(0.0, magnet), DomainError);
    CHECK_THROWS_AS(magnet_attraction(-1e-3, magnet), DomainError);
}

TEST_CASE("discharge meets the peak-force, latency, and energy-balance marks") {
    ActuatorSpec spec;
    CapacitorBank bank;  // 2 x 220 uF at 5.5 V
    DischargeTrace trace = simulate_discharge(spec, bank);

    CHECK(trace.peak_force > 0.250 * 0.90);
    CHECK(trace.peak_force < 0.250 * 1.10);
    CHECK(trace.time_to_peak <= 25e-3);
    CHECK(trace.energy_balance_error <= 0.01);
    CHECK(trace.reached_top);

    // The capacitor only ever discharges into the coil.
    for (std::size_t i = 1; i < trace.v_cap.size(); ++i)
        CHECK(trace.v_cap[i] <= trace.v_cap[i - 1] + 1e-12);
    // The magnet never moves backwards past its seat.
    for (double x : trace.x_magnet) CHECK(x >= -1e-12);
}

TEST_CASE("discharge edge cases and parameter sensitivities") {
    ActuatorSpec spec;
    CapacitorBank bank;

    // No stored energy: the magnet stays seated behind its detent.
    CapacitorBank empty = bank;
    empty.initial_voltage = 0.0;
    DischargeTrace dead = simulate_discharge(spec, empty);
    CHECK(!dead.reached_top);
    for (double x : dead.x_magnet) CHECK(x == 0.0);

    DischargeTrace base = simulate_discharge(spec, bank);

    // Extra series resistance throttles the current and the peak force.
    CapacitorBank lossy = bank;
    lossy.esr = 2.0 * bank.esr;
    DischargeTrace damped = simulate_discharge(spec, lossy);
    CHECK(damped.peak_force < base.peak_force);

    // Halving the step changes the peak by well under 0.5% (converged dt).
    DischargeTrace fine = simulate_discharge(spec, bank, 0.05, 0.5e-6);
    CHECK(std::abs(fine.peak_force - base.peak_force) / base.peak_force <
          0.005);

    // Peak force grows monotonically with the charge voltage.
    double prev = 0.0;
    for (double v : {2.0, 3.0, 4.0, 5.0, 5.5, 6.0}) {
        CapacitorBank b = bank;
        b.initial_voltage = v;
        double peak = simulate_discharge(spec, b).peak_force;
        CHECK(peak >= prev);
        prev = peak;
    }

    CHECK_THROWS_AS(simulate_discharge(spec, bank, 0.05, 20e-6), DomainError);
}

TEST_CASE("rod geometry projects the stroke force onto the fold axis") {
    ActuatorSpec spec;
    CapacitorBank bank;
    DischargeTrace trace = simulate_discharge(spec, bank);

    TransitionDecision d =
        transition_check(trace, 34e-3, spec.rod_angle_theta);
    CHECK(d.success);
    CHECK(d.margin >= 6.0);
    CHECK(d.peak_force_z ==
          doctest::Approx(trace.peak_force * std::cos(spec.rod_angle_theta))
              .epsilon(1e-12));

    // Steeper rods deliver less vertical force.
    TransitionDecision steep = transition_check(trace, 34e-3, deg2rad(60.0));
    CHECK(steep.peak_force_z < d.peak_force_z);
    CHECK(steep.margin < d.margin);

    // Zero required force is reported as success with a sentinel margin.
    TransitionDecision free = transition_check(trace, 0.0, deg2rad(30.0));
    CHECK(free.success);
    CHECK(free.margin == kInfiniteMargin);

    CHECK_THROWS_AS(transition_check(trace, 34e-3, 0.0), DomainError);
    CHECK_THROWS_AS(transition_check(trace, 34e-3, kPi / 2), DomainError);
    CHECK_THROWS_AS(transition_check(trace, -1.0, deg2rad(30.0)), DomainError);
}
