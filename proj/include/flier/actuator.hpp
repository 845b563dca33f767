#pragma once

#include <vector>

#include "flier/common.hpp"

namespace flier::actuator {

struct MagnetSpec {
    double diameter = 1.0e-3;   // m
    double height = 2.0e-3;     // m
    double remanence = 1.45;    // T (N52)
    double mass = 11.8e-6;      // kg (sintered NdFeB density ~7500 kg/m^3)

    double volume() const;
    double dipole_moment() const;  // A*m^2, from remanence and volume
};

struct ActuatorSpec {
    int n_turns = 90;                  // 30 x 3 array winding
    double coil_diameter = 2.1e-3;     // m
    double coil_length = 2.1e-3;       // m
    double coil_resistance = 2.032;    // ohm (0.08 mm wire, 0.594 m length)
    double coil_inductance = 16.8e-6;  // H (solenoid estimate)
    MagnetSpec magnet;
    double second_magnet_gap = 8.0e-3;  // m, initial center-to-center gap
    double tube_length = 10.5e-3;       // m
    double rod_angle_theta = deg2rad(30.0);
    int rod_count = 4;
    double friction_coefficient = 0.01;  // N*s/m, viscous
    // Retention-seat breakaway force: the magnet stays put until the net
    // upward force exceeds this (the idle attraction toward the top magnet
    // slightly exceeds the magnet's weight, so a detent is required).
    double breakaway_force = 1.0e-3;  // N
    // Dipole-field calibration factor (fitted once to the peak-force anchor).
    double field_scale = 2.769;
    // Coil center sits this far above the magnet's start position.
    double coil_offset = 1.26e-3;  // m

    double wire_length() const { return n_turns * kPi * coil_diameter; }
    // Travel until the moving magnet contacts the top magnet / tube top.
    double travel_limit() const;
    void validate() const;
};

struct CapacitorBank {
    double capacitance = 220e-6;   // F per unit
    double esr = 0.4;              // ohm per unit
    double initial_voltage = 5.5;  // V
    int parallel_count = 2;

    double total_capacitance() const { return capacitance * parallel_count; }
    double total_esr() const { return esr / parallel_count; }
    void validate() const;
};

struct DischargeTrace {
    double dt = 0.0;
    std::vector<double> t;          // s
    std::vector<double> v_cap;      // V
    std::vector<double> i_coil;     // A
    std::vector<double> x_magnet;   // m (displacement from start)
    std::vector<double> f_lorentz;  // N
    std::vector<double> f_attract;  // N
    double peak_force = 0.0;        // max of f_lorentz + f_attract
    double time_to_peak = 0.0;      // s
    double energy_balance_error = 0.0;  // relative
    bool reached_top = false;
    double stop_time = 0.0;
};

// F = B_radial * I * l_coil * n_turns with l_coil the one-turn circumference,
// so l_coil * n_turns is the total wire length in the field.
double lorentz_force(double b_radial, double i_coil, double l_coil,
                     int n_turns);

// Radial dipole field at the winding radius, averaged along the coil length.
// x is the magnet center position relative to the coil center; antisymmetric
// in x and oriented so a magnet below center is pushed up by positive current.
double radial_field(const ActuatorSpec& spec, double x);

// Coaxial dipole-dipole attraction, gap measured center-to-center.
double magnet_attraction(double gap, const MagnetSpec& magnet);

DischargeTrace simulate_discharge(const ActuatorSpec& spec,
                                  const CapacitorBank& bank,
                                  double t_max = 0.05, double dt = 1e-6);

struct TransitionDecision {
    bool success = false;
    double margin = 0.0;        // peak F_z / required force
    double peak_force_z = 0.0;  // N delivered vertically at the structure
};

// Margin sentinel when required_force is zero.
inline constexpr double kInfiniteMargin = 1e300;

// Vertical force delivered through the angled rods: F_z = F_axial * cos(theta).
TransitionDecision transition_check(const DischargeTrace& trace,
                                    double required_force, double theta);

}  // namespace flier::actuator
