#include "flier/actuator.hpp"

#include <algorithm>
#include <cmath>

namespace flier::actuator {

double MagnetSpec::volume() const {
    double r = diameter / 2.0;
    return kPi * r * r * height;
}

double MagnetSpec::dipole_moment() const { return remanence * volume() / kMu0; }

double ActuatorSpec::travel_limit() const {
    return std::min(second_magnet_gap - magnet.height,
                    tube_length - magnet.height);
}

void ActuatorSpec::validate() const {
    if (n_turns <= 0 || coil_diameter <= 0 || coil_length <= 0 ||
        coil_resistance <= 0 || coil_inductance <= 0 ||
        magnet.diameter <= 0 || magnet.height <= 0 || magnet.mass <= 0 ||
        second_magnet_gap <= 0 || tube_length <= 0)
        throw DomainError("actuator dimensions must be positive");
    if (!(rod_angle_theta > 0 && rod_angle_theta < kPi / 2))
        throw DomainError("rod angle must be in (0, pi/2)");
    if (travel_limit() <= 0) throw DomainError("no magnet travel available");
}

void CapacitorBank::validate() const {
    if (!(capacitance > 0)) throw DomainError("capacitance must be positive");
    if (esr < 0) throw DomainError("ESR must be non-negative");
    if (initial_voltage < 0) throw DomainError("voltage must be non-negative");
    if (parallel_count < 1) throw DomainError("parallel_count must be >= 1");
}

double lorentz_force(double b_radial, double i_coil, double l_coil,
                     int n_turns) {
    return b_radial * i_coil * l_coil * n_turns;
}

double radial_field(const ActuatorSpec& spec, double x) {
    double rc = spec.coil_diameter / 2.0;
    double m = spec.magnet.dipole_moment();
    const int kStations = 7;
    double total = 0.0;
    for (int k = 0; k < kStations; ++k) {
        double z0 = -spec.coil_length / 2.0 +
                    spec.coil_length * k / (kStations - 1);
        double z = x - z0;
        double r = std::hypot(rc, z);
        total += kMu0 * m / (4.0 * kPi) * 3.0 * z * rc / std::pow(r, 5);
    }
    // Orientation: magnet below the coil center is pushed upward for i > 0.
    return -spec.field_scale * total / kStations;
}

double magnet_attraction(double gap, const MagnetSpec& magnet) {
    if (gap <= 0) throw DomainError("magnet gap must be positive");
    double m = magnet.dipole_moment();
    return 3.0 * kMu0 * m * m / (2.0 * kPi * gap * gap * gap * gap);
}

namespace {

// Potential of the dipole attraction: work released moving from gap g0 to g.
double attraction_work(const MagnetSpec& magnet, double g0, double g) {
    double m = magnet.dipole_moment();
    double a = 3.0 * kMu0 * m * m / (2.0 * kPi);
    return a / 3.0 * (1.0 / (g * g * g) - 1.0 / (g0 * g0 * g0));
}

struct State {
    double v_cap, i, x, v;
};

}  // namespace

DischargeTrace simulate_discharge(const ActuatorSpec& spec,
                                  const CapacitorBank& bank, double t_max,
                                  double dt) {
    spec.validate();
    bank.validate();
    if (dt > 10e-6) throw DomainError("dt must be <= 10 us");
    if (t_max < 0.05) throw DomainError("t_max must be >= 50 ms");

    double c = bank.total_capacitance();
    double r_tot = bank.total_esr() + spec.coil_resistance;
    double l = spec.coil_inductance;
    double lw = spec.wire_length();
    double mass = spec.magnet.mass;
    double fr = spec.friction_coefficient;
    double x_max = spec.travel_limit();
    double gap0 = spec.second_magnet_gap;

    DischargeTrace tr;
    tr.dt = dt;
    bool stopped = false;
    bool released = false;
    double diss = 0.0, fric_work = 0.0, stop_loss = 0.0;
    double t = 0.0;
    State s{bank.initial_voltage, 0.0, 0.0, 0.0};

    auto deriv = [&](const State& q) {
        State d;
        double b = radial_field(spec, q.x - spec.coil_offset);
        double emf = b * lw * q.v;
        d.v_cap = -q.i / c;
        d.i = (q.v_cap - q.i * r_tot - emf) / l;
        // Ideal series diode: current cannot reverse.
        if (q.i <= 0.0 && d.i < 0.0) {
            d.i = 0.0;
            d.v_cap = 0.0;
        }
        double fl = b * lw * q.i;
        double fa = magnet_attraction(gap0 - q.x, spec.magnet);
        bool held = stopped || !released;
        d.x = held ? 0.0 : q.v;
        d.v = held ? 0.0 : (fl + fa - mass * kGravity - fr * q.v) / mass;
        return d;
    };

    int steps = static_cast<int>(t_max / dt);
    tr.t.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        double b = radial_field(spec, s.x - spec.coil_offset);
        double fl = b * lw * s.i;
        double fa = magnet_attraction(gap0 - s.x, spec.magnet);
        tr.t.push_back(t);
        tr.v_cap.push_back(s.v_cap);
        tr.i_coil.push_back(s.i);
        tr.x_magnet.push_back(s.x);
        tr.f_lorentz.push_back(fl);
        tr.f_attract.push_back(fa);
        double f_tot = fl + fa;
        if (!released && f_tot - mass * kGravity > spec.breakaway_force)
            released = true;
        if (f_tot > tr.peak_force) {
            tr.peak_force = f_tot;
            tr.time_to_peak = t;
        }
        if (k == steps) break;

        State d1 = deriv(s);
        State s2{s.v_cap + 0.5 * dt * d1.v_cap, s.i + 0.5 * dt * d1.i,
                 s.x + 0.5 * dt * d1.x, s.v + 0.5 * dt * d1.v};
        State d2 = deriv(s2);
        State s3{s.v_cap + 0.5 * dt * d2.v_cap, s.i + 0.5 * dt * d2.i,
                 s.x + 0.5 * dt * d2.x, s.v + 0.5 * dt * d2.v};
        State d3 = deriv(s3);
        State s4{s.v_cap + dt * d3.v_cap, s.i + dt * d3.i, s.x + dt * d3.x,
                 s.v + dt * d3.v};
        State d4 = deriv(s4);
        State ns{
            s.v_cap + dt / 6.0 * (d1.v_cap + 2 * d2.v_cap + 2 * d3.v_cap + d4.v_cap),
            s.i + dt / 6.0 * (d1.i + 2 * d2.i + 2 * d3.i + d4.i),
            s.x + dt / 6.0 * (d1.x + 2 * d2.x + 2 * d3.x + d4.x),
            s.v + dt / 6.0 * (d1.v + 2 * d2.v + 2 * d3.v + d4.v)};
        if (ns.i < 0.0) ns.i = 0.0;

        diss += s.i * s.i * r_tot * dt;
        fric_work += fr * s.v * s.v * dt;

        if (!stopped && ns.x >= x_max) {
            // Inelastic stop at the tube top: bisect the step boundary so the
            // position lands exactly on the travel limit.
            double lo = 0.0, hi = dt;
            State best = ns;
            for (int it = 0; it < 40; ++it) {
                double mid = 0.5 * (lo + hi);
                State sm{s.v_cap + mid * d1.v_cap, s.i + mid * d1.i,
                         s.x + mid * d1.x, s.v + mid * d1.v};
                if (sm.x >= x_max) {
                    hi = mid;
                    best = sm;
                } else {
                    lo = mid;
                }
            }
            ns = best;
            ns.x = x_max;
            stop_loss += 0.5 * mass * ns.v * ns.v;
            ns.v = 0.0;
            stopped = true;
            tr.reached_top = true;
            tr.stop_time = t + hi;
        }
        s = ns;
        t += dt;
    }

    double e_in = 0.5 * c * (bank.initial_voltage * bank.initial_voltage -
                             s.v_cap * s.v_cap) +
                  attraction_work(spec.magnet, gap0, gap0 - s.x);
    double e_out = diss + fric_work + 0.5 * mass * s.v * s.v +
                   mass * kGravity * s.x + stop_loss + 0.5 * l * s.i * s.i;
    tr.energy_balance_error = std::abs(e_in - e_out) / std::max(e_in, 1e-12);
    if (tr.energy_balance_error > 0.01)
        throw IntegratorError("discharge energy balance violated (step too large?)");
    return tr;
}

TransitionDecision transition_check(const DischargeTrace& trace,
                                    double required_force, double theta) {
    if (!(theta > 0 && theta < kPi / 2))
        throw DomainError("rod angle must be in (0, pi/2)");
    if (required_force < 0) throw DomainError("required force must be >= 0");
    TransitionDecision d;
    d.peak_force_z = trace.peak_force * std::cos(theta);
    if (required_force == 0.0) {
        d.success = true;
        d.margin = kInfiniteMargin;
        return d;
    }
    d.margin = d.peak_force_z / required_force;
    d.success = d.peak_force_z >= required_force;
    return d;
}

}  // namespace flier::actuator
