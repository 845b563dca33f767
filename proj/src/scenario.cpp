#include "flier/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace flier::scenario {

using json = nlohmann::ordered_json;

namespace {

// View over one JSON object that type-checks fields and rejects unknown keys
// with their full path.
class Section {
  public:
    Section(json j, std::string path)
        : j_(std::move(j)), path_(std::move(path)) {
        if (!j_.is_object())
            throw ConfigError("config error at " + path_ +
                              ": expected an object");
    }

    double num(const char* key, double def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_number())
            throw ConfigError("config error at " + path_ + "." + key +
                              ": expected a number");
        return v->get<double>();
    }

    int integer(const char* key, int def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_number_integer())
            throw ConfigError("config error at " + path_ + "." + key +
                              ": expected an integer");
        return v->get<int>();
    }

    std::uint64_t u64(const char* key, std::uint64_t def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_number_unsigned() && !v->is_number_integer())
            throw ConfigError("config error at " + path_ + "." + key +
                              ": expected a non-negative integer");
        if (v->is_number_integer() && v->get<std::int64_t>() < 0)
            throw ConfigError("config error at " + path_ + "." + key +
                              ": expected a non-negative integer");
        return v->get<std::uint64_t>();
    }

    bool boolean(const char* key, bool def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_boolean())
            throw ConfigError("config error at " + path_ + "." + key +
                              ": expected a boolean");
        return v->get<bool>();
    }

    std::string str(const char* key, const std::string& def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_string())
            throw ConfigError("config error at " + path_ + "." + key +
                              ": expected a string");
        return v->get<std::string>();
    }

    // Nested object section; absent key yields an empty object.
    json sub(const char* key) {
        const json* v = find(key);
        if (!v) return json::object();
        if (!v->is_object())
            throw ConfigError("config error at " + path_ + "." + key +
                              ": expected an object");
        return *v;
    }

    // Reject keys that no field consumed (catches typos).
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key()))
                throw ConfigError("config error at " + path_ + "." +
                                  it.key() + ": unknown field");
        }
    }

  private:
    const json* find(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    json j_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace

Scenario load_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    Scenario s;
    Section top(doc, "config");

    {
        Section o(top.sub("origami"), "origami");
        s.n_cells = o.integer("n_cells", s.n_cells);
        s.length = o.num("length_m", s.length);
        s.tip_fraction = o.num("tip_fraction", s.tip_fraction);
        s.rest_psi = deg2rad(o.num("rest_psi_deg", rad2deg(s.rest_psi)));
        s.stiffness_scale = o.num("stiffness_scale", s.stiffness_scale);
        o.finish();
    }
    {
        Section f(top.sub("film"), "film");
        s.film.thickness = f.num("thickness_um", s.film.thickness * 1e6) * 1e-6;
        s.film.youngs_modulus =
            f.num("youngs_modulus_pa", s.film.youngs_modulus);
        s.film.name = f.str("name", s.film.name);
        f.finish();
    }
    {
        Section c(top.sub("cut"), "cut");
        auto frac = [&](const char* key, origami::CreaseClass cls) {
            int i = static_cast<int>(cls);
            s.cut.cut_fraction[i] = c.num(key, s.cut.cut_fraction[i]);
        };
        frac("main", origami::CreaseClass::Main);
        frac("boundary", origami::CreaseClass::Boundary);
        frac("sub", origami::CreaseClass::Sub);
        frac("tip", origami::CreaseClass::Tip);
        s.cut.hole_pitch = c.num("hole_pitch_mm", s.cut.hole_pitch * 1e3) * 1e-3;
        s.cut.hole_width = c.num("hole_width_mm", s.cut.hole_width * 1e3) * 1e-3;
        c.finish();
    }
    {
        Section r(top.sub("root"), "root");
        s.root.enabled = r.boolean("enabled", s.root.enabled);
        s.root.stiffness_multiplier =
            r.num("stiffness_multiplier", s.root.stiffness_multiplier);
        r.finish();
    }
    {
        Section a(top.sub("actuator"), "actuator");
        auto& sp = s.actuator;
        sp.n_turns = a.integer("n_turns", sp.n_turns);
        sp.coil_diameter = a.num("coil_diameter_mm", sp.coil_diameter * 1e3) * 1e-3;
        sp.coil_length = a.num("coil_length_mm", sp.coil_length * 1e3) * 1e-3;
        sp.coil_resistance = a.num("coil_resistance_ohm", sp.coil_resistance);
        sp.coil_inductance =
            a.num("coil_inductance_uh", sp.coil_inductance * 1e6) * 1e-6;
        sp.magnet.diameter =
            a.num("magnet_diameter_mm", sp.magnet.diameter * 1e3) * 1e-3;
        sp.magnet.height =
            a.num("magnet_height_mm", sp.magnet.height * 1e3) * 1e-3;
        sp.magnet.remanence = a.num("remanence_t", sp.magnet.remanence);
        sp.magnet.mass = a.num("magnet_mass_mg", sp.magnet.mass * 1e6) * 1e-6;
        sp.second_magnet_gap =
            a.num("second_magnet_gap_mm", sp.second_magnet_gap * 1e3) * 1e-3;
        sp.tube_length = a.num("tube_length_mm", sp.tube_length * 1e3) * 1e-3;
        sp.rod_angle_theta =
            deg2rad(a.num("rod_angle_deg", rad2deg(sp.rod_angle_theta)));
        sp.rod_count = a.integer("rod_count", sp.rod_count);
        sp.friction_coefficient =
            a.num("friction_ns_m", sp.friction_coefficient);
        sp.breakaway_force =
            a.num("breakaway_force_mn", sp.breakaway_force * 1e3) * 1e-3;
        sp.field_scale = a.num("field_scale", sp.field_scale);
        sp.coil_offset = a.num("coil_offset_mm", sp.coil_offset * 1e3) * 1e-3;
        a.finish();
    }
    {
        Section b(top.sub("bank"), "bank");
        s.bank.capacitance =
            b.num("capacitance_uf", s.bank.capacitance * 1e6) * 1e-6;
        s.bank.esr = b.num("esr_ohm", s.bank.esr);
        s.bank.initial_voltage = b.num("initial_voltage_v", s.bank.initial_voltage);
        s.bank.parallel_count = b.integer("parallel_count", s.bank.parallel_count);
        b.finish();
    }
    {
        Section p(top.sub("power"), "power");
        s.irradiance_w_m2 = p.num("irradiance_w_m2", s.irradiance_w_m2);
        s.circuit.solar.n_solar_cells =
            p.integer("n_solar_cells", s.circuit.solar.n_solar_cells);
        s.power_duration_s = p.num("duration_s", s.power_duration_s);
        s.power_record_dt_s = p.num("record_dt_s", s.power_record_dt_s);
        s.power_range_m = p.num("range_m", s.power_range_m);
        p.finish();
    }
    {
        Section p(top.sub("policy"), "policy");
        std::string def_kind =
            s.policy.kind == power::TriggerPolicy::Kind::Timer
                ? "timer"
                : s.policy.kind == power::TriggerPolicy::Kind::Pressure
                      ? "pressure"
                      : "radio";
        std::string kind = p.str("kind", def_kind);
        if (kind == "timer") {
            s.policy.kind = power::TriggerPolicy::Kind::Timer;
        } else if (kind == "pressure") {
            s.policy.kind = power::TriggerPolicy::Kind::Pressure;
        } else if (kind == "radio") {
            s.policy.kind = power::TriggerPolicy::Kind::Radio;
        } else {
            throw ConfigError(
                "config error at policy.kind: expected timer|pressure|radio");
        }
        s.policy.timer_delay = p.num("timer_delay_s", s.policy.timer_delay);
        s.policy.pressure_threshold_m =
            p.num("pressure_threshold_m", s.policy.pressure_threshold_m);
        s.policy.require_descending =
            p.boolean("require_descending", s.policy.require_descending);
        s.policy.rx_period = p.num("rx_period_s", s.policy.rx_period);
        s.policy.rx_window = p.num("rx_window_s", s.policy.rx_window);
        p.finish();
    }
    {
        Section r(top.sub("radio"), "radio");
        s.radio.pdr_midpoint_m = r.num("pdr_midpoint_m", s.radio.pdr_midpoint_m);
        s.radio.pdr_width_m = r.num("pdr_width_m", s.radio.pdr_width_m);
        s.radio.max_rate_hz = r.num("max_rate_hz", s.radio.max_rate_hz);
        s.radio.low_power_rate_hz =
            r.num("low_power_rate_hz", s.radio.low_power_rate_hz);
        s.radio.packet_energy =
            r.num("packet_energy_uj", s.radio.packet_energy * 1e6) * 1e-6;
        r.finish();
    }
    // Tumbling terminal velocity defaults to the per-cell-count table entry.
    if (s.n_cells >= 3 && s.n_cells <= 8)
        s.descent.v_terminal_tumbling = flight::terminal_velocity(s.n_cells);
    {
        Section f(top.sub("flight"), "flight");
        s.altitude_m = f.num("altitude_m", s.altitude_m);
        s.n_trials = f.integer("n_trials", s.n_trials);
        s.payload_mass_kg =
            f.num("payload_mass_g", s.payload_mass_kg * 1e3) * 1e-3;
        s.pre_armed = f.boolean("pre_armed", s.pre_armed);
        std::string mode = f.str(
            "initial_mode",
            s.initial_mode == flight::Mode::Tumbling ? "tumbling" : "stable");
        if (mode == "tumbling") {
            s.initial_mode = flight::Mode::Tumbling;
        } else if (mode == "stable") {
            s.initial_mode = flight::Mode::Stable;
        } else {
            throw ConfigError(
                "config error at flight.initial_mode: expected tumbling|stable");
        }
        s.sensor_noise_pa = f.num("sensor_noise_pa", s.sensor_noise_pa);
        s.p0_pa = f.num("p0_pa", s.p0_pa);
        s.descent.v_terminal_tumbling =
            f.num("v_terminal_tumbling", s.descent.v_terminal_tumbling);
        s.descent.v_terminal_stable =
            f.num("v_terminal_stable", s.descent.v_terminal_stable);
        s.descent.lateral_coupling_tumbling = f.num(
            "lateral_coupling_tumbling", s.descent.lateral_coupling_tumbling);
        s.descent.lateral_coupling_stable = f.num(
            "lateral_coupling_stable", s.descent.lateral_coupling_stable);
        f.finish();
    }
    {
        Section w(top.sub("wind"), "wind");
        s.wind.mean_speed = w.num("mean_speed_m_s", s.wind.mean_speed);
        s.wind.reversion_time = w.num("reversion_time_s", s.wind.reversion_time);
        s.wind.volatility = w.num("volatility", s.wind.volatility);
        s.wind.direction_rad =
            deg2rad(w.num("direction_deg", rad2deg(s.wind.direction_rad)));
        w.finish();
    }
    s.seed = top.u64("seed", s.seed);
    s.threads = top.integer("threads", s.threads);
    s.format = top.str("format", s.format);
    top.finish();

    s.validate();
    return s;
}

void Scenario::validate() const {
    auto check = [](const char* where, auto&& fn) {
        try {
            fn();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("config error at ") + where + ": " +
                              e.what());
        }
    };
    check("origami", [&] { make_origami().validate(); });
    check("film", [&] { film.validate(); });
    check("cut", [&] { cut.validate(); });
    check("root", [&] { root.validate(); });
    check("actuator", [&] { actuator.validate(); });
    check("bank", [&] { bank.validate(); });
    check("power", [&] { circuit.solar.validate(); });
    check("policy", [&] { policy.validate(); });
    check("flight", [&] { descent.validate(); });
    if (irradiance_w_m2 < 0)
        throw ConfigError(
            "config error at power.irradiance_w_m2: must be >= 0");
    if (power_duration_s <= 0 || power_record_dt_s <= 0)
        throw ConfigError("config error at power.duration_s: must be > 0");
    if (altitude_m <= 0)
        throw ConfigError("config error at flight.altitude_m: must be > 0");
    if (n_trials < 1)
        throw ConfigError("config error at flight.n_trials: must be >= 1");
    if (threads < 0)
        throw ConfigError("config error at threads: must be >= 0");
    if (format != "csv" && format != "json")
        throw ConfigError("config error at format: expected csv|json");
}

origami::OrigamiSpec Scenario::make_origami() const {
    return design::make_origami_spec(n_cells, film, cut, root, rest_psi,
                                     length, tip_fraction, stiffness_scale);
}

flight::DropScenario Scenario::make_drop() const {
    flight::DropScenario d;
    d.altitude_m = altitude_m;
    d.origami = make_origami();
    d.actuator = actuator;
    d.bank = bank;
    d.circuit = circuit;
    d.policy = policy;
    d.radio = radio;
    d.descent = descent;
    d.wind = wind;
    d.irradiance_w_m2 = irradiance_w_m2;
    d.payload_mass_kg = payload_mass_kg;
    d.sensor_noise_pa = sensor_noise_pa;
    d.p0_pa = p0_pa;
    d.seed = seed;
    d.initial_mode = initial_mode;
    d.pre_armed = pre_armed;
    return d;
}

std::string dump_scenario(const Scenario& s) {
    json doc;
    doc["origami"] = {{"n_cells", s.n_cells},
                      {"length_m", s.length},
                      {"tip_fraction", s.tip_fraction},
                      {"rest_psi_deg", rad2deg(s.rest_psi)},
                      {"stiffness_scale", s.stiffness_scale}};
    doc["film"] = {{"thickness_um", s.film.thickness * 1e6},
                   {"youngs_modulus_pa", s.film.youngs_modulus},
                   {"name", s.film.name}};
    doc["cut"] = {{"main", s.cut.cut_fraction[0]},
                  {"boundary", s.cut.cut_fraction[1]},
                  {"sub", s.cut.cut_fraction[2]},
                  {"tip", s.cut.cut_fraction[3]},
                  {"hole_pitch_mm", s.cut.hole_pitch * 1e3},
                  {"hole_width_mm", s.cut.hole_width * 1e3}};
    doc["root"] = {{"enabled", s.root.enabled},
                   {"stiffness_multiplier", s.root.stiffness_multiplier}};
    doc["actuator"] = {
        {"n_turns", s.actuator.n_turns},
        {"coil_diameter_mm", s.actuator.coil_diameter * 1e3},
        {"coil_length_mm", s.actuator.coil_length * 1e3},
        {"coil_resistance_ohm", s.actuator.coil_resistance},
        {"coil_inductance_uh", s.actuator.coil_inductance * 1e6},
        {"magnet_diameter_mm", s.actuator.magnet.diameter * 1e3},
        {"magnet_height_mm", s.actuator.magnet.height * 1e3},
        {"remanence_t", s.actuator.magnet.remanence},
        {"magnet_mass_mg", s.actuator.magnet.mass * 1e6},
        {"second_magnet_gap_mm", s.actuator.second_magnet_gap * 1e3},
        {"tube_length_mm", s.actuator.tube_length * 1e3},
        {"rod_angle_deg", rad2deg(s.actuator.rod_angle_theta)},
        {"rod_count", s.actuator.rod_count},
        {"friction_ns_m", s.actuator.friction_coefficient},
        {"breakaway_force_mn", s.actuator.breakaway_force * 1e3},
        {"field_scale", s.actuator.field_scale},
        {"coil_offset_mm", s.actuator.coil_offset * 1e3}};
    doc["bank"] = {{"capacitance_uf", s.bank.capacitance * 1e6},
                   {"esr_ohm", s.bank.esr},
                   {"initial_voltage_v", s.bank.initial_voltage},
                   {"parallel_count", s.bank.parallel_count}};
    doc["power"] = {{"irradiance_w_m2", s.irradiance_w_m2},
                    {"n_solar_cells", s.circuit.solar.n_solar_cells},
                    {"duration_s", s.power_duration_s},
                    {"record_dt_s", s.power_record_dt_s},
                    {"range_m", s.power_range_m}};
    const char* kind = s.policy.kind == power::TriggerPolicy::Kind::Timer
                           ? "timer"
                           : s.policy.kind == power::TriggerPolicy::Kind::Pressure
                                 ? "pressure"
                                 : "radio";
    doc["policy"] = {{"kind", kind},
                     {"timer_delay_s", s.policy.timer_delay},
                     {"pressure_threshold_m", s.policy.pressure_threshold_m},
                     {"require_descending", s.policy.require_descending},
                     {"rx_period_s", s.policy.rx_period},
                     {"rx_window_s", s.policy.rx_window}};
    doc["radio"] = {{"pdr_midpoint_m", s.radio.pdr_midpoint_m},
                    {"pdr_width_m", s.radio.pdr_width_m},
                    {"max_rate_hz", s.radio.max_rate_hz},
                    {"low_power_rate_hz", s.radio.low_power_rate_hz},
                    {"packet_energy_uj", s.radio.packet_energy * 1e6}};
    doc["flight"] = {
        {"altitude_m", s.altitude_m},
        {"n_trials", s.n_trials},
        {"payload_mass_g", s.payload_mass_kg * 1e3},
        {"pre_armed", s.pre_armed},
        {"initial_mode",
         s.initial_mode == flight::Mode::Tumbling ? "tumbling" : "stable"},
        {"sensor_noise_pa", s.sensor_noise_pa},
        {"p0_pa", s.p0_pa},
        {"v_terminal_tumbling", s.descent.v_terminal_tumbling},
        {"v_terminal_stable", s.descent.v_terminal_stable},
        {"lateral_coupling_tumbling", s.descent.lateral_coupling_tumbling},
        {"lateral_coupling_stable", s.descent.lateral_coupling_stable}};
    doc["wind"] = {{"mean_speed_m_s", s.wind.mean_speed},
                   {"reversion_time_s", s.wind.reversion_time},
                   {"volatility", s.wind.volatility},
                   {"direction_deg", rad2deg(s.wind.direction_rad)}};
    doc["seed"] = s.seed;
    doc["threads"] = s.threads;
    doc["format"] = s.format;
    return doc.dump(2) + "\n";
}

LoadedScenario load_scenario_file(const std::string& path) {
    LoadedScenario out;
    std::string text;
    if (path.empty()) {
        text = dump_scenario(Scenario{});
        out.scenario = load_scenario(text);
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("config error: cannot open '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
        out.scenario = load_scenario(text);
    }
    out.config_hash = fnv1a64(text.data(), text.size());
    return out;
}

}  // namespace flier::scenario
