#include "tripod/config.hpp"

#include "tripod/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace tripod {

namespace {

struct KeyInfo
{
    std::string key;
    bool required;
    std::string help;
};

const std::vector<KeyInfo>& key_table()
{
    static const std::vector<KeyInfo> table = [] {
        std::vector<KeyInfo> t = {
            {"gamma_ab", true, "decay rate a->b [Gamma]"},
            {"gamma_ac", true, "decay rate a->c [Gamma]"},
            {"gamma_ad", true, "decay rate a->d [Gamma]"},
            {"delta1", true, "one-photon detuning of field 1 [Gamma]"},
            {"delta2", true, "one-photon detuning of field 2 [Gamma]"},
            {"delta3", true, "one-photon detuning of field 3 [Gamma]"},
            {"alpha", true, "coupling kappa^2 L / (c Gamma), e.g. 4000"},
        };
        auto pulse = [&](const std::string& p, bool required, const std::string& what) {
            t.push_back({p + ".kind", required,
                         what + ": sine-square | tanh-switch | rectangular | zero"});
            t.push_back({p + ".amplitude", required, what + " peak [Gamma]"});
            t.push_back({p + ".t_start", required, what + " start or switch-on [1/Gamma]"});
            t.push_back({p + ".t_end", required, what + " end or switch-off [1/Gamma]"});
            t.push_back({p + ".rise", false, what + " tanh rise time [1/Gamma], default 1"});
            t.push_back({p + ".phase", false, what + " constant phase [rad], default 0"});
        };
        pulse("signal", true, "signal at xi = 0");
        pulse("control2", true, "control 2 writing window");
        pulse("control3", true, "control 3 writing window");
        pulse("control2.release", false, "control 2 release window (optional)");
        pulse("control3.release", false, "control 3 release window (optional)");
        t.push_back({"grid.n_xi", true, "spatial points on [0, L]"});
        t.push_back({"grid.d_tau", true, "time step [1/Gamma]"});
        t.push_back({"grid.t_final", true, "end time [1/Gamma]"});
        t.push_back({"magnetic.b_tesla", false, "magnetic induction [T]"});
        t.push_back({"magnetic.t_start_us", false, "magnetic stage start [us]"});
        t.push_back({"magnetic.duration_us", false, "magnetic stage length [us]"});
        t.push_back({"magnetic.b_au", false, "magnetic induction [atomic units]"});
        t.push_back({"magnetic.t_start", false, "magnetic stage start [1/Gamma]"});
        t.push_back({"magnetic.duration", false, "magnetic stage length [1/Gamma]"});
        for (const char* level : {"a", "b", "c", "d"}) {
            const std::string p = std::string("zeeman.") + level;
            t.push_back({p + ".f", false, "F of level " + std::string(level) + " (87Rb default)"});
            t.push_back({p + ".m", false, "M of level " + std::string(level) + " (87Rb default)"});
            t.push_back({p + ".g", false, "g_F of level " + std::string(level) + " (87Rb default)"});
        }
        t.push_back({"gamma_mhz", false, "Gamma / 2pi [MHz], default 2.632 (4e-10 a.u.)"});
        t.push_back({"gamma_rad_s", false, "Gamma [rad/s], alternative to gamma_mhz"});
        t.push_back({"sample_length_cm", false, "sample length L [cm], default 1"});
        t.push_back({"density_cm3", false, "atom density [cm^-3], metadata only"});
        t.push_back({"output.snapshot_interval", false, "snapshot spacing [1/Gamma], 0 = none"});
        t.push_back({"output.snapshot_start", false, "first periodic snapshot [1/Gamma]"});
        t.push_back({"output.snapshot_end", false, "last periodic snapshot [1/Gamma], < 0 = t_final"});
        t.push_back({"output.snapshot_times", false, "extra snapshot times, comma separated"});
        return t;
    }();
    return table;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry
{
    std::string value;
    int line;
};

class Reader
{
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    double number(const std::string& key) const
    {
        const Entry& e = entries_.at(key);
        double v = 0.0;
        const char* begin = e.value.data();
        const char* end = begin + e.value.size();
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc{} || ptr != end)
            throw ConfigError("line " + std::to_string(e.line) + ": malformed number for '" + key +
                                  "': '" + e.value + "'",
                              key, e.line);
        return v;
    }

    double number_or(const std::string& key, double fallback) const
    {
        return has(key) ? number(key) : fallback;
    }

    int integer(const std::string& key) const
    {
        const Entry& e = entries_.at(key);
        int v = 0;
        const char* begin = e.value.data();
        const char* end = begin + e.value.size();
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc{} || ptr != end)
            throw ConfigError("line " + std::to_string(e.line) + ": malformed integer for '" +
                                  key + "': '" + e.value + "'",
                              key, e.line);
        return v;
    }

    const Entry& entry(const std::string& key) const { return entries_.at(key); }

    std::vector<double> list(const std::string& key) const
    {
        std::vector<double> out;
        const Entry& e = entries_.at(key);
        std::string_view rest = e.value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
                throw ConfigError("line " + std::to_string(e.line) + ": malformed list for '" +
                                      key + "': '" + e.value + "'",
                                  key, e.line);
            out.push_back(v);
            if (comma == std::string_view::npos)
                break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }

private:
    std::map<std::string, Entry> entries_;
};

PulseShape read_pulse(const Reader& r, const std::string& prefix)
{
    PulseShape p;
    const Entry& kind = r.entry(prefix + ".kind");
    try {
        p.kind = parse_pulse_kind(kind.value);
    } catch (const ScenarioError& e) {
        throw ConfigError("line " + std::to_string(kind.line) + ": " + e.what(), prefix + ".kind",
                          kind.line);
    }
    p.amplitude = r.number(prefix + ".amplitude");
    p.t_start = r.number(prefix + ".t_start");
    p.t_end = r.number(prefix + ".t_end");
    p.rise = r.number_or(prefix + ".rise", p.rise);
    p.phase = r.number_or(prefix + ".phase", p.phase);
    return p;
}

void require_group(const Reader& r, const std::vector<std::string>& keys, const std::string& what)
{
    std::vector<std::string> missing;
    for (const auto& k : keys)
        if (!r.has(k))
            missing.push_back(k);
    if (missing.empty())
        return;
    std::string msg = what + " is incomplete; missing:";
    for (const auto& k : missing)
        msg += " " + k;
    throw ConfigError(msg, missing.front());
}

bool any_of_keys(const Reader& r, const std::vector<std::string>& keys)
{
    return std::any_of(keys.begin(), keys.end(), [&](const std::string& k) { return r.has(k); });
}

std::vector<std::string> pulse_keys(const std::string& prefix)
{
    return {prefix + ".kind", prefix + ".amplitude", prefix + ".t_start", prefix + ".t_end"};
}

} // namespace

std::string format_number(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{})
        throw std::runtime_error("format_number: conversion failed");
    return std::string(buf, ptr);
}

Scenario parse_config(std::string_view text)
{
    std::map<std::string, Entry> entries;
    std::map<std::string, bool> known;
    for (const auto& k : key_table())
        known[k.key] = k.required;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", {},
                              line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!known.count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'",
                              key, line_no);
        if (entries.count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'",
                              key, line_no);
        if (value.empty() && key != "output.snapshot_times")
            throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key +
                                  "'",
                              key, line_no);
        entries[key] = Entry{value, line_no};
    }

    std::vector<std::string> missing;
    for (const auto& k : key_table())
        if (k.required && !entries.count(k.key))
            missing.push_back(k.key);
    if (!missing.empty()) {
        std::string msg = "missing required keys:";
        for (const auto& k : missing)
            msg += " " + k;
        throw ConfigError(msg, missing.front());
    }

    const Reader r(std::move(entries));
    Scenario s;
    AtomicSystem& sys = s.system;
    sys.gamma_ab = r.number("gamma_ab");
    sys.gamma_ac = r.number("gamma_ac");
    sys.gamma_ad = r.number("gamma_ad");
    sys.delta1 = r.number("delta1");
    sys.delta2 = r.number("delta2");
    sys.delta3 = r.number("delta3");
    sys.density_note = r.number_or("density_cm3", sys.density_note);
    static constexpr const char* level_names[] = {"a", "b", "c", "d"};
    for (int i = 0; i < 4; ++i) {
        const std::string p = std::string("zeeman.") + level_names[i];
        sys.zeeman[i].f_quantum = r.number_or(p + ".f", sys.zeeman[i].f_quantum);
        sys.zeeman[i].m_quantum = r.number_or(p + ".m", sys.zeeman[i].m_quantum);
        sys.zeeman[i].g_factor = r.number_or(p + ".g", sys.zeeman[i].g_factor);
    }

    if (r.has("gamma_mhz") && r.has("gamma_rad_s"))
        throw ConfigError("give only one of gamma_mhz and gamma_rad_s", "gamma_rad_s",
                          r.entry("gamma_rad_s").line);
    const double length = r.number_or("sample_length_cm", s.units.sample_length_cm);
    if (r.has("gamma_mhz"))
        s.units = UnitContext::from_gamma_mhz(r.number("gamma_mhz"), length);
    else
        s.units.gamma_si = r.number_or("gamma_rad_s", s.units.gamma_si);
    s.units.sample_length_cm = length;

    s.coupling_alpha = r.number("alpha");
    s.signal = read_pulse(r, "signal");
    s.control2.write = read_pulse(r, "control2");
    s.control3.write = read_pulse(r, "control3");
    for (auto [prefix, control] : {std::pair{std::string("control2.release"), &s.control2},
                                   std::pair{std::string("control3.release"), &s.control3}}) {
        const std::vector<std::string> optional = {prefix + ".rise", prefix + ".phase"};
        if (!any_of_keys(r, pulse_keys(prefix)) && !any_of_keys(r, optional))
            continue;
        require_group(r, pulse_keys(prefix), prefix);
        control->release = read_pulse(r, prefix);
    }

    s.grid.n_xi = r.integer("grid.n_xi");
    s.grid.d_tau = r.number("grid.d_tau");
    s.grid.t_final = r.number("grid.t_final");

    const std::vector<std::string> lab = {"magnetic.b_tesla", "magnetic.t_start_us",
                                          "magnetic.duration_us"};
    const std::vector<std::string> internal = {"magnetic.b_au", "magnetic.t_start",
                                               "magnetic.duration"};
    const bool use_lab = any_of_keys(r, lab);
    const bool use_internal = any_of_keys(r, internal);
    if (use_lab && use_internal)
        throw ConfigError("magnetic stage mixes laboratory and internal keys", "magnetic.b_au");
    if (use_lab) {
        require_group(r, lab, "magnetic stage");
        s.magnetic = MagneticStage{
            convert_units(s.units, r.number("magnetic.b_tesla"), Unit::tesla, Unit::au_magnetic),
            convert_units(s.units, r.number("magnetic.t_start_us"), Unit::microseconds,
                          Unit::inverse_gamma),
            convert_units(s.units, r.number("magnetic.duration_us"), Unit::microseconds,
                          Unit::inverse_gamma)};
    } else if (use_internal) {
        require_group(r, internal, "magnetic stage");
        s.magnetic = MagneticStage{r.number("magnetic.b_au"), r.number("magnetic.t_start"),
                                   r.number("magnetic.duration")};
    }

    OutputRequest& out = s.outputs;
    out.snapshot_interval = r.number_or("output.snapshot_interval", out.snapshot_interval);
    out.snapshot_start = r.number_or("output.snapshot_start", out.snapshot_start);
    out.snapshot_end = r.number_or("output.snapshot_end", out.snapshot_end);
    if (r.has("output.snapshot_times"))
        out.snapshot_times = r.list("output.snapshot_times");

    sync_kappa(s);
    try {
        s.validate();
    } catch (const ScenarioError& e) {
        throw ConfigError(std::string("invalid scenario: ") + e.what());
    }
    return s;
}

Scenario load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what(), e.key(), e.line());
    }
}

std::vector<std::pair<std::string, std::string>> config_entries(const Scenario& s)
{
    std::vector<std::pair<std::string, std::string>> e;
    auto num = [&](const std::string& k, double v) { e.emplace_back(k, format_number(v)); };
    const AtomicSystem& sys = s.system;
    num("gamma_ab", sys.gamma_ab);
    num("gamma_ac", sys.gamma_ac);
    num("gamma_ad", sys.gamma_ad);
    num("delta1", sys.delta1);
    num("delta2", sys.delta2);
    num("delta3", sys.delta3);
    num("alpha", s.coupling_alpha);
    num("gamma_rad_s", s.units.gamma_si);
    num("sample_length_cm", s.units.sample_length_cm);
    num("density_cm3", sys.density_note);
    auto pulse = [&](const std::string& p, const PulseShape& shape) {
        e.emplace_back(p + ".kind", std::string(pulse_kind_name(shape.kind)));
        num(p + ".amplitude", shape.amplitude);
        num(p + ".t_start", shape.t_start);
        num(p + ".t_end", shape.t_end);
        num(p + ".rise", shape.rise);
        num(p + ".phase", shape.phase);
    };
    pulse("signal", s.signal);
    pulse("control2", s.control2.write);
    pulse("control3", s.control3.write);
    if (s.control2.release)
        pulse("control2.release", *s.control2.release);
    if (s.control3.release)
        pulse("control3.release", *s.control3.release);
    e.emplace_back("grid.n_xi", std::to_string(s.grid.n_xi));
    num("grid.d_tau", s.grid.d_tau);
    num("grid.t_final", s.grid.t_final);
    if (s.magnetic) {
        num("magnetic.b_au", s.magnetic->b_field);
        num("magnetic.t_start", s.magnetic->t_start);
        num("magnetic.duration", s.magnetic->duration);
    }
    static constexpr const char* level_names[] = {"a", "b", "c", "d"};
    for (int i = 0; i < 4; ++i) {
        const std::string p = std::string("zeeman.") + level_names[i];
        num(p + ".f", sys.zeeman[i].f_quantum);
        num(p + ".m", sys.zeeman[i].m_quantum);
        num(p + ".g", sys.zeeman[i].g_factor);
    }
    num("output.snapshot_interval", s.outputs.snapshot_interval);
    num("output.snapshot_start", s.outputs.snapshot_start);
    num("output.snapshot_end", s.outputs.snapshot_end);
    std::string times;
    for (std::size_t i = 0; i < s.outputs.snapshot_times.size(); ++i) {
        if (i)
            times += ", ";
        times += format_number(s.outputs.snapshot_times[i]);
    }
    e.emplace_back("output.snapshot_times", times);
    return e;
}

std::string render_config(const Scenario& s)
{
    std::string out;
    for (const auto& [key, value] : config_entries(s)) {
        out += key;
        out += value.empty() ? " =" : " = ";
        out += value;
        out += '\n';
    }
    return out;
}

std::string config_reference()
{
    std::string out = "Scenario keys (key = value, # starts a comment):\n";
    for (const auto& k : key_table()) {
        out += "  " + k.key;
        out += std::string(k.key.size() < 28 ? 28 - k.key.size() : 1, ' ');
        out += (k.required ? "[required] " : "") + k.help + "\n";
    }
    return out;
}

} // namespace tripod
