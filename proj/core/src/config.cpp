#include "qtoken/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "qtoken/errors.hpp"

namespace qtoken {

namespace {

enum class Kind { number, integer, flag, choice, list };

struct Key {
    Kind kind;
    std::string fallback;
    std::vector<std::string> choices = {};
};

using Schema = std::map<std::string, std::map<std::string, Key>>;

const Schema& schema() {
    static const Schema s = {
        {"cavity",
         {{"omega_a_ghz", {Kind::number, "484000"}},
          {"delta_ghz", {Kind::number, "108.76"}},
          {"kappa_ghz", {Kind::number, "34.07"}},
          {"kappa_l_ghz", {Kind::number, "-1"}},
          {"half_open", {Kind::flag, "true"}},
          {"omega0_offset_ghz", {Kind::number, "-63.66"}},
          {"g_ghz", {Kind::number, "-1"}},
          {"cooperativity", {Kind::number, "35.85"}},
          {"cooperativity_kappa_ghz", {Kind::number, "34.07"}},
          {"coupling_mode", {Kind::choice, "fixed", {"fixed", "sqrt_frequency"}}},
          {"gamma_atom_ghz", {Kind::number, "-1"}},
          {"t1_ns", {Kind::number, "4.5"}},
          {"debye_waller", {Kind::number, "0.6"}},
          {"omega_s_ghz", {Kind::number, "70.8"}}}},
        {"photon",
         {{"bandwidth_ghz", {Kind::number, "5.69"}},
          {"bandwidth_convention", {Kind::choice, "ordinary", {"ordinary", "angular"}}},
          {"generation_fidelity", {Kind::number, "1"}},
          {"diffusion_sigma_ghz", {Kind::number, "0"}},
          {"measurement_model", {Kind::choice, "frequency_trace", {"frequency_trace", "mode_projection"}}}}},
        {"gates",
         {{"pi2_fidelity", {Kind::number, "0.9977"}},
          {"gate_time_ns", {Kind::number, "-1"}},
          {"tau_pi8_ps", {Kind::number, "88.33"}},
          {"measurement_time_ns", {Kind::number, "0.1"}}}},
        {"memory",
         {{"medium", {Kind::choice, "fixed", {"fixed", "electron", "nuclear"}}},
          {"fidelity", {Kind::number, "0.9895"}},
          {"storage_time_ns", {Kind::number, "0"}},
          {"swap_time_ns", {Kind::number, "0"}},
          {"gamma_plus_per_ms", {Kind::number, "0"}},
          {"gamma_minus_per_ms", {Kind::number, "0"}},
          {"gamma_d_per_s", {Kind::number, "1"}},
          {"electron_model", {Kind::choice, "lindblad", {"lindblad", "printed"}}},
          {"rates_from_phonon", {Kind::flag, "false"}}}},
        {"security",
         {{"p_th", {Kind::number, "1e-4"}},
          {"alpha", {Kind::number, "0.75"}},
          {"n", {Kind::integer, "0"}},
          {"t", {Kind::integer, "0"}},
          {"loss_model", {Kind::choice, "printed", {"printed", "coupled"}}}}},
        {"link",
         {{"eta_cf", {Kind::number, "1"}},
          {"eta_fc", {Kind::number, "1"}},
          {"eta_d", {Kind::number, "1"}},
          {"eta_c", {Kind::number, "-1"}},
          {"fiber_length_km", {Kind::number, "0.5"}},
          {"attenuation_length_km", {Kind::number, "20"}},
          {"c_fiber_km_s", {Kind::number, "2e5"}},
          {"slot_factor", {Kind::number, "20"}}}},
        {"phonon",
         {{"c11_gpa", {Kind::number, "1079.6"}},
          {"c12_gpa", {Kind::number, "126.73"}},
          {"c44_gpa", {Kind::number, "578.16"}},
          {"density_g_cm3", {Kind::number, "3.51"}},
          {"d_g_phz", {Kind::number, "0.787"}},
          {"f_g_phz", {Kind::number, "-0.562"}},
          {"d_u_phz", {Kind::number, "0.956"}},
          {"f_u_phz", {Kind::number, "-2.555"}},
          {"temperature_k", {Kind::number, "0.1"}},
          {"levels_ghz", {Kind::list, ""}},
          {"lower_level", {Kind::integer, "0"}},
          {"upper_level", {Kind::integer, "1"}}}},
        {"design",
         {{"kappa_min_ghz", {Kind::number, "1"}},
          {"kappa_max_ghz", {Kind::number, "200"}},
          {"delta_min_ghz", {Kind::number, "-300"}},
          {"delta_max_ghz", {Kind::number, "300"}},
          {"offset_min_ghz", {Kind::number, "-300"}},
          {"offset_max_ghz", {Kind::number, "300"}},
          {"region_kappa_ghz", {Kind::number, "2"}},
          {"region_omega_c_ghz", {Kind::number, "2"}},
          {"region_points", {Kind::integer, "5"}},
          {"seed", {Kind::integer, "1"}},
          {"population", {Kind::integer, "32"}},
          {"generations", {Kind::integer, "400"}},
          {"nm_tolerance", {Kind::number, "1e-12"}},
          {"starts", {Kind::integer, "3"}}}},
    };
    return s;
}

// h_<mode>_<i>_<j> = re [im]
const std::regex& h_pattern() {
    static const std::regex r("h_(egx|egy)_([0-9]+)_([0-9]+)");
    return r;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    std::istringstream in(s);
    in >> out;
    return !in.fail() && (in >> std::ws).eof() && std::isfinite(out);
}

void check_value(const Key& k, const std::string& v, const std::string& where) {
    double d = 0.0;
    switch (k.kind) {
        case Kind::number:
            if (!parse_double(v, d)) throw ConfigError(where + ": expected a number, got '" + v + "'");
            break;
        case Kind::integer:
            if (!parse_double(v, d) || d != std::floor(d))
                throw ConfigError(where + ": expected an integer, got '" + v + "'");
            break;
        case Kind::flag:
            if (v != "true" && v != "false") throw ConfigError(where + ": expected true or false");
            break;
        case Kind::choice:
            if (std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end())
                throw ConfigError(where + ": unsupported value '" + v + "'");
            break;
        case Kind::list: {
            std::string item;
            std::istringstream in(v);
            while (std::getline(in, item, ','))
                if (!parse_double(trim(item), d)) throw ConfigError(where + ": bad list entry '" + item + "'");
            break;
        }
    }
}

}  // namespace

Config::Config() {
    for (const auto& [section, keys] : schema())
        for (const auto& [name, key] : keys) values_[section][name] = key.fallback;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    Config c;
    c.apply_text(buf.str(), path);
    return c;
}

void Config::apply_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section)) throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        if (section.empty()) throw ConfigError(where + ": key outside of a section");
        assign(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
    }
}

void Config::set(const std::string& key, const std::string& value) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) throw ConfigError("override '" + key + "' must be section.key");
    const std::string section = key.substr(0, dot);
    if (!schema().count(section)) throw ConfigError("unknown section [" + section + "]");
    assign(section, key.substr(dot + 1), trim(value), "--set " + key);
}

void Config::assign(const std::string& section, const std::string& key, const std::string& value,
                    const std::string& where) {
    const auto& keys = schema().at(section);
    if (const auto it = keys.find(key); it != keys.end()) {
        check_value(it->second, value, where);
        values_[section][key] = value;
        return;
    }
    if (section == "phonon" && std::regex_match(key, h_pattern())) {
        check_value({Kind::list, ""}, std::regex_replace(value, std::regex("\\s+"), ","), where);
        values_[section][key] = value;
        return;
    }
    throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto s = values_.find(section);
    return s != values_.end() && s->second.count(key);
}

const std::string& Config::text(const std::string& section, const std::string& key) const {
    const auto s = values_.find(section);
    if (s == values_.end() || !s->second.count(key)) throw ConfigError("missing key " + section + "." + key);
    return s->second.at(key);
}

double Config::number(const std::string& section, const std::string& key) const {
    double d = 0.0;
    if (!parse_double(text(section, key), d)) throw ConfigError(section + "." + key + " is not a number");
    return d;
}

int Config::integer(const std::string& section, const std::string& key) const {
    return static_cast<int>(number(section, key));
}

bool Config::flag(const std::string& section, const std::string& key) const {
    return text(section, key) == "true";
}

std::vector<double> Config::list(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    std::string item;
    std::istringstream in(std::regex_replace(text(section, key), std::regex("[\\s,]+"), " "));
    double d = 0.0;
    while (in >> item)
        if (parse_double(item, d)) out.push_back(d);
    return out;
}

std::map<std::string, std::string> Config::matching(const std::string& section, const std::string& prefix) const {
    std::map<std::string, std::string> out;
    const auto s = values_.find(section);
    if (s == values_.end()) return out;
    for (const auto& [k, v] : s->second)
        if (k.rfind(prefix, 0) == 0) out[k] = v;
    return out;
}

std::string Config::canonical() const {
    std::ostringstream out;
    for (const auto& [section, keys] : values_) {
        out << '[' << section << "]\n";
        for (const auto& [k, v] : keys) out << k << " = " << v << '\n';
    }
    return out.str();
}

std::uint64_t Config::hash() const {
    // FNV-1a, stable across platforms
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace qtoken
