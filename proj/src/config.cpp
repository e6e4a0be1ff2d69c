#include "spinsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace spinsim {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse number '" + value + "'");
    }
}

long to_long(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long out = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse integer '" + value + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long out = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse seed '" + value + "'");
    }
}

}  // namespace

std::string form_name(DampedForm form) { return form == DampedForm::LL ? "ll" : "llg"; }

DampedForm parse_form(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "ll") return DampedForm::LL;
    if (lower == "llg") return DampedForm::LLG;
    throw ConfigError("scheme must be 'll' or 'llg', got '" + name + "'");
}

ScenarioConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": empty key or value");
        if (!kv.emplace(key, value).second)
            throw ConfigError("config key '" + key + "' given twice");
    }

    ScenarioConfig config;
    PulseSpec pulse;
    bool has_pulse_key = false;

    for (const auto& [key, value] : kv) {
        if (key == "N") config.system.n_sites = static_cast<int>(to_long(key, value));
        else if (key == "S") config.system.spin = HalfInteger::parse(value);
        else if (key == "J") config.system.exchange = to_double(key, value);
        else if (key == "Bz") config.system.field_z = to_double(key, value);
        else if (key == "B0x") { pulse.amplitude = to_double(key, value); has_pulse_key = true; }
        else if (key == "t0") { pulse.center = to_double(key, value); has_pulse_key = true; }
        else if (key == "TW") { pulse.width = to_double(key, value); has_pulse_key = true; }
        else if (key == "pulse_site") {
            pulse.target_site = static_cast<int>(to_long(key, value));
            has_pulse_key = true;
        }
        else if (key == "lambda") config.system.damping = to_double(key, value);
        else if (key == "D") config.noise.strength = to_double(key, value);
        else if (key == "seed") config.noise.seed = to_u64(key, value);
        else if (key == "dt") config.integrator.dt = to_double(key, value);
        else if (key == "t_end") config.t_end = to_double(key, value);
        else if (key == "scheme") config.form = parse_form(value);
        else if (key == "sample_every")
            config.integrator.sample_every = static_cast<int>(to_long(key, value));
        else throw ConfigError("unknown config key '" + key + "'");
    }

    if (has_pulse_key && pulse.amplitude != 0.0) config.system.pulse = pulse;
    if (config.noise.strength < 0.0) throw ConfigError("noise strength D must be >= 0");
    if (config.t_end < 0.0) throw ConfigError("t_end must be >= 0");
    config.integrator.validate();
    config.system.validate();
    return config;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    ScenarioConfig config = parse_config_text(buffer.str());
    auto slash = path.find_last_of("/\\");
    auto stem = path.substr(slash == std::string::npos ? 0 : slash + 1);
    if (auto dot = stem.rfind('.'); dot != std::string::npos) stem.erase(dot);
    config.name = stem.empty() ? "custom" : stem;
    return config;
}

std::string render_config(const ScenarioConfig& config) {
    std::ostringstream out;
    out.precision(17);
    out << "N = " << config.system.n_sites << "\n";
    out << "S = " << config.system.spin.str() << "\n";
    out << "J = " << config.system.exchange << "\n";
    out << "Bz = " << config.system.field_z << "\n";
    if (config.system.pulse) {
        out << "B0x = " << config.system.pulse->amplitude << "\n";
        out << "t0 = " << config.system.pulse->center << "\n";
        out << "TW = " << config.system.pulse->width << "\n";
        out << "pulse_site = " << config.system.pulse->target_site << "\n";
    }
    out << "lambda = " << config.system.damping << "\n";
    out << "D = " << config.noise.strength << "\n";
    out << "seed = " << config.noise.seed << "\n";
    out << "dt = " << config.integrator.dt << "\n";
    out << "t_end = " << config.t_end << "\n";
    out << "scheme = " << form_name(config.form) << "\n";
    out << "sample_every = " << config.integrator.sample_every << "\n";
    return out.str();
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig config;
    config.name = name;
    config.form = DampedForm::LLG;
    config.integrator.dt = 1e-3;
    config.integrator.sample_every = 10;

    PulseSpec pulse;
    pulse.amplitude = 3.27;
    pulse.width = 0.02;
    pulse.target_site = 1;

    if (name == "fig1") {
        config.system.n_sites = 1;
        config.system.spin = HalfInteger(2);  // S = 1
        config.system.exchange = 0.0;
        config.system.field_z = -5.1;
        config.system.damping = 0.2;
        pulse.center = 2.0;
        config.t_end = 20.0;
    } else if (name == "fig2") {
        config.system.n_sites = 3;
        config.system.spin = HalfInteger(2);  // S = 1
        config.system.exchange = 1.0;
        config.system.field_z = 0.1;
        config.system.damping = 0.1;
        pulse.center = 10.0;
        config.t_end = 50.0;
    } else if (name == "fig3") {
        config.system.n_sites = 3;
        config.system.spin = HalfInteger(1);  // S = 1/2
        config.system.exchange = 4.0;
        config.system.field_z = -2.0;
        config.system.damping = 0.1;
        pulse.center = 10.0;
        config.t_end = 120.0;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected fig1, fig2 or fig3)");
    }
    config.system.pulse = pulse;
    config.system.validate();
    return config;
}

}  // namespace spinsim
