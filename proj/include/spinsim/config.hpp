#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spinsim/model.hpp"
#include "spinsim/quantum_dynamics.hpp"

namespace spinsim {

/// A complete scenario description as read from a config file or preset.
struct ScenarioConfig {
    SystemSpec system;
    NoiseSpec noise;
    IntegratorConfig integrator;
    DampedForm form = DampedForm::LLG;
    double t_end = 10.0;
    std::string name = "custom";
};

/// Parses the key/value config format (one `key = value` per line, `#`
/// comments). Keys: N, S, J, Bz, B0x, t0, TW, pulse_site, lambda, D, seed,
/// dt, t_end, scheme, sample_every. Unknown keys are rejected.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

/// Renders a config back into the file format (round-trips parse_config_text).
std::string render_config(const ScenarioConfig& config);

/// Built-in scenario presets:
///   fig1: S=1, N=1, J=0, Bz=-5.1, B0x=3.27, t0=2,  TW=0.02, lambda=0.2, t_end=20
///   fig2: S=1, N=3, J=1, Bz=0.1,  B0x=3.27, t0=10, TW=0.02, lambda=0.1, t_end=50
///   fig3: S=1/2, N=3, J=4, Bz=-2, B0x=3.27, t0=10, TW=0.02, lambda=0.1, t_end=120
ScenarioConfig preset(const std::string& name);

std::string form_name(DampedForm form);
DampedForm parse_form(const std::string& name);

}  // namespace spinsim
