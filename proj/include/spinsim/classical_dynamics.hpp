#pragma once

#include <cstdint>
#include <functional>

#include "spinsim/model.hpp"
#include "spinsim/quantum_dynamics.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

/// dS_n/dt = S_n x B_eff(n) - lambda S_n x (S_n x B_eff(n)); orthogonal to
/// S_n, so the flow preserves lengths exactly.
std::vector<Vec3> ll_rhs(const ClassicalConfig& config, const SystemSpec& spec, double t);

/// LL right side divided by (1 + lambda^2).
std::vector<Vec3> llg_rhs(const ClassicalConfig& config, const SystemSpec& spec, double t);

using ClassicalObserver = std::function<void(double t, const ClassicalConfig& config)>;

/// Fully polarized +z chain of length S, the initial state of every built-in
/// scenario.
ClassicalConfig polarized_config(const SystemSpec& spec);

/// RK4 trajectory with per-step renormalization of every spin to length S.
void integrate_classical(ClassicalConfig& config, const SystemSpec& spec,
                         const IntegratorConfig& cfg, DampedForm form, double t_end,
                         const ClassicalObserver& observer = {});

/// One Heun (predictor-corrector) step of the stochastic LLG equation with
/// the same piecewise-constant noise realization in both stages; spins
/// renormalized to length S afterwards.
ClassicalConfig stochastic_llg_step(const ClassicalConfig& config, const SystemSpec& spec,
                                    const NoiseSpec& noise, double dt, double t,
                                    std::uint64_t step);

/// Deterministic Heun stepping, the D = 0 reference for the stochastic path.
ClassicalConfig heun_llg_step(const ClassicalConfig& config, const SystemSpec& spec,
                              double dt, double t);

/// Heun trajectory of the stochastic LLG equation.
void integrate_stochastic(ClassicalConfig& config, const SystemSpec& spec,
                          const NoiseSpec& noise, const IntegratorConfig& cfg,
                          double t_end, const ClassicalObserver& observer = {});

/// Per-member noise stream for ensemble member `member` of a base spec.
NoiseSpec member_noise(const NoiseSpec& base, std::uint64_t member);

/// Mean spin trajectory over an ensemble of independent stochastic runs;
/// members run concurrently, each with its own noise stream. Sampled at the
/// observer cadence of cfg; returns [site][sample] means and the sample times.
struct EnsembleMean {
    std::vector<double> times;
    std::vector<std::vector<Vec3>> mean_spins;  // [site][sample]
};

EnsembleMean run_stochastic_ensemble(const SystemSpec& spec, const NoiseSpec& noise,
                                     const IntegratorConfig& cfg, double t_end,
                                     int n_members);

}  // namespace spinsim
