#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spinsim/half_integer.hpp"
#include "spinsim/spin_algebra.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

/// Gaussian field pulse in x acting on one site. The amplitude absorbs the
/// magnetic moment, i.e. it is the product mu_S * B0x.
struct PulseSpec {
    double amplitude = 0.0;  // mu_S B0x
    double center = 0.0;     // t0
    double width = 1.0;      // T_W > 0
    int target_site = 1;     // 1-based
};

/// B_x(t) = B0x exp(-(1/2) ((t-t0)/T_W)^2).
double pulse_amplitude(double t, const PulseSpec& pulse);

/// Full experiment description: open chain of N spins S with nearest-neighbor
/// exchange J (>0 ferromagnetic, <0 antiferromagnetic), static field Bz
/// (again mu_S absorbed), optional pulse, and damping lambda >= 0.
struct SystemSpec {
    int n_sites = 1;
    HalfInteger spin{1};
    double exchange = 0.0;  // J
    double field_z = 0.0;   // mu_S Bz
    std::optional<PulseSpec> pulse;
    double damping = 0.0;   // lambda
    bool open_chain = true;

    int site_dim() const { return spin.dimension(); }
    /// (2S+1)^N, guarded by N log2(2S+1) <= 24.
    long hilbert_dim() const;
    void validate() const;
};

/// Assembles H(t) = -J sum_n S_n.S_{n+1} - Bz sum_n S_n^z - Bx(t) S_p^x,
/// caching the time-independent part and the pulse operator.
class HamiltonianBuilder {
public:
    explicit HamiltonianBuilder(const SystemSpec& spec);

    const SystemSpec& spec() const { return spec_; }
    bool time_dependent() const { return spec_.pulse.has_value(); }
    const Matrix& static_part() const { return static_part_; }

    /// H at time t; returns the cached static part when there is no pulse.
    Matrix at_time(double t) const;

    /// H(t) - sum_n xi_n . S_n for one step of piecewise-constant noise.
    Matrix with_noise(double t, const std::vector<Vec3>& xi) const;

    /// Assembles H(t) [minus noise terms when given] into `out` without
    /// reallocating; integrator scratch path.
    void assemble(double t, const std::vector<Vec3>* xi, Matrix& out) const;

    /// Embedded spin component of one site (1-based), built on demand.
    const Matrix& site_operator(int site, int axis) const;

    /// Upper bound on the spectral radius of H over the whole run
    /// (inf-norm at the pulse peak), used for step-size guards.
    double spectral_radius_bound() const;

private:
    SystemSpec spec_;
    SpinMatrixSet single_site_;
    Matrix static_part_;
    Matrix pulse_op_;  // -S_p^x embedded; zero-size when no pulse
    mutable std::vector<Matrix> site_ops_;  // lazy, 3 per site
};

/// One-shot convenience wrapper around HamiltonianBuilder.
Matrix build_hamiltonian(const SystemSpec& spec, double t);

/// Delta-correlated Gaussian field of strength D, discretized as
/// piecewise-constant per integrator step with per-component variance D/dt.
struct NoiseSpec {
    double strength = 0.0;  // D
    std::uint64_t seed = 0;
};

/// Independent zero-mean Gaussian samples for every (site, component),
/// reproducible from (seed, step, site, component) via a counter-based
/// generator; exact zeros when D = 0.
std::vector<Vec3> sample_noise_fields(const NoiseSpec& noise, int n_sites, double dt,
                                      std::uint64_t step);

/// Effective field conjugate to spin n: B_eff = -dE/dS_n =
/// J (S_{n-1} + S_{n+1}) + Bz z + pulse term on the target site.
Vec3 classical_effective_field(const ClassicalConfig& config, const SystemSpec& spec,
                               int site, double t);

/// E = -J sum S_n.S_{n+1} - Bz sum S_n^z - Bx(t) S_p^x.
double classical_energy(const ClassicalConfig& config, const SystemSpec& spec, double t);

}  // namespace spinsim
