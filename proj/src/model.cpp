#include "spinsim/model.hpp"

#include <cmath>
#include <string>

namespace spinsim {

double pulse_amplitude(double t, const PulseSpec& pulse) {
    const double arg = (t - pulse.center) / pulse.width;
    return pulse.amplitude * std::exp(-0.5 * arg * arg);
}

long SystemSpec::hilbert_dim() const {
    const double bits = n_sites * std::log2(static_cast<double>(site_dim()));
    if (bits > 24.0)
        throw DimensionError("Hilbert dimension (2S+1)^N exceeds 2^24 (N=" +
                             std::to_string(n_sites) + ", S=" + spin.str() + ")");
    long dim = 1;
    for (int k = 0; k < n_sites; ++k) dim *= site_dim();
    return dim;
}

void SystemSpec::validate() const {
    if (n_sites < 1) throw ConfigError("N must be at least 1");
    if (damping < 0.0) throw ConfigError("lambda must be non-negative");
    if (!open_chain)
        throw ConfigError("periodic boundary conditions are not supported; the chain is open");
    if (pulse) {
        if (pulse->width <= 0.0) throw ConfigError("pulse width TW must be positive");
        if (pulse->target_site < 1 || pulse->target_site > n_sites)
            throw ConfigError("pulse_site outside 1..N");
    }
    hilbert_dim();  // throws on overflow
}

HamiltonianBuilder::HamiltonianBuilder(const SystemSpec& spec)
    : spec_(spec), single_site_(build_spin_matrices(spec.spin)) {
    spec_.validate();
    const long dim = spec_.hilbert_dim();
    const int d = spec_.site_dim();
    const int n = spec_.n_sites;

    static_part_ = Matrix::Zero(dim, dim);
    // Exchange: -J sum_n S_n . S_{n+1}, open chain.
    if (spec_.exchange != 0.0 && n > 1) {
        for (int site = 1; site < n; ++site)
            for (int a = 0; a < 3; ++a)
                static_part_ -= spec_.exchange *
                                (embed_site_operator(n, site, single_site_.component(a), d) *
                                 embed_site_operator(n, site + 1, single_site_.component(a), d));
    }
    // Zeeman: -Bz sum_n S_n^z.
    if (spec_.field_z != 0.0) {
        for (int site = 1; site <= n; ++site)
            static_part_ -= spec_.field_z * embed_site_operator(n, site, single_site_.sz, d);
    }
    if (spec_.pulse)
        pulse_op_ = -embed_site_operator(n, spec_.pulse->target_site, single_site_.sx, d);
}

Matrix HamiltonianBuilder::at_time(double t) const {
    if (!spec_.pulse) return static_part_;
    return static_part_ + pulse_amplitude(t, *spec_.pulse) * pulse_op_;
}

Matrix HamiltonianBuilder::with_noise(double t, const std::vector<Vec3>& xi) const {
    Matrix h;
    assemble(t, &xi, h);
    return h;
}

void HamiltonianBuilder::assemble(double t, const std::vector<Vec3>* xi, Matrix& out) const {
    out = static_part_;
    if (spec_.pulse) out += pulse_amplitude(t, *spec_.pulse) * pulse_op_;
    if (xi) {
        for (int site = 1; site <= spec_.n_sites; ++site) {
            const Vec3& f = (*xi)[site - 1];
            for (int a = 0; a < 3; ++a)
                if (f[a] != 0.0) out -= f[a] * site_operator(site, a);
        }
    }
}

const Matrix& HamiltonianBuilder::site_operator(int site, int axis) const {
    if (site < 1 || site > spec_.n_sites) throw DimensionError("site index out of range");
    if (site_ops_.empty()) site_ops_.resize(3 * spec_.n_sites);
    Matrix& slot = site_ops_[3 * (site - 1) + axis];
    if (slot.size() == 0)
        slot = embed_site_operator(spec_.n_sites, site, single_site_.component(axis),
                                   spec_.site_dim());
    return slot;
}

double HamiltonianBuilder::spectral_radius_bound() const {
    Matrix h = spec_.pulse ? Matrix(static_part_ + spec_.pulse->amplitude * pulse_op_)
                           : static_part_;
    return h.cwiseAbs().rowwise().sum().maxCoeff();
}

Matrix build_hamiltonian(const SystemSpec& spec, double t) {
    return HamiltonianBuilder(spec).at_time(t);
}

namespace {

// SplitMix64 finalizer; full-period counter mixing with good avalanche.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform_open(std::uint64_t bits) {
    // (0, 1]: 53 mantissa bits, shifted away from exact zero.
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::vector<Vec3> sample_noise_fields(const NoiseSpec& noise, int n_sites, double dt,
                                      std::uint64_t step) {
    if (dt <= 0.0) throw ConfigError("noise sampling requires dt > 0");
    std::vector<Vec3> fields(n_sites, Vec3::Zero());
    if (noise.strength == 0.0) return fields;

    const double sigma = std::sqrt(noise.strength / dt);
    const double two_pi = 2.0 * M_PI;
    for (int site = 0; site < n_sites; ++site) {
        for (int a = 0; a < 3; ++a) {
            const std::uint64_t key =
                mix64(noise.seed ^ mix64(step ^ mix64(static_cast<std::uint64_t>(site) * 3 + a)));
            const double u1 = uniform_open(key);
            const double u2 = uniform_open(mix64(key ^ 0xda3e39cb94b95bdbULL));
            fields[site][a] = sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
        }
    }
    return fields;
}

Vec3 classical_effective_field(const ClassicalConfig& config, const SystemSpec& spec,
                               int site, double t) {
    if (site < 1 || site > config.n_sites()) throw DimensionError("site index out of range");
    Vec3 field(0.0, 0.0, spec.field_z);
    if (spec.exchange != 0.0) {
        if (site > 1) field += spec.exchange * config.spins[site - 2];
        if (site < config.n_sites()) field += spec.exchange * config.spins[site];
    }
    if (spec.pulse && site == spec.pulse->target_site)
        field[0] += pulse_amplitude(t, *spec.pulse);
    return field;
}

double classical_energy(const ClassicalConfig& config, const SystemSpec& spec, double t) {
    double energy = 0.0;
    const int n = config.n_sites();
    for (int k = 0; k + 1 < n; ++k)
        energy -= spec.exchange * config.spins[k].dot(config.spins[k + 1]);
    for (int k = 0; k < n; ++k) energy -= spec.field_z * config.spins[k][2];
    if (spec.pulse)
        energy -= pulse_amplitude(t, *spec.pulse) * config.spins[spec.pulse->target_site - 1][0];
    return energy;
}

}  // namespace spinsim
