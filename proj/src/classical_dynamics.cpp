#include "spinsim/classical_dynamics.hpp"

#include <cmath>
#include <future>

namespace spinsim {

namespace {

Vec3 damped_torque(const Vec3& spin, const Vec3& field, double lambda, double scale) {
    const Vec3 precession = spin.cross(field);
    return scale * (precession - lambda * spin.cross(precession));
}

std::vector<Vec3> rhs_impl(const ClassicalConfig& config, const SystemSpec& spec, double t,
                           double scale) {
    std::vector<Vec3> out(config.spins.size());
    for (int site = 1; site <= config.n_sites(); ++site)
        out[site - 1] = damped_torque(config.spins[site - 1],
                                      classical_effective_field(config, spec, site, t),
                                      spec.damping, scale);
    return out;
}

void renormalize(ClassicalConfig& config, double target_length) {
    for (Vec3& s : config.spins) {
        const double len = s.norm();
        if (!(len > 0.0) || !std::isfinite(len))
            throw NumericalError("classical spin lost its length during integration");
        s *= target_length / len;
    }
}

ClassicalConfig heun_step_impl(const ClassicalConfig& config, const SystemSpec& spec,
                               const std::vector<Vec3>* xi, double dt, double t) {
    const double scale = 1.0 / (1.0 + spec.damping * spec.damping);
    const int n = config.n_sites();

    auto torque = [&](const ClassicalConfig& state, double time) {
        std::vector<Vec3> out(n);
        for (int site = 1; site <= n; ++site) {
            Vec3 field = classical_effective_field(state, spec, site, time);
            if (xi) field += (*xi)[site - 1];
            out[site - 1] = damped_torque(state.spins[site - 1], field, spec.damping, scale);
        }
        return out;
    };

    const std::vector<Vec3> k1 = torque(config, t);
    ClassicalConfig predictor = config;
    for (int k = 0; k < n; ++k) predictor.spins[k] += dt * k1[k];

    const std::vector<Vec3> k2 = torque(predictor, t + dt);
    ClassicalConfig out = config;
    for (int k = 0; k < n; ++k) out.spins[k] += 0.5 * dt * (k1[k] + k2[k]);

    renormalize(out, spec.spin.value());
    return out;
}

}  // namespace

std::vector<Vec3> ll_rhs(const ClassicalConfig& config, const SystemSpec& spec, double t) {
    return rhs_impl(config, spec, t, 1.0);
}

std::vector<Vec3> llg_rhs(const ClassicalConfig& config, const SystemSpec& spec, double t) {
    return rhs_impl(config, spec, t, 1.0 / (1.0 + spec.damping * spec.damping));
}

ClassicalConfig polarized_config(const SystemSpec& spec) {
    ClassicalConfig config;
    config.spins.assign(spec.n_sites, Vec3(0.0, 0.0, spec.spin.value()));
    return config;
}

void integrate_classical(ClassicalConfig& config, const SystemSpec& spec,
                         const IntegratorConfig& cfg, DampedForm form, double t_end,
                         const ClassicalObserver& observer) {
    cfg.validate();
    const double scale = form == DampedForm::LLG
                             ? 1.0 / (1.0 + spec.damping * spec.damping)
                             : 1.0;
    const double dt = cfg.dt;
    const long whole = static_cast<long>(std::floor(t_end / dt + 1e-9));
    const double dt_last_raw = t_end - whole * dt;
    const double dt_last = dt_last_raw > 1e-9 * std::max(1.0, t_end) ? dt_last_raw : 0.0;
    const long total = whole + (dt_last > 0.0 ? 1 : 0);
    const int n = config.n_sites();

    if (observer) observer(0.0, config);
    ClassicalConfig stage = config;
    for (long step = 0; step < total; ++step) {
        const double h = (step < whole) ? dt : dt_last;
        const double t = step * dt;

        const std::vector<Vec3> k1 = rhs_impl(config, spec, t, scale);
        for (int k = 0; k < n; ++k) stage.spins[k] = config.spins[k] + 0.5 * h * k1[k];
        const std::vector<Vec3> k2 = rhs_impl(stage, spec, t + 0.5 * h, scale);
        for (int k = 0; k < n; ++k) stage.spins[k] = config.spins[k] + 0.5 * h * k2[k];
        const std::vector<Vec3> k3 = rhs_impl(stage, spec, t + 0.5 * h, scale);
        for (int k = 0; k < n; ++k) stage.spins[k] = config.spins[k] + h * k3[k];
        const std::vector<Vec3> k4 = rhs_impl(stage, spec, t + h, scale);
        for (int k = 0; k < n; ++k)
            config.spins[k] += (h / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);

        renormalize(config, spec.spin.value());
        const bool last = step + 1 == total;
        if (observer && (last || (step + 1) % cfg.sample_every == 0))
            observer(last ? t_end : (step + 1) * dt, config);
    }
}

ClassicalConfig stochastic_llg_step(const ClassicalConfig& config, const SystemSpec& spec,
                                    const NoiseSpec& noise, double dt, double t,
                                    std::uint64_t step) {
    const std::vector<Vec3> xi = sample_noise_fields(noise, config.n_sites(), dt, step);
    return heun_step_impl(config, spec, &xi, dt, t);
}

ClassicalConfig heun_llg_step(const ClassicalConfig& config, const SystemSpec& spec,
                              double dt, double t) {
    return heun_step_impl(config, spec, nullptr, dt, t);
}

void integrate_stochastic(ClassicalConfig& config, const SystemSpec& spec,
                          const NoiseSpec& noise, const IntegratorConfig& cfg,
                          double t_end, const ClassicalObserver& observer) {
    cfg.validate();
    const double dt = cfg.dt;
    const long whole = static_cast<long>(std::floor(t_end / dt + 1e-9));
    const double dt_last_raw = t_end - whole * dt;
    const double dt_last = dt_last_raw > 1e-9 * std::max(1.0, t_end) ? dt_last_raw : 0.0;
    const long total = whole + (dt_last > 0.0 ? 1 : 0);

    if (observer) observer(0.0, config);
    for (long step = 0; step < total; ++step) {
        const double h = (step < whole) ? dt : dt_last;
        config = stochastic_llg_step(config, spec, noise, h, step * dt,
                                     static_cast<std::uint64_t>(step));
        const bool last = step + 1 == total;
        if (observer && (last || (step + 1) % cfg.sample_every == 0))
            observer(last ? t_end : (step + 1) * dt, config);
    }
}

NoiseSpec member_noise(const NoiseSpec& base, std::uint64_t member) {
    NoiseSpec out = base;
    // Distinct full-period stream per member; member 0 keeps the base seed.
    out.seed = base.seed + member * 0x9e3779b97f4a7c15ULL;
    return out;
}

EnsembleMean run_stochastic_ensemble(const SystemSpec& spec, const NoiseSpec& noise,
                                     const IntegratorConfig& cfg, double t_end,
                                     int n_members) {
    if (n_members < 1) throw ConfigError("ensemble needs at least one member");

    using MemberSamples = std::vector<std::vector<Vec3>>;  // [site][sample]
    auto run_member = [&](int member) {
        ClassicalConfig config = polarized_config(spec);
        MemberSamples samples(spec.n_sites);
        std::vector<double> times;
        integrate_stochastic(config, spec, member_noise(noise, member), cfg, t_end,
                             [&](double t, const ClassicalConfig& c) {
                                 times.push_back(t);
                                 for (int k = 0; k < spec.n_sites; ++k)
                                     samples[k].push_back(c.spins[k]);
                             });
        return std::make_pair(std::move(times), std::move(samples));
    };

    std::vector<std::future<std::pair<std::vector<double>, MemberSamples>>> futures;
    futures.reserve(n_members);
    for (int m = 0; m < n_members; ++m)
        futures.push_back(std::async(std::launch::async, run_member, m));

    EnsembleMean out;
    for (int m = 0; m < n_members; ++m) {
        auto [times, samples] = futures[m].get();
        if (m == 0) {
            out.times = std::move(times);
            out.mean_spins.assign(spec.n_sites,
                                  std::vector<Vec3>(out.times.size(), Vec3::Zero()));
        }
        for (int site = 0; site < spec.n_sites; ++site)
            for (std::size_t k = 0; k < out.times.size(); ++k)
                out.mean_spins[site][k] += samples[site][k];
    }
    for (auto& series : out.mean_spins)
        for (Vec3& v : series) v /= static_cast<double>(n_members);
    return out;
}

}  // namespace spinsim
