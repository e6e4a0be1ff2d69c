#include "spinsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "spinsim/classical_dynamics.hpp"
#include "spinsim/observables.hpp"
#include "spinsim/quantum_dynamics.hpp"

namespace spinsim {

namespace {

// Per-basis-state occupation columns are emitted only for small spaces; the
// total-m class columns are always present.
constexpr long kMaxOccColumns = 64;

RunMetadata make_metadata(const ScenarioConfig& config, const char* kind) {
    RunMetadata meta;
    meta.kind = kind;
    meta.form = form_name(config.form);
    meta.spec = config.system;
    meta.dt = config.integrator.dt;
    meta.sample_every = config.integrator.sample_every;
    meta.t_end = config.t_end;
    meta.noise_strength = config.noise.strength;
    meta.seed = config.noise.seed;
    return meta;
}

}  // namespace

TrajectoryDataset run_quantum_scenario(const ScenarioConfig& config) {
    const SystemSpec& spec = config.system;
    HamiltonianBuilder hamiltonian(spec);
    const SpinMatrixSet site_spin = build_spin_matrices(spec.spin);
    const long dim = spec.hilbert_dim();
    const BasisLabels labels{spec.n_sites, spec.spin};

    TrajectoryDataset data;
    data.n_sites = spec.n_sites;
    data.spin_value = spec.spin.value();
    data.sx.assign(spec.n_sites, {});
    data.sy.assign(spec.n_sites, {});
    data.sz.assign(spec.n_sites, {});
    data.meta = make_metadata(config, "quantum");

    const bool per_state_occ = dim <= kMaxOccColumns;
    if (per_state_occ) {
        data.occ_labels.reserve(dim);
        for (long i = 0; i < dim; ++i) data.occ_labels.push_back(labels.state_label(i));
        data.occ.assign(dim, {});
    }
    for (const auto& [label, tm] : labels.class_labels()) data.class_labels.push_back(label);
    data.occ_class.assign(data.class_labels.size(), {});

    // All scenarios start from the fully polarized +z product state.
    Vector psi = Vector::Zero(dim);
    psi[0] = 1.0;

    auto observer = [&](double t, const Vector& state, double step_norm) {
        data.times.push_back(t);
        data.norm.push_back(step_norm);
        data.energy.push_back(expectation(state, hamiltonian.at_time(t)).real());

        const auto sites = site_observables(state, spec.n_sites, site_spin);
        for (int k = 0; k < spec.n_sites; ++k) {
            data.sx[k].push_back(sites[k].sx);
            data.sy[k].push_back(sites[k].sy);
            data.sz[k].push_back(sites[k].sz);
        }
        data.entropy_site1.push_back(sites[0].entropy);

        if (per_state_occ)
            for (long i = 0; i < dim; ++i) data.occ[i].push_back(std::norm(state[i]));
        const auto classes = class_occupations(state, labels);
        for (std::size_t k = 0; k < classes.size(); ++k)
            data.occ_class[k].push_back(classes[k].second);
    };

    NoiseProvider noise;
    if (config.noise.strength > 0.0) {
        noise = [noise_spec = config.noise, n = spec.n_sites,
                 dt = config.integrator.dt](std::uint64_t step) {
            return sample_noise_fields(noise_spec, n, dt, step);
        };
    }

    evolve_pure(psi, hamiltonian, spec.damping, config.form, config.integrator, config.t_end,
                observer, noise);
    data.validate();
    return data;
}

TrajectoryDataset run_classical_scenario(const ScenarioConfig& config) {
    const SystemSpec& spec = config.system;
    spec.validate();

    TrajectoryDataset data;
    data.n_sites = spec.n_sites;
    data.spin_value = spec.spin.value();
    data.sx.assign(spec.n_sites, {});
    data.sy.assign(spec.n_sites, {});
    data.sz.assign(spec.n_sites, {});
    data.meta = make_metadata(config, "classical");

    auto observer = [&](double t, const ClassicalConfig& state) {
        data.times.push_back(t);
        data.norm.push_back(1.0);
        data.energy.push_back(classical_energy(state, spec, t));
        data.entropy_site1.push_back(0.0);
        for (int k = 0; k < spec.n_sites; ++k) {
            data.sx[k].push_back(state.spins[k][0]);
            data.sy[k].push_back(state.spins[k][1]);
            data.sz[k].push_back(state.spins[k][2]);
        }
    };

    ClassicalConfig state = polarized_config(spec);
    if (config.noise.strength > 0.0)
        integrate_stochastic(state, spec, config.noise, config.integrator, config.t_end,
                             observer);
    else
        integrate_classical(state, spec, config.integrator, config.form, config.t_end,
                            observer);
    data.validate();
    return data;
}

std::string run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                         bool classical) {
    std::filesystem::create_directories(out_dir);
    const TrajectoryDataset data =
        classical ? run_classical_scenario(config) : run_quantum_scenario(config);
    const std::string stem = classical ? "classical" : "quantum";
    const std::string csv_path = out_dir + "/" + stem + ".csv";
    write_csv(data, csv_path);
    write_metadata(data.meta, out_dir + "/" + stem + "_meta.json");
    return csv_path;
}

namespace {

Vec3 interpolate(const std::vector<double>& times, const std::vector<Vec3>& series, double t) {
    auto upper = std::upper_bound(times.begin(), times.end(), t);
    if (upper == times.begin()) return series.front();
    if (upper == times.end()) return series.back();
    const std::size_t hi = upper - times.begin();
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return (1.0 - w) * series[lo] + w * series[hi];
}

}  // namespace

ComparisonReport compare_trajectories(const std::string& csv_a, const std::string& csv_b) {
    const SpinSeries a = extract_spin_series(read_csv(csv_a));
    const SpinSeries b = extract_spin_series(read_csv(csv_b));
    if (a.normalized.size() != b.normalized.size())
        throw ConfigError("trajectories have different site counts");
    const int n_sites = static_cast<int>(a.normalized.size());

    const double t_lo = std::max(a.times.front(), b.times.front());
    const double t_hi = std::min(a.times.back(), b.times.back());
    if (!(t_lo <= t_hi)) throw ConfigError("trajectories have no overlapping time range");

    // Evaluate on the coarser grid, restricted to the overlap.
    const bool a_coarser = a.times.size() <= b.times.size();
    const std::vector<double>& grid = a_coarser ? a.times : b.times;

    ComparisonReport report;
    report.per_site_max.assign(n_sites, 0.0);
    Vec3 sq_sum = Vec3::Zero();
    for (double t : grid) {
        if (t < t_lo || t > t_hi) continue;
        for (int site = 0; site < n_sites; ++site) {
            const Vec3 va = interpolate(a.times, a.normalized[site], t);
            const Vec3 vb = interpolate(b.times, b.normalized[site], t);
            const Vec3 diff = va - vb;
            const double dev = diff.norm();
            report.per_site_max[site] = std::max(report.per_site_max[site], dev);
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
                report.time_of_max = t;
                report.site_of_max = site + 1;
            }
            sq_sum += diff.cwiseAbs2();
            ++report.n_points;
        }
    }
    if (report.n_points == 0) throw ConfigError("trajectories have no overlapping samples");
    report.rms_deviation = (sq_sum / static_cast<double>(report.n_points)).cwiseSqrt();
    return report;
}

void write_comparison(const ComparisonReport& report, const std::string& path) {
    nlohmann::json j;
    j["max_deviation"] = report.max_deviation;
    j["time_of_max"] = report.time_of_max;
    j["site_of_max"] = report.site_of_max;
    j["per_site_max"] = report.per_site_max;
    j["rms_deviation"] = {report.rms_deviation[0], report.rms_deviation[1],
                          report.rms_deviation[2]};
    j["n_points"] = report.n_points;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

EntropyReport entropy_report(const std::string& dataset_dir) {
    const SpinSeries series = extract_spin_series(read_csv(dataset_dir + "/quantum.csv"));

    EntropyReport report;
    report.times = series.times;
    report.entropy = series.entropy1[0];
    report.min_length = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        if (report.entropy[k] > report.max_entropy) {
            report.max_entropy = report.entropy[k];
            report.time_of_max_entropy = series.times[k];
        }
        for (const auto& site_lengths : series.length) {
            if (site_lengths[k] < report.min_length) {
                report.min_length = site_lengths[k];
                report.time_of_min_length = series.times[k];
            }
        }
    }
    return report;
}

}  // namespace spinsim
