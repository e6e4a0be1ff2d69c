#pragma once

#include <string>

#include "spinsim/config.hpp"
#include "spinsim/trajectory.hpp"

namespace spinsim {

/// Runs the quantum scenario (all presets start fully polarized +z) and
/// returns the sampled dataset.
TrajectoryDataset run_quantum_scenario(const ScenarioConfig& config);

/// Classical counterpart on the same cadence.
TrajectoryDataset run_classical_scenario(const ScenarioConfig& config);

/// Runs a scenario and writes <out_dir>/{quantum|classical}.csv plus the
/// metadata sidecar; returns the CSV path.
std::string run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                         bool classical);

/// Pointwise comparison of two trajectory CSVs on a shared time grid (linear
/// resampling onto the coarser grid when the grids differ).
struct ComparisonReport {
    double max_deviation = 0.0;        // over sites and times, S-normalized vectors
    double time_of_max = 0.0;
    int site_of_max = 1;
    std::vector<double> per_site_max;  // [site]
    Vec3 rms_deviation = Vec3::Zero(); // per component, over sites and times
    std::size_t n_points = 0;
};

ComparisonReport compare_trajectories(const std::string& csv_a, const std::string& csv_b);

void write_comparison(const ComparisonReport& report, const std::string& path);

/// Site-1 entropy table of a dataset directory (reads quantum.csv): per-time
/// entropy plus the entropy argmax time and the global spin-length minimum
/// time.
struct EntropyReport {
    std::vector<double> times;
    std::vector<double> entropy;       // bits
    double max_entropy = 0.0;
    double time_of_max_entropy = 0.0;
    double min_length = 0.0;           // over sites, units of hbar
    double time_of_min_length = 0.0;
};

EntropyReport entropy_report(const std::string& dataset_dir);

}  // namespace spinsim
