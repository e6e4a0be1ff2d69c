#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spinsim/model.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

/// Everything needed to reproduce a run, written as a JSON sidecar.
struct RunMetadata {
    std::string kind;  // "quantum" | "classical"
    std::string form;  // "ll" | "llg"
    SystemSpec spec;
    double dt = 1e-3;
    int sample_every = 10;
    double t_end = 0.0;
    double noise_strength = 0.0;
    std::uint64_t seed = 0;
    std::string version = kVersion;
};

/// Time series of observables emitted by a scenario run. Per-site series are
/// indexed [site][sample]; occupations [column][sample].
struct TrajectoryDataset {
    std::vector<double> times;
    int n_sites = 0;
    double spin_value = 0.5;  // S, for normalized copies

    std::vector<std::vector<double>> sx, sy, sz;  // units of hbar
    std::vector<double> norm;                     // post-step state norm (1.0 classically)
    std::vector<double> energy;                   // <H> or classical E
    std::vector<double> entropy_site1;            // bits (0.0 classically)

    std::vector<std::string> occ_labels;          // per-basis-state columns (may be empty)
    std::vector<std::vector<double>> occ;
    std::vector<std::string> class_labels;        // total-m class columns
    std::vector<std::vector<double>> occ_class;

    RunMetadata meta;

    std::size_t n_samples() const { return times.size(); }
    double site_length(int site, std::size_t k) const;
    /// Throws NumericalError if any stored value is non-finite or times are
    /// not strictly increasing.
    void validate() const;
};

/// Writes the dataset as CSV, one row per (time, site):
/// t,site,sx,sy,sz,length,sx_norm,sy_norm,sz_norm,length_norm,norm,energy,
/// entropy1,occ_<label>...,occ_mtot_<class>... with 17 significant digits.
void write_csv(const TrajectoryDataset& data, const std::string& path);

/// Metadata sidecar (JSON).
void write_metadata(const RunMetadata& meta, const std::string& path);

/// Columnar view of a CSV written by write_csv; used by compare/entropy.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // [column][row]

    std::size_t n_rows() const { return columns.empty() ? 0 : columns[0].size(); }
    int column_index(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::string& path);

/// Per-site spin series reconstructed from a CSV table.
struct SpinSeries {
    std::vector<double> times;                      // unique, ascending
    std::vector<std::vector<Vec3>> normalized;      // [site][sample], S-normalized
    std::vector<std::vector<double>> entropy1;      // per sample (site-independent)
    std::vector<std::vector<double>> length;        // [site][sample], units of hbar
};

SpinSeries extract_spin_series(const CsvTable& table);

}  // namespace spinsim
