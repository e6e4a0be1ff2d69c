#include "spinsim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spinsim {

double TrajectoryDataset::site_length(int site, std::size_t k) const {
    return Vec3(sx[site][k], sy[site][k], sz[site][k]).norm();
}

void TrajectoryDataset::validate() const {
    auto check_series = [this](const std::vector<double>& series, const char* name) {
        if (series.size() != times.size())
            throw NumericalError(std::string("trajectory column '") + name +
                                 "' has inconsistent length");
        for (double v : series)
            if (!std::isfinite(v))
                throw NumericalError(std::string("non-finite value in trajectory column '") +
                                     name + "'");
    };
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw NumericalError("trajectory times are not strictly increasing");
    for (int s = 0; s < n_sites; ++s) {
        check_series(sx[s], "sx");
        check_series(sy[s], "sy");
        check_series(sz[s], "sz");
    }
    check_series(norm, "norm");
    check_series(energy, "energy");
    check_series(entropy_site1, "entropy1");
    for (const auto& col : occ) check_series(col, "occ");
    for (const auto& col : occ_class) check_series(col, "occ_class");
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_csv(const TrajectoryDataset& data, const std::string& path) {
    data.validate();
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical across runs
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");

    out << "t,site,sx,sy,sz,length,sx_norm,sy_norm,sz_norm,length_norm,norm,energy,entropy1";
    for (const auto& label : data.occ_labels) out << ",occ_" << label;
    for (const auto& label : data.class_labels) out << ",occ_mtot_" << label;
    out << "\n";

    const double s = data.spin_value;
    for (std::size_t k = 0; k < data.n_samples(); ++k) {
        for (int site = 0; site < data.n_sites; ++site) {
            const double len = data.site_length(site, k);
            out << fmt(data.times[k]) << ',' << site + 1 << ',' << fmt(data.sx[site][k]) << ','
                << fmt(data.sy[site][k]) << ',' << fmt(data.sz[site][k]) << ',' << fmt(len)
                << ',' << fmt(data.sx[site][k] / s) << ',' << fmt(data.sy[site][k] / s) << ','
                << fmt(data.sz[site][k] / s) << ',' << fmt(len / s) << ',' << fmt(data.norm[k])
                << ',' << fmt(data.energy[k]) << ',' << fmt(data.entropy_site1[k]);
            for (const auto& col : data.occ) out << ',' << fmt(col[k]);
            for (const auto& col : data.occ_class) out << ',' << fmt(col[k]);
            out << "\n";
        }
    }
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

void write_metadata(const RunMetadata& meta, const std::string& path) {
    nlohmann::json j;
    j["kind"] = meta.kind;
    j["form"] = meta.form;
    j["version"] = meta.version;
    j["system"] = {
        {"N", meta.spec.n_sites},
        {"S", meta.spec.spin.str()},
        {"J", meta.spec.exchange},
        {"Bz", meta.spec.field_z},
        {"lambda", meta.spec.damping},
        {"open_chain", meta.spec.open_chain},
    };
    if (meta.spec.pulse) {
        j["system"]["pulse"] = {
            {"B0x", meta.spec.pulse->amplitude},
            {"t0", meta.spec.pulse->center},
            {"TW", meta.spec.pulse->width},
            {"site", meta.spec.pulse->target_site},
        };
    }
    j["integrator"] = {
        {"scheme", "rk4"},
        {"dt", meta.dt},
        {"sample_every", meta.sample_every},
    };
    j["t_end"] = meta.t_end;
    j["noise"] = {{"D", meta.noise_strength}, {"seed", meta.seed}};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

int CsvTable::column_index(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("'" + path + "' is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    table.columns.resize(table.header.size());

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= table.columns.size())
                throw ConfigError("'" + path + "': too many cells on line " +
                                  std::to_string(line_no));
            // strtod instead of stod: subnormals parse instead of throwing
            char* end = nullptr;
            const double value = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0')
                throw ConfigError("'" + path + "': bad number '" + cell + "' on line " +
                                  std::to_string(line_no));
            table.columns[col].push_back(value);
            ++col;
        }
        if (col != table.columns.size())
            throw ConfigError("'" + path + "': short row on line " + std::to_string(line_no));
    }
    return table;
}

SpinSeries extract_spin_series(const CsvTable& table) {
    const int ct = table.column_index("t");
    const int cs = table.column_index("site");
    const int cx = table.column_index("sx_norm");
    const int cy = table.column_index("sy_norm");
    const int cz = table.column_index("sz_norm");
    const int cl = table.column_index("length");
    const int ce = table.column_index("entropy1");
    if (ct < 0 || cs < 0 || cx < 0 || cy < 0 || cz < 0 || cl < 0)
        throw ConfigError("CSV is missing trajectory columns (t, site, s*_norm, length)");

    int n_sites = 0;
    for (double v : table.columns[cs]) n_sites = std::max(n_sites, static_cast<int>(v));
    if (n_sites < 1) throw ConfigError("CSV has no site rows");
    if (table.n_rows() % n_sites != 0)
        throw ConfigError("CSV row count is not a multiple of the site count");

    SpinSeries series;
    const std::size_t n_samples = table.n_rows() / n_sites;
    series.normalized.assign(n_sites, std::vector<Vec3>(n_samples));
    series.length.assign(n_sites, std::vector<double>(n_samples));
    series.entropy1.assign(1, std::vector<double>(n_samples));
    series.times.resize(n_samples);

    for (std::size_t row = 0; row < table.n_rows(); ++row) {
        const std::size_t sample = row / n_sites;
        const int site = static_cast<int>(table.columns[cs][row]) - 1;
        if (site != static_cast<int>(row % n_sites))
            throw ConfigError("CSV site rows are not in canonical order");
        series.times[sample] = table.columns[ct][row];
        series.normalized[site][sample] =
            Vec3(table.columns[cx][row], table.columns[cy][row], table.columns[cz][row]);
        series.length[site][sample] = table.columns[cl][row];
        if (ce >= 0) series.entropy1[0][sample] = table.columns[ce][row];
    }
    for (std::size_t k = 1; k < series.times.size(); ++k)
        if (!(series.times[k] > series.times[k - 1]))
            throw ConfigError("CSV times are not strictly increasing");
    return series;
}

}  // namespace spinsim
