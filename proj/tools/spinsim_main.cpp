// spinsim: damped quantum spin dynamics next to its classical LL/LLG limit.
//
// Subcommands:
//   run      integrate a scenario (preset or config file) and write CSV
//   compare  pointwise deviation between two trajectory CSVs
//   entropy  site-1 entanglement entropy table of a dataset directory

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "spinsim/config.hpp"
#include "spinsim/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDimension = 3;
constexpr int kExitNumerical = 4;

int run_command(const std::string& config_path, const std::string& preset_name,
                bool classical, const std::string& out_dir, bool has_seed,
                std::uint64_t seed) {
    spinsim::ScenarioConfig config =
        config_path.empty() ? spinsim::preset(preset_name)
                            : spinsim::load_config_file(config_path);
    if (has_seed) config.noise.seed = seed;

    const std::string csv = spinsim::run_scenario(config, out_dir, classical);
    std::printf("wrote %s (%s, form=%s, N=%d, S=%s, t_end=%g, dt=%g)\n", csv.c_str(),
                classical ? "classical" : "quantum", spinsim::form_name(config.form).c_str(),
                config.system.n_sites, config.system.spin.str().c_str(), config.t_end,
                config.integrator.dt);
    return 0;
}

int compare_command(const std::string& csv_a, const std::string& csv_b,
                    const std::string& out_path) {
    const spinsim::ComparisonReport report = spinsim::compare_trajectories(csv_a, csv_b);
    std::printf("compared %zu points\n", report.n_points);
    std::printf("max deviation   : %.6e (site %d, t = %.6g)\n", report.max_deviation,
                report.site_of_max, report.time_of_max);
    for (std::size_t k = 0; k < report.per_site_max.size(); ++k)
        std::printf("site %zu max     : %.6e\n", k + 1, report.per_site_max[k]);
    std::printf("rms per component: (%.6e, %.6e, %.6e)\n", report.rms_deviation[0],
                report.rms_deviation[1], report.rms_deviation[2]);
    spinsim::write_comparison(report, out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int entropy_command(const std::string& dataset_dir) {
    const spinsim::EntropyReport report = spinsim::entropy_report(dataset_dir);
    std::printf("t,entropy1_bits\n");
    for (std::size_t k = 0; k < report.times.size(); ++k)
        std::printf("%.17g,%.17g\n", report.times[k], report.entropy[k]);
    std::fprintf(stderr, "max entropy %.6g bits at t = %.6g\n", report.max_entropy,
                 report.time_of_max_entropy);
    std::fprintf(stderr, "min spin length %.6g at t = %.6g\n", report.min_length,
                 report.time_of_min_length);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinsim: quantum spin dynamics with LL/LLG damping"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir = ".";
    bool classical = false;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "integrate a scenario and write CSV output");
    auto* config_opt = run->add_option("--config", config_path, "config file (key = value)");
    auto* preset_opt =
        run->add_option("--preset", preset_name, "built-in preset: fig1, fig2 or fig3");
    run->add_flag("--classical", classical, "integrate the classical LL/LLG chain instead");
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
    config_opt->excludes(preset_opt);
    preset_opt->excludes(config_opt);

    std::string csv_a, csv_b, compare_out = "compare.json";
    auto* compare = app.add_subcommand("compare", "deviation report between two CSVs");
    compare->add_option("a", csv_a, "first trajectory CSV")->required();
    compare->add_option("b", csv_b, "second trajectory CSV")->required();
    compare->add_option("--out", compare_out, "summary JSON path")->capture_default_str();

    std::string dataset_dir;
    auto* entropy = app.add_subcommand("entropy", "site-1 entropy table of a dataset dir");
    entropy->add_option("dir", dataset_dir, "directory containing quantum.csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (config_path.empty() && preset_name.empty())
                throw spinsim::ConfigError("run needs --config or --preset");
            return run_command(config_path, preset_name, classical, out_dir,
                               seed_opt->count() > 0, seed);
        }
        if (compare->parsed()) return compare_command(csv_a, csv_b, compare_out);
        if (entropy->parsed()) return entropy_command(dataset_dir);
    } catch (const spinsim::ConfigError& err) {
        std::fprintf(stderr, "spinsim: config error: %s\n", err.what());
        return kExitConfig;
    } catch (const spinsim::DimensionError& err) {
        std::fprintf(stderr, "spinsim: dimension error: %s\n", err.what());
        return kExitDimension;
    } catch (const spinsim::NumericalError& err) {
        std::fprintf(stderr, "spinsim: numerical error: %s\n", err.what());
        return kExitNumerical;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "spinsim: error: %s\n", err.what());
        return 1;
    }
    return 0;
}
