// nadyn: run gap, sweep, prediction and fit experiments from a JSON config.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#include "nadyn/errors.hpp"
#include "nadyn/experiment.hpp"
#include "nadyn/io.hpp"
#include "nadyn/parallel.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kValidationExit = 1;
constexpr int kNumericalExit = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw nadyn::ValidationError("cannot read config '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adiabatic evolution spectra, sweeps and oscillation fits"};
    app.set_version_flag("--version", std::string(nadyn::io::tool_version()));

    std::string config_path;
    std::string mode;
    std::string out_dir;
    std::string figure;
    std::size_t threads = 0;
    app.add_option("--config", config_path, "JSON experiment config");
    app.add_option("--mode", mode, "gap | sweep | predict | fit | grover | reproduce-figure");
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--threads", threads, "worker threads (default: NADYN_THREADS or all cores)");
    app.add_option("--figure", figure, "figure recipe: fig3 ... fig10");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kValidationExit;
    }

    try {
        nadyn::ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = nadyn::ExperimentConfig::from_json(read_file(config_path));
        } else if (mode.empty() && figure.empty()) {
            throw nadyn::ValidationError("nothing to do: pass --config, --mode or --figure");
        }
        if (!figure.empty()) {
            cfg.figure = figure;
            if (mode.empty()) cfg.mode = nadyn::Mode::reproduce_figure;
        }
        if (!mode.empty()) cfg.mode = nadyn::parse_mode(mode);
        if (!out_dir.empty()) cfg.outputs = out_dir;
        if (threads > 0) {
            cfg.threads = threads;
            nadyn::set_default_thread_count(threads);
        }
        const nadyn::RunSummary summary = nadyn::run_experiment(cfg);
        for (const auto& path : summary.files) {
            std::cout << path.string() << '\n';
        }
        return 0;
    } catch (const nadyn::ValidationError& e) {
        std::cerr << "nadyn: invalid input: " << e.what() << '\n';
        return kValidationExit;
    } catch (const nadyn::NumericalError& e) {
        std::cerr << "nadyn: numerical failure: " << e.what() << '\n';
        return kNumericalExit;
    } catch (const std::exception& e) {
        std::cerr << "nadyn: " << e.what() << '\n';
        return kNumericalExit;
    }
}
