#pragma once

// Configuration-driven experiments that write CSV/JSON artifacts.

#include "nadyn/evolve.hpp"
#include "nadyn/model.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nadyn {

enum class Mode { gap, sweep, predict, fit, grover, reproduce_figure };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);

enum class Spacing { linear, log };

struct TauGrid {
    double min = 10.0;
    double max = 100.0;
    std::size_t count = 91;
    Spacing spacing = Spacing::linear;

    void validate() const;
    std::vector<double> values() const;
};

struct FitSettings {
    bool vary_v = false;
    // Existing sweep CSV to fit; empty means generate the sweep inline.
    std::string sweep_csv;
    // Fixed A for predict mode when the model has an avoided crossing.
    std::optional<double> A;
};

struct ExperimentConfig {
    Mode mode = Mode::gap;
    ModelSpec model;
    std::size_t s_grid = 1025;
    TauGrid tau_grid;
    EvolutionConfig evolution;
    std::string outputs = "out";
    std::string figure; // reproduce-figure only
    FitSettings fit;
    std::size_t threads = 0; // not part of the snapshot

    void validate() const;

    // Parses a JSON document; absent keys keep their defaults, unknown keys
    // are rejected. Throws ValidationError.
    static ExperimentConfig from_json(std::string_view text);
    // Snapshot with every field explicit.
    std::string to_json() const;
    // FNV-1a of the snapshot without the output directory.
    std::string hash() const;
};

struct RunSummary {
    std::vector<std::filesystem::path> files;
};

RunSummary run_experiment(const ExperimentConfig& cfg);
RunSummary run_gap(const ExperimentConfig& cfg);
RunSummary run_sweep(const ExperimentConfig& cfg);
RunSummary run_predict(const ExperimentConfig& cfg);
RunSummary run_fit(const ExperimentConfig& cfg);
RunSummary run_grover(const ExperimentConfig& cfg);
RunSummary run_reproduce_figure(const ExperimentConfig& cfg);

std::vector<std::string> figure_names();

// Reads "tau,p_transition[,...]" rows, skipping '#' comment lines.
void read_sweep_csv(const std::filesystem::path& path, std::vector<double>& taus,
                    std::vector<double>& probs);

} // namespace nadyn
