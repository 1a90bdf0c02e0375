#pragma once

/// @file experiment.hpp
/// @brief Experiment driver behind the command-line tool: spec files,
/// landscape generation, analysis and EA campaigns over parameter grids, and
/// named reproduction presets.
///
/// Output layout under the output directory:
///   landscapes/er_n<N>_k<K>_b<b>_i<index>.json
///   analysis_instances.csv, analysis_cells.csv
///   evolve_runs.csv, evolve_cells.csv[, evolve_traces.jsonl]
///   <preset>.csv files written by reproduce

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epiroad/analysis.hpp"
#include "epiroad/ea.hpp"
#include "epiroad/io.hpp"

namespace epiroad {

struct ExperimentSpec {
    std::vector<GridCell> grid;
    std::size_t instances = 10;
    std::uint64_t seed = 0;
    std::size_t lambda_max = 100;  // landscape bound, raised to 2*N*b where needed
    RandomWalkCampaign random_walk{};
    AdaptiveWalkCampaign adaptive_walk{};
    NeutralityCampaign neutrality{.walks = 2000, .length = 20, .lambda_max = 100, .seed = 0};
    bool run_random_walk = true;
    bool run_adaptive_walk = true;
    bool run_neutrality = true;
    EaConfig ea{};
    bool raw_logs = false;
};

/// Grid product of N, K and b lists. In the JSON form "k" may also be "all"
/// (0..N-1) or "half" (0..N/2). Throws std::invalid_argument naming the
/// offending (N, K) pair when K >= N.
std::vector<GridCell> make_grid(std::span<const std::size_t> ns, std::span<const std::size_t> ks,
                                std::span<const std::size_t> bs);

ExperimentSpec spec_from_json(const json& doc);
json to_json(const ExperimentSpec& spec);

/// Hash of the effective spec, embedded in every output file.
std::string spec_hash(const ExperimentSpec& spec);

/// Multiplies walk counts, EA runs and population by `factor` (with small floors).
ExperimentSpec scaled(ExperimentSpec spec, double factor);

/// Landscape bound used by gen and reproduce: max(spec.lambda_max, 2*N*b, ea.max_program_size).
std::size_t landscape_lambda_max(const ExperimentSpec& spec, const GridCell& cell);

std::filesystem::path landscape_path(const std::filesystem::path& out, const GridCell& cell, std::size_t index);

/// Outcome of a command: files written and whether any grid cell failed entirely.
struct CommandStatus {
    std::vector<std::filesystem::path> written;
    std::vector<std::string> errors;
    bool any_cell_failed = false;

    int exit_code() const { return any_cell_failed ? 1 : 0; }
};

CommandStatus cmd_gen(const ExperimentSpec& spec, const std::filesystem::path& out, unsigned jobs);
CommandStatus cmd_analyze(const ExperimentSpec& spec, const std::filesystem::path& out, unsigned jobs);
CommandStatus cmd_evolve(const ExperimentSpec& spec, const std::filesystem::path& out, unsigned jobs);

// -- analysis of one landscape -----------------------------------------------------

struct InstanceAnalysis {
    GridCell cell;
    std::size_t instance_index = 0;
    std::uint64_t instance_seed = 0;
    std::optional<RandomWalkReport> random_walk;
    std::optional<AdaptiveWalkReport> adaptive_walk;
    std::optional<NeutralityReport> neutrality;
    std::string error;  // non-empty when the instance failed
};

struct CellAnalysis {
    GridCell cell;
    std::size_t instances = 0;  // successful instances
    std::size_t failed = 0;
    std::vector<double> rho;  // mean over instances, index = lag
    double tau = NAN;         // mean over instances with a defined tau
    double optima_fitness_mean = NAN;
    double optima_fitness_std = NAN;
    double mean_walk_length = NAN;
    double est_optima_distance = NAN;
    NeutralityProportions neutrality{NAN, NAN, NAN};
};

/// Campaign seeds are derived from the instance seed per stream.
InstanceAnalysis analyze_instance(const ExperimentSpec& spec, const ErLandscape& landscape, const GridCell& cell,
                                  std::size_t index, std::uint64_t seed, unsigned jobs);

CellAnalysis aggregate_cell(const GridCell& cell, std::span<const InstanceAnalysis> instances,
                            std::size_t max_lag);

CsvTable analysis_instance_table(const ExperimentSpec& spec, std::span<const InstanceAnalysis> rows);
CsvTable analysis_cell_table(const ExperimentSpec& spec, std::span<const CellAnalysis> cells);
CsvTable evolve_run_table(const ExperimentSpec& spec, std::span<const RunRecord> runs);
CsvTable evolve_cell_table(const ExperimentSpec& spec, std::span<const CellSummary> cells);

/// Pearson correlation; empty when fewer than two points or zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// -- presets -----------------------------------------------------------------------

/// table1, fig1, fig3, fig5, fig6, fig7, fig8, corr-study.
std::vector<std::string> preset_names();

/// The preset's spec at full size before scaling, seeded with `seed`.
ExperimentSpec preset_spec(const std::string& name, std::uint64_t seed);

/// Runs the preset; writes <out>/<name>*.csv when `out` is non-empty and
/// prints a human-readable report. Throws std::invalid_argument listing the
/// available names for an unknown preset.
CommandStatus cmd_reproduce(const std::string& name, const ExperimentSpec& spec, const std::filesystem::path& out,
                            unsigned jobs, std::ostream& report);

}  // namespace epiroad
