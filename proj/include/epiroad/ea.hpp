#pragma once

/// @file ea.hpp
/// @brief Steady-state variable-length evolutionary algorithm with one-point
/// crossover, insertion/deletion/substitution mutation and k-tournament
/// selection, plus the grid experiment that aggregates its runs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "epiroad/genotype.hpp"
#include "epiroad/landscape.hpp"
#include "epiroad/random.hpp"

namespace epiroad {

struct EaConfig {
    std::size_t population = 1000;
    std::size_t generations = 400;
    double mutation_rate = 0.9;
    double crossover_rate = 0.3;
    std::size_t tournament_size = 4;
    std::size_t max_creation_size = 50;
    std::size_t max_program_size = 100;
    bool elitism = true;
    std::size_t runs = 35;
    std::size_t landscape_instances = 10;
    std::uint64_t seed = 0;
    // Draw a separate Bernoulli(mutation_rate) for each of the three edits.
    bool independent_mutation = false;
    // Once the optimum is held the best individual cannot change, so the
    // remaining trace entries are filled without simulating.
    bool stop_on_success = true;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

struct RunResult {
    std::vector<double> best_fitness_trace;  // generations + 1 entries
    std::vector<int> best_blocks_trace;
    bool success = false;
    std::optional<std::size_t> generations_to_success;

    int final_blocks() const { return best_blocks_trace.empty() ? 0 : best_blocks_trace.back(); }
};

std::vector<Genotype> init_population(const EaConfig& cfg, const Alphabet& alphabet, Rng& rng);

/// Applies the insertion, deletion and substitution edits in that order when
/// the mutation gate fires. Insertion is skipped at max_program_size, the
/// other two on an empty genotype. Returns whether any gate fired.
bool mutate_in_place(Genotype& g, const EaConfig& cfg, const Alphabet& alphabet, Rng& rng);

Genotype mutate(Genotype g, const EaConfig& cfg, const Alphabet& alphabet, Rng& rng);

/// With probability crossover_rate swaps tails at independent uniform cut
/// points; over-long children trigger up to 20 re-draws, after which (and
/// when crossover is not applied) copies of the parents are returned.
std::pair<Genotype, Genotype> one_point_crossover(const Genotype& a, const Genotype& b, const EaConfig& cfg,
                                                  Rng& rng);

/// Index of the fittest of k uniform draws with replacement; ties are broken
/// uniformly among the tied draws.
std::size_t tournament_select(std::span<const double> fitness, std::size_t k, Rng& rng);

/// One run from Rng(cfg.seed). A generation is `population` offspring
/// evaluations: population/2 events, each selecting two parents, applying
/// crossover then mutation, and offering both children for replacement of
/// the current worst individual.
RunResult run(const EaConfig& cfg, const ErLandscape& landscape);

// -- experiment --------------------------------------------------------------------

struct RunRecord {
    GridCell cell;
    std::size_t instance_index = 0;
    std::uint64_t instance_seed = 0;
    std::size_t run_index = 0;
    RunResult result;
};

struct CellSummary {
    GridCell cell;
    std::size_t runs = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    double mean_final_blocks = 0.0;
    std::vector<double> mean_blocks_trace;
};

struct ExperimentResult {
    std::vector<RunRecord> runs;
    std::vector<CellSummary> cells;
};

/// Landscape length bound used for EA runs: max(max_program_size, N*b).
std::size_t ea_lambda_max(const EaConfig& cfg, const GridCell& cell);

/// Seed of run `run_index` on the landscape built from `instance_seed`.
std::uint64_t run_seed(std::uint64_t instance_seed, std::size_t run_index);

/// A landscape instance taking part in an experiment.
struct LandscapeRef {
    GridCell cell;
    std::size_t instance_index = 0;
    std::uint64_t instance_seed = 0;
    const ErLandscape* landscape = nullptr;
};

/// cfg.runs runs on each landscape; run r on an instance uses run_seed(instance_seed, r).
std::vector<RunRecord> run_on(std::span<const LandscapeRef> landscapes, const EaConfig& cfg, unsigned jobs = 1);

/// For every cell: cfg.landscape_instances landscapes from
/// instance_seed(cfg.seed, cell, i), cfg.runs runs on each.
ExperimentResult experiment(std::span<const GridCell> grid, const EaConfig& cfg, unsigned jobs = 1);

CellSummary summarize(const GridCell& cell, std::span<const RunRecord> runs);

}  // namespace epiroad
