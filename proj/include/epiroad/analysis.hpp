#pragma once

/// @file analysis.hpp
/// @brief Walk-based landscape statistics: random-walk autocorrelation and
/// correlation length, greedy adaptive walks with local-optimum statistics,
/// and lower/equal/higher neighbour proportions.
///
/// Every walk moves in the operation neighbourhood of genotype.hpp restricted
/// to genotypes no longer than a length cap. Moves that would exceed the cap
/// are rejected and re-drawn, so each step is uniform over feasible moves.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "epiroad/genotype.hpp"
#include "epiroad/landscape.hpp"
#include "epiroad/nk.hpp"
#include "epiroad/random.hpp"

namespace epiroad {

using FitnessSeries = std::vector<double>;

// -- random walks ------------------------------------------------------------------

/// Uniformly random feasible neighbour of g under `cap`.
Edit random_feasible_edit(const Genotype& g, std::size_t n_letters, std::size_t cap, Rng& rng);

/// Fitness series of `length` random steps from `start` (length + 1 values).
/// `cap` defaults to the landscape's lambda_max and may not exceed it.
FitnessSeries random_walk(const Landscape& landscape, Genotype start, std::size_t length, Rng& rng,
                          std::optional<std::size_t> cap = std::nullopt);

/// Random walk on a plain NK instance where each step flips one uniform bit.
FitnessSeries bitflip_random_walk(const NkInstance& nk, BitString start, std::size_t length, Rng& rng);

/// Pooled estimator
///   rho(s) = <(f_t - m)(f_{t+s} - m)> / var(f)
/// where the product average runs over every valid t of every series and the
/// mean m and variance are taken over all pooled values. Empty when the pool
/// has zero variance or no pair at this lag.
std::optional<double> autocorrelation(std::span<const FitnessSeries> pool, std::size_t lag);

/// Mean of per-series estimators, skipping series with zero variance.
/// Diagnostic alternative to the pooled estimator.
std::optional<double> per_walk_autocorrelation(std::span<const FitnessSeries> pool, std::size_t lag);

/// -1 / ln(rho1); empty unless 0 < rho1 < 1.
std::optional<double> correlation_length(double rho1);

// -- adaptive walks ----------------------------------------------------------------

struct AdaptiveWalkResult {
    Genotype final_genotype;
    double final_fitness = 0.0;
    std::size_t length = 0;
};

/// Greedy walk: move to a uniformly chosen fittest neighbour while it is
/// strictly fitter than the current genotype.
AdaptiveWalkResult adaptive_walk(const Landscape& landscape, Genotype start, Rng& rng,
                                 std::optional<std::size_t> cap = std::nullopt);

struct LocalOptimaStats {
    std::size_t walks = 0;
    double mean_fitness = 0.0;
    double std_fitness = 0.0;  // sample standard deviation
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double mean_length = 0.0;
    double est_optima_distance = 0.0;  // twice the mean walk length
};

/// Requires at least two walks.
LocalOptimaStats local_optima_stats(std::span<const AdaptiveWalkResult> walks);

// -- neutrality --------------------------------------------------------------------

struct NeighborCounts {
    std::uint64_t lower = 0;
    std::uint64_t equal = 0;
    std::uint64_t higher = 0;

    std::uint64_t total() const noexcept { return lower + equal + higher; }
    NeighborCounts& operator+=(const NeighborCounts& o) noexcept {
        lower += o.lower;
        equal += o.equal;
        higher += o.higher;
        return *this;
    }
};

struct NeutralityProportions {
    double lower = 0.0;
    double equal = 0.0;
    double higher = 0.0;
};

NeutralityProportions proportions(const NeighborCounts& counts);

/// Classifies every feasible neighbour of g by exact fitness comparison.
NeighborCounts classify_neighbors(const Landscape& landscape, const Genotype& g,
                                  std::optional<std::size_t> cap = std::nullopt);

/// Counts over every state visited by a `length`-step random walk (length + 1 states).
NeighborCounts neutrality_walk(const Landscape& landscape, Genotype start, std::size_t length, Rng& rng,
                               std::optional<std::size_t> cap = std::nullopt);

// -- exhaustive NK checks ----------------------------------------------------------

/// True when x is strictly fitter than each of its N one-bit-flip neighbours.
bool is_local_optimum(const NkInstance& nk, std::uint64_t x);

/// Fraction of the 2^N strings that are one-bit-flip local optima.
double local_optimum_fraction(const NkInstance& nk);

// -- campaigns ---------------------------------------------------------------------

/// Each walk w draws from Rng(derive_seed(seed, w)); results do not depend on `jobs`.
struct RandomWalkCampaign {
    std::size_t walks = 20000;
    std::size_t length = 35;
    std::size_t lambda_max = 0;  // start and walk length bound; 0 means 2*N*b
    std::size_t max_lag = 20;
    std::uint64_t seed = 0;
};

struct RandomWalkReport {
    std::vector<std::optional<double>> rho;  // index = lag, 0..max_lag
    std::optional<double> tau;
    std::size_t steps = 0;
};

struct AdaptiveWalkCampaign {
    std::size_t walks = 2000;
    std::size_t lambda_max = 50;
    std::uint64_t seed = 0;
};

struct AdaptiveWalkReport {
    LocalOptimaStats stats;
    std::vector<AdaptiveWalkResult> walks;
};

struct NeutralityCampaign {
    std::size_t walks = 2000;
    std::size_t length = 20;
    std::size_t lambda_max = 0;  // 0 means 2*N*b
    std::uint64_t seed = 0;
};

struct NeutralityReport {
    NeighborCounts counts;
    NeutralityProportions proportions;
};

/// Bound actually used by a campaign: `requested` (or 2*N*b when 0), clipped
/// to the landscape's lambda_max.
std::size_t campaign_bound(const BlockLandscape& landscape, std::size_t requested);

RandomWalkReport run_random_walks(const BlockLandscape& landscape, const RandomWalkCampaign& c, unsigned jobs = 1);
AdaptiveWalkReport run_adaptive_walks(const BlockLandscape& landscape, const AdaptiveWalkCampaign& c,
                                      unsigned jobs = 1);
NeutralityReport run_neutrality(const BlockLandscape& landscape, const NeutralityCampaign& c, unsigned jobs = 1);

}  // namespace epiroad
