#include "epiroad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "epiroad/parallel.hpp"

namespace epiroad {

namespace {

std::size_t resolve_cap(const Landscape& landscape, std::optional<std::size_t> cap) {
    const std::size_t c = cap.value_or(landscape.lambda_max());
    if (c > landscape.lambda_max())
        throw std::invalid_argument("walk length cap " + std::to_string(c) + " exceeds lambda_max " +
                                    std::to_string(landscape.lambda_max()));
    return c;
}

void check_start(const Landscape& landscape, const Genotype& start, std::size_t cap) {
    if (start.size() > cap)
        throw std::invalid_argument("walk start of length " + std::to_string(start.size()) +
                                    " exceeds the length cap " + std::to_string(cap));
    if (!start.valid_over(Alphabet(landscape.alphabet_size())))
        throw std::invalid_argument("walk start uses letters outside the alphabet");
}

// Index range [first, total) of the operations that keep the length within cap.
std::size_t first_feasible(const Genotype& g, std::size_t n_letters, std::size_t cap) {
    return g.size() >= cap ? insertion_count(g.size(), n_letters) : 0;
}

// Fitness of every feasible neighbour of g, in operation-index order.
// Block landscapes go through NeighborBlockMasks; others materialize each neighbour.
template <typename Visit>
void for_each_feasible_neighbor(const Landscape& landscape, const Genotype& g, std::size_t cap, Visit&& visit) {
    const std::size_t n = landscape.alphabet_size();
    const std::size_t total = neighborhood_size(g.size(), n);
    const std::size_t first = first_feasible(g, n, cap);
    if (const auto* blocks = dynamic_cast<const BlockLandscape*>(&landscape)) {
        const NeighborBlockMasks masks(g, n, blocks->params().block_size);
        for (std::size_t i = first; i < total; ++i) visit(i, blocks->fitness_of_blocks(masks(neighbor_edit(g, n, i))));
        return;
    }
    Genotype scratch;
    for (std::size_t i = first; i < total; ++i) {
        apply_edit_into(g, neighbor_edit(g, n, i), scratch);
        visit(i, landscape.fitness_unchecked(scratch));
    }
}

}  // namespace

Edit random_feasible_edit(const Genotype& g, std::size_t n_letters, std::size_t cap, Rng& rng) {
    const std::size_t total = neighborhood_size(g.size(), n_letters);
    const std::size_t first = first_feasible(g, n_letters, cap);
    if (first >= total) throw std::invalid_argument("no feasible neighbour under a zero length cap");
    // Drawing from the feasible range is the same as re-drawing rejected insertions.
    return neighbor_edit(g, n_letters, first + rng.below(total - first));
}

FitnessSeries random_walk(const Landscape& landscape, Genotype start, std::size_t length, Rng& rng,
                          std::optional<std::size_t> cap) {
    const std::size_t bound = resolve_cap(landscape, cap);
    check_start(landscape, start, bound);
    FitnessSeries series;
    series.reserve(length + 1);
    series.push_back(landscape.fitness_unchecked(start));
    Genotype next;
    for (std::size_t t = 0; t < length; ++t) {
        apply_edit_into(start, random_feasible_edit(start, landscape.alphabet_size(), bound, rng), next);
        std::swap(start, next);
        series.push_back(landscape.fitness_unchecked(start));
    }
    return series;
}

FitnessSeries bitflip_random_walk(const NkInstance& nk, BitString start, std::size_t length, Rng& rng) {
    if (start.size() != nk.n()) throw std::invalid_argument("walk start length does not match N");
    FitnessSeries series;
    series.reserve(length + 1);
    std::uint64_t x = start.packed();
    series.push_back(nk.evaluate(x));
    for (std::size_t t = 0; t < length; ++t) {
        x ^= std::uint64_t{1} << rng.below(nk.n());
        series.push_back(nk.evaluate(x));
    }
    return series;
}

std::optional<double> autocorrelation(std::span<const FitnessSeries> pool, std::size_t lag) {
    double sum = 0.0;
    std::size_t count = 0;
    std::size_t pairs = 0;
    for (const auto& series : pool) {
        for (double f : series) sum += f;
        count += series.size();
        if (series.size() > lag) pairs += series.size() - lag;
    }
    if (count == 0 || pairs == 0) return std::nullopt;
    const double mean = sum / static_cast<double>(count);
    double variance = 0.0;
    double product = 0.0;
    for (const auto& series : pool) {
        for (double f : series) variance += (f - mean) * (f - mean);
        for (std::size_t t = 0; t + lag < series.size(); ++t) product += (series[t] - mean) * (series[t + lag] - mean);
    }
    variance /= static_cast<double>(count);
    if (!(variance > 0.0)) return std::nullopt;
    if (lag == 0) return 1.0;
    return product / static_cast<double>(pairs) / variance;
}

std::optional<double> per_walk_autocorrelation(std::span<const FitnessSeries> pool, std::size_t lag) {
    double total = 0.0;
    std::size_t used = 0;
    for (const auto& series : pool) {
        if (auto r = autocorrelation(std::span<const FitnessSeries>(&series, 1), lag)) {
            total += *r;
            ++used;
        }
    }
    if (used == 0) return std::nullopt;
    return total / static_cast<double>(used);
}

std::optional<double> correlation_length(double rho1) {
    if (!(rho1 > 0.0 && rho1 < 1.0)) return std::nullopt;
    return -1.0 / std::log(rho1);
}

AdaptiveWalkResult adaptive_walk(const Landscape& landscape, Genotype start, Rng& rng,
                                 std::optional<std::size_t> cap) {
    const std::size_t bound = resolve_cap(landscape, cap);
    check_start(landscape, start, bound);
    const std::size_t n = landscape.alphabet_size();
    double current = landscape.fitness_unchecked(start);
    std::size_t moves = 0;
    for (;;) {
        double best = -INFINITY;
        std::size_t best_index = 0;
        std::uint64_t ties = 0;
        for_each_feasible_neighbor(landscape, start, bound, [&](std::size_t i, double f) {
            if (f > best) {
                best = f;
                best_index = i;
                ties = 1;
            } else if (f == best && rng.below(++ties) == 0) {
                best_index = i;
            }
        });
        if (!(best > current)) break;
        start = apply_edit(start, neighbor_edit(start, n, best_index));
        current = best;
        ++moves;
    }
    return {std::move(start), current, moves};
}

LocalOptimaStats local_optima_stats(std::span<const AdaptiveWalkResult> walks) {
    if (walks.size() < 2) throw std::invalid_argument("local optima statistics need at least two walks");
    const double count = static_cast<double>(walks.size());
    LocalOptimaStats s;
    s.walks = walks.size();
    double length_sum = 0.0;
    for (const auto& w : walks) {
        s.mean_fitness += w.final_fitness;
        length_sum += static_cast<double>(w.length);
    }
    s.mean_fitness /= count;
    s.mean_length = length_sum / count;
    s.est_optima_distance = 2.0 * s.mean_length;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const auto& w : walks) {
        const double d = w.final_fitness - s.mean_fitness;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    s.std_fitness = std::sqrt(m2 / (count - 1.0));
    m2 /= count;
    m3 /= count;
    m4 /= count;
    if (m2 > 0.0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return s;
}

NeutralityProportions proportions(const NeighborCounts& counts) {
    const auto total = counts.total();
    if (total == 0) return {};
    const double t = static_cast<double>(total);
    return {static_cast<double>(counts.lower) / t, static_cast<double>(counts.equal) / t,
            static_cast<double>(counts.higher) / t};
}

NeighborCounts classify_neighbors(const Landscape& landscape, const Genotype& g, std::optional<std::size_t> cap) {
    const std::size_t bound = resolve_cap(landscape, cap);
    check_start(landscape, g, bound);
    const double here = landscape.fitness_unchecked(g);
    NeighborCounts counts;
    for_each_feasible_neighbor(landscape, g, bound, [&](std::size_t, double f) {
        if (f < here) ++counts.lower;
        else if (f == here) ++counts.equal;
        else ++counts.higher;
    });
    return counts;
}

NeighborCounts neutrality_walk(const Landscape& landscape, Genotype start, std::size_t length, Rng& rng,
                               std::optional<std::size_t> cap) {
    const std::size_t bound = resolve_cap(landscape, cap);
    NeighborCounts counts = classify_neighbors(landscape, start, bound);
    Genotype next;
    for (std::size_t t = 0; t < length; ++t) {
        apply_edit_into(start, random_feasible_edit(start, landscape.alphabet_size(), bound, rng), next);
        std::swap(start, next);
        counts += classify_neighbors(landscape, start, bound);
    }
    return counts;
}

bool is_local_optimum(const NkInstance& nk, std::uint64_t x) {
    const double f = nk.evaluate(x);
    for (std::size_t i = 0; i < nk.n(); ++i)
        if (!(f > nk.evaluate(x ^ (std::uint64_t{1} << i)))) return false;
    return true;
}

double local_optimum_fraction(const NkInstance& nk) {
    if (nk.n() > kExhaustiveMaxN) throw std::invalid_argument("exhaustive scan limited to N <= 24");
    const std::uint64_t space = std::uint64_t{1} << nk.n();
    std::vector<double> f(space);
    for (std::uint64_t x = 0; x < space; ++x) f[x] = nk.evaluate(x);
    std::uint64_t optima = 0;
    for (std::uint64_t x = 0; x < space; ++x) {
        bool local = true;
        for (std::size_t i = 0; i < nk.n() && local; ++i) local = f[x] > f[x ^ (std::uint64_t{1} << i)];
        optima += local;
    }
    return static_cast<double>(optima) / static_cast<double>(space);
}

std::size_t campaign_bound(const BlockLandscape& landscape, std::size_t requested) {
    const auto& p = landscape.params();
    const std::size_t want = requested ? requested : 2 * p.n_letters * p.block_size;
    return std::min(want, landscape.lambda_max());
}

RandomWalkReport run_random_walks(const BlockLandscape& landscape, const RandomWalkCampaign& c, unsigned jobs) {
    if (c.walks == 0 || c.length == 0) throw std::invalid_argument("random walk campaign needs walks and steps");
    const std::size_t bound = campaign_bound(landscape, c.lambda_max);
    const Alphabet alphabet(landscape.alphabet_size());
    std::vector<FitnessSeries> pool(c.walks);
    parallel_for(c.walks, jobs, [&](std::size_t w) {
        Rng rng(derive_seed(c.seed, w));
        pool[w] = random_walk(landscape, random_genotype(bound, alphabet, rng), c.length, rng, bound);
    });
    RandomWalkReport report;
    report.steps = c.walks * c.length;
    for (std::size_t s = 0; s <= c.max_lag; ++s) report.rho.push_back(autocorrelation(pool, s));
    if (c.max_lag >= 1 && report.rho[1]) report.tau = correlation_length(*report.rho[1]);
    return report;
}

AdaptiveWalkReport run_adaptive_walks(const BlockLandscape& landscape, const AdaptiveWalkCampaign& c,
                                      unsigned jobs) {
    if (c.walks < 2) throw std::invalid_argument("adaptive walk campaign needs at least two walks");
    const std::size_t bound = campaign_bound(landscape, c.lambda_max);
    const Alphabet alphabet(landscape.alphabet_size());
    AdaptiveWalkReport report;
    report.walks.resize(c.walks);
    parallel_for(c.walks, jobs, [&](std::size_t w) {
        Rng rng(derive_seed(c.seed, w));
        report.walks[w] = adaptive_walk(landscape, random_genotype(bound, alphabet, rng), rng, bound);
    });
    report.stats = local_optima_stats(report.walks);
    return report;
}

NeutralityReport run_neutrality(const BlockLandscape& landscape, const NeutralityCampaign& c, unsigned jobs) {
    if (c.walks == 0) throw std::invalid_argument("neutrality campaign needs at least one walk");
    const std::size_t bound = campaign_bound(landscape, c.lambda_max);
    const Alphabet alphabet(landscape.alphabet_size());
    std::vector<NeighborCounts> per_walk(c.walks);
    parallel_for(c.walks, jobs, [&](std::size_t w) {
        Rng rng(derive_seed(c.seed, w));
        per_walk[w] = neutrality_walk(landscape, random_genotype(bound, alphabet, rng), c.length, rng, bound);
    });
    NeutralityReport report;
    for (const auto& counts : per_walk) report.counts += counts;
    report.proportions = proportions(report.counts);
    return report;
}

}  // namespace epiroad
