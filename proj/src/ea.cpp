#include "epiroad/ea.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "epiroad/parallel.hpp"

namespace epiroad {

namespace {

constexpr int kCrossoverRedraws = 20;

// Population indexed by fitness so the worst and best are found in O(log M).
// Each fitness value owns a bucket of slots; slot_pos_ locates a slot in its bucket.
class FitnessIndex {
public:
    explicit FitnessIndex(std::span<const double> fitness) : slot_pos_(fitness.size()) {
        for (std::size_t i = 0; i < fitness.size(); ++i) add(i, fitness[i]);
    }

    double worst() const { return buckets_.begin()->first; }
    double best() const { return buckets_.rbegin()->first; }
    std::size_t best_slot() const { return buckets_.rbegin()->second.front(); }

    std::size_t random_worst(Rng& rng) const {
        const auto& slots = buckets_.begin()->second;
        return slots[rng.below(slots.size())];
    }

    bool is_unique_best(std::size_t slot, double f) const {
        return f == best() && buckets_.rbegin()->second.size() == 1 && buckets_.rbegin()->second.front() == slot;
    }

    void replace(std::size_t slot, double old_f, double new_f) {
        remove(slot, old_f);
        add(slot, new_f);
    }

private:
    void add(std::size_t slot, double f) {
        auto& slots = buckets_[f];
        slot_pos_[slot] = slots.size();
        slots.push_back(slot);
    }

    void remove(std::size_t slot, double f) {
        auto it = buckets_.find(f);
        auto& slots = it->second;
        const std::size_t pos = slot_pos_[slot];
        slots[pos] = slots.back();
        slot_pos_[slots[pos]] = pos;
        slots.pop_back();
        if (slots.empty()) buckets_.erase(it);
    }

    std::map<double, std::vector<std::size_t>> buckets_;
    std::vector<std::size_t> slot_pos_;
};

}  // namespace

void EaConfig::validate() const {
    if (population < 2) throw std::invalid_argument("population must hold at least two individuals");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw std::invalid_argument("mutation_rate must be in [0,1]");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
        throw std::invalid_argument("crossover_rate must be in [0,1]");
    if (tournament_size < 1) throw std::invalid_argument("tournament_size must be positive");
    if (max_program_size < max_creation_size)
        throw std::invalid_argument("max_program_size must be at least max_creation_size");
    if (runs < 1 || landscape_instances < 1) throw std::invalid_argument("runs and landscape_instances must be positive");
}

std::vector<Genotype> init_population(const EaConfig& cfg, const Alphabet& alphabet, Rng& rng) {
    std::vector<Genotype> pop;
    pop.reserve(cfg.population);
    for (std::size_t i = 0; i < cfg.population; ++i) pop.push_back(random_genotype(cfg.max_creation_size, alphabet, rng));
    return pop;
}

bool mutate_in_place(Genotype& g, const EaConfig& cfg, const Alphabet& alphabet, Rng& rng) {
    bool insert = false, erase = false, substitute = false;
    if (cfg.independent_mutation) {
        insert = rng.bernoulli(cfg.mutation_rate);
        erase = rng.bernoulli(cfg.mutation_rate);
        substitute = rng.bernoulli(cfg.mutation_rate);
    } else {
        insert = erase = substitute = rng.bernoulli(cfg.mutation_rate);
    }
    const std::size_t n = alphabet.size();
    if (insert && g.size() < cfg.max_program_size)
        g.insert(rng.below(g.size() + 1), static_cast<Letter>(rng.below(n)));
    if (erase && !g.empty()) g.erase(rng.below(g.size()));
    if (substitute && !g.empty()) g.substitute(rng.below(g.size()), static_cast<Letter>(rng.below(n)));
    return insert || erase || substitute;
}

Genotype mutate(Genotype g, const EaConfig& cfg, const Alphabet& alphabet, Rng& rng) {
    mutate_in_place(g, cfg, alphabet, rng);
    return g;
}

std::pair<Genotype, Genotype> one_point_crossover(const Genotype& a, const Genotype& b, const EaConfig& cfg,
                                                  Rng& rng) {
    if (!rng.bernoulli(cfg.crossover_rate)) return {a, b};
    const auto sa = a.symbols();
    const auto sb = b.symbols();
    for (int attempt = 0; attempt < kCrossoverRedraws; ++attempt) {
        const std::size_t cut_a = rng.below(sa.size() + 1);
        const std::size_t cut_b = rng.below(sb.size() + 1);
        const std::size_t len1 = cut_a + (sb.size() - cut_b);
        const std::size_t len2 = cut_b + (sa.size() - cut_a);
        if (len1 > cfg.max_program_size || len2 > cfg.max_program_size) continue;
        std::vector<Letter> c1(sa.begin(), sa.begin() + static_cast<std::ptrdiff_t>(cut_a));
        c1.insert(c1.end(), sb.begin() + static_cast<std::ptrdiff_t>(cut_b), sb.end());
        std::vector<Letter> c2(sb.begin(), sb.begin() + static_cast<std::ptrdiff_t>(cut_b));
        c2.insert(c2.end(), sa.begin() + static_cast<std::ptrdiff_t>(cut_a), sa.end());
        return {Genotype(std::move(c1)), Genotype(std::move(c2))};
    }
    return {a, b};
}

std::size_t tournament_select(std::span<const double> fitness, std::size_t k, Rng& rng) {
    if (fitness.empty()) throw std::invalid_argument("tournament on an empty population");
    if (k == 0) throw std::invalid_argument("tournament size must be positive");
    std::size_t winner = rng.below(fitness.size());
    std::uint64_t ties = 1;
    for (std::size_t draw = 1; draw < k; ++draw) {
        const std::size_t c = rng.below(fitness.size());
        if (fitness[c] > fitness[winner]) {
            winner = c;
            ties = 1;
        } else if (fitness[c] == fitness[winner] && rng.below(++ties) == 0) {
            winner = c;
        }
    }
    return winner;
}

RunResult run(const EaConfig& cfg, const ErLandscape& landscape) {
    cfg.validate();
    if (cfg.max_program_size > landscape.lambda_max())
        throw std::invalid_argument("max_program_size exceeds the landscape's lambda_max");
    const Alphabet alphabet(landscape.alphabet_size());
    Rng rng(cfg.seed);

    std::vector<Genotype> pop = init_population(cfg, alphabet, rng);
    std::vector<double> fitness(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) fitness[i] = landscape.fitness_unchecked(pop[i]);
    FitnessIndex index(fitness);

    RunResult result;
    result.best_fitness_trace.reserve(cfg.generations + 1);
    result.best_blocks_trace.reserve(cfg.generations + 1);
    auto record = [&](std::size_t generation) {
        result.best_fitness_trace.push_back(index.best());
        result.best_blocks_trace.push_back(block_count(landscape.blocks(pop[index.best_slot()])));
        if (!result.success && landscape.is_success(index.best())) {
            result.success = true;
            result.generations_to_success = generation;
        }
    };

    auto offer = [&](Genotype&& child) {
        const double f = landscape.fitness_unchecked(child);
        std::size_t victim;
        if (cfg.elitism) {
            if (f < index.worst()) return;
            victim = index.random_worst(rng);
            if (index.is_unique_best(victim, fitness[victim]) && f < fitness[victim]) return;
        } else {
            victim = rng.below(pop.size());
        }
        index.replace(victim, fitness[victim], f);
        fitness[victim] = f;
        pop[victim] = std::move(child);
    };

    record(0);
    const std::size_t events = (cfg.population + 1) / 2;
    for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
        if (result.success && cfg.stop_on_success) {
            result.best_fitness_trace.push_back(result.best_fitness_trace.back());
            result.best_blocks_trace.push_back(result.best_blocks_trace.back());
            continue;
        }
        for (std::size_t e = 0; e < events; ++e) {
            const std::size_t pa = tournament_select(fitness, cfg.tournament_size, rng);
            const std::size_t pb = tournament_select(fitness, cfg.tournament_size, rng);
            auto [c1, c2] = one_point_crossover(pop[pa], pop[pb], cfg, rng);
            mutate_in_place(c1, cfg, alphabet, rng);
            mutate_in_place(c2, cfg, alphabet, rng);
            offer(std::move(c1));
            // An odd population gets one child from its last event.
            if (2 * e + 1 < cfg.population) offer(std::move(c2));
        }
        record(gen);
    }
    return result;
}

std::size_t ea_lambda_max(const EaConfig& cfg, const GridCell& cell) {
    return std::max(cfg.max_program_size, cell.n * cell.b);
}

std::uint64_t run_seed(std::uint64_t instance_seed, std::size_t run_index) {
    return derive_seed(derive_seed(instance_seed, Stream::evolution), run_index);
}

CellSummary summarize(const GridCell& cell, std::span<const RunRecord> runs) {
    CellSummary s;
    s.cell = cell;
    for (const auto& r : runs) {
        if (!(r.cell == cell)) continue;
        ++s.runs;
        s.successes += r.result.success ? 1 : 0;
        s.mean_final_blocks += r.result.final_blocks();
        const auto& trace = r.result.best_blocks_trace;
        if (s.mean_blocks_trace.size() < trace.size()) s.mean_blocks_trace.resize(trace.size(), 0.0);
        for (std::size_t g = 0; g < trace.size(); ++g) s.mean_blocks_trace[g] += trace[g];
    }
    if (s.runs > 0) {
        const double count = static_cast<double>(s.runs);
        s.success_rate = static_cast<double>(s.successes) / count;
        s.mean_final_blocks /= count;
        for (auto& v : s.mean_blocks_trace) v /= count;
    }
    return s;
}

std::vector<RunRecord> run_on(std::span<const LandscapeRef> landscapes, const EaConfig& cfg, unsigned jobs) {
    cfg.validate();
    std::vector<RunRecord> runs;
    runs.reserve(landscapes.size() * cfg.runs);
    for (const auto& ref : landscapes)
        for (std::size_t r = 0; r < cfg.runs; ++r) runs.push_back({ref.cell, ref.instance_index, ref.instance_seed, r, {}});
    parallel_for(runs.size(), jobs, [&](std::size_t j) {
        auto& rec = runs[j];
        EaConfig run_cfg = cfg;
        run_cfg.seed = run_seed(rec.instance_seed, rec.run_index);
        rec.result = run(run_cfg, *landscapes[j / cfg.runs].landscape);
    });
    return runs;
}

ExperimentResult experiment(std::span<const GridCell> grid, const EaConfig& cfg, unsigned jobs) {
    cfg.validate();
    const std::size_t per_cell = cfg.landscape_instances;
    std::vector<std::optional<ErLandscape>> built(grid.size() * per_cell);
    parallel_for(built.size(), jobs, [&](std::size_t j) {
        const auto& cell = grid[j / per_cell];
        built[j].emplace(ErLandscape::build(cell.n, cell.k, cell.b, ea_lambda_max(cfg, cell),
                                            instance_seed(cfg.seed, cell, j % per_cell)));
    });
    std::vector<LandscapeRef> refs;
    for (std::size_t j = 0; j < built.size(); ++j) {
        const auto& cell = grid[j / per_cell];
        refs.push_back({cell, j % per_cell, instance_seed(cfg.seed, cell, j % per_cell), &*built[j]});
    }
    ExperimentResult out;
    out.runs = run_on(refs, cfg, jobs);
    for (const auto& cell : grid) out.cells.push_back(summarize(cell, out.runs));
    return out;
}

}  // namespace epiroad
