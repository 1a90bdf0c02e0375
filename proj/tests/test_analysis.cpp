#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "epiroad/analysis.hpp"

using namespace epiroad;

namespace {

class ConstantLandscape final : public BlockLandscape {
public:
    using BlockLandscape::BlockLandscape;
    double fitness_of_blocks(BlockMask) const override { return 0.5; }
};

// Pooled autocorrelation written directly from its definition.
double pooled_rho(const std::vector<FitnessSeries>& pool, std::size_t s) {
    double sum = 0, count = 0;
    for (const auto& w : pool)
        for (double f : w) {
            sum += f;
            ++count;
        }
    const double mean = sum / count;
    double var = 0;
    for (const auto& w : pool)
        for (double f : w) var += (f - mean) * (f - mean);
    var /= count;
    double prod = 0, pairs = 0;
    for (const auto& w : pool)
        for (std::size_t t = 0; t + s < w.size(); ++t) {
            prod += (w[t] - mean) * (w[t + s] - mean);
            ++pairs;
        }
    return prod / pairs / var;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("random walk basics") {
    const auto er = ErLandscape::build(6, 2, 2, 24, 1);
    Rng rng(1);
    const Genotype start = random_genotype(24, Alphabet(6), rng);
    const auto w0 = random_walk(er, start, 0, rng);
    REQUIRE(w0.size() == 1);
    CHECK(w0[0] == er.fitness(start));
    CHECK(random_walk(er, start, 35, rng).size() == 36);
    CHECK_THROWS_AS(random_walk(er, start, 5, rng, 25), std::invalid_argument);

    const ConstantLandscape flat({2, 6, 24});
    for (double f : random_walk(flat, start, 50, rng)) CHECK(f == 0.5);

    const RoyalRoadLandscape rr({1, 1, 3});
    for (int i = 0; i < 50; ++i)
        for (double f : random_walk(rr, Genotype{}, 30, rng)) CHECK((f == 0.0 || f == 1.0));
}

TEST_CASE("walks respect the length cap and draw uniformly over feasible moves") {
    Rng rng(3);
    const Genotype full(std::vector<Letter>(5, 1));
    std::size_t deletions = 0, total = 20000;
    for (std::size_t i = 0; i < total; ++i) {
        const Edit e = random_feasible_edit(full, 3, 5, rng);
        CHECK(e.kind != EditKind::insertion);
        deletions += e.kind == EditKind::deletion;
    }
    // 5 deletions and 10 substitutions remain feasible at the cap.
    const double p = 5.0 / 15.0, se = std::sqrt(p * (1 - p) / total);
    CHECK(std::abs(deletions / double(total) - p) < 3 * se);
}

TEST_CASE("autocorrelation estimator") {
    Rng rng(5);
    std::vector<FitnessSeries> pool(50);
    for (auto& w : pool) {
        double x = rng.uniform01();
        for (int t = 0; t < 40; ++t) {
            w.push_back(x);
            x = 0.7 * x + 0.3 * rng.uniform01();
        }
    }
    CHECK(*autocorrelation(pool, 0) == 1.0);
    for (std::size_t s = 1; s <= 10; ++s) CHECK(*autocorrelation(pool, s) == doctest::Approx(pooled_rho(pool, s)));
    CHECK_FALSE(autocorrelation(std::vector<FitnessSeries>{{0.3, 0.3, 0.3}}, 1));
    CHECK_FALSE(autocorrelation(std::vector<FitnessSeries>{{0.1, 0.3}}, 2));

    // Independent draws are uncorrelated.
    std::vector<FitnessSeries> noise(100);
    std::size_t pairs = 0;
    for (auto& w : noise) {
        for (int t = 0; t < 100; ++t) w.push_back(rng.uniform01());
        pairs += 99;
    }
    CHECK(std::abs(*autocorrelation(noise, 1)) < 3.0 / std::sqrt(double(pairs)));
    REQUIRE(per_walk_autocorrelation(noise, 1));
    CHECK(std::abs(*per_walk_autocorrelation(noise, 1)) < 0.05);
}

TEST_CASE("correlation length") {
    CHECK(*correlation_length(0.9) == doctest::Approx(9.4912).epsilon(1e-4));
    CHECK(*correlation_length(std::exp(-1.0)) == doctest::Approx(1.0));
    CHECK_FALSE(correlation_length(0.0));
    CHECK_FALSE(correlation_length(1.0));
    CHECK_FALSE(correlation_length(-0.2));
    CHECK(*correlation_length(0.999) > *correlation_length(0.99));
}

TEST_CASE("adaptive walks") {
    Rng rng(7);
    // On a one-letter-block Royal Road every move adds exactly one letter.
    const RoyalRoadLandscape rr({1, 6, 30});
    for (int i = 0; i < 200; ++i) {
        const Genotype start = random_genotype(10, Alphabet(6), rng);
        const auto r = adaptive_walk(rr, start, rng);
        CHECK(r.final_fitness == 1.0);
        CHECK(r.length == 6 - static_cast<std::size_t>(block_count(rr.blocks(start))));
        CHECK(r.final_fitness == rr.fitness(r.final_genotype));
    }
    const auto er = ErLandscape::build(8, 3, 2, 50, 9);
    const Genotype top = parse_genotype("AATTGGCCBBDDEEFF", Alphabet(8));
    REQUIRE(er.fitness(top) == er.optimum_value());
    const auto at_top = adaptive_walk(er, top, rng);
    CHECK(at_top.length == 0);
    CHECK(at_top.final_genotype == top);

    // Termination: each move is a strict improvement among at most 2^N block values.
    std::size_t long_walks = 0;
    for (int i = 0; i < 300; ++i) {
        const auto r = adaptive_walk(er, random_genotype(50, Alphabet(8), rng), rng);
        CHECK(r.length <= 256);
        long_walks += r.length > 8 * (2 + 2);
        CHECK(classify_neighbors(er, r.final_genotype).higher == 0);
    }
    if (long_walks) MESSAGE("adaptive walks longer than N(b+2): " << long_walks);
}

TEST_CASE("without epistasis no block vector below the top is a strict local optimum") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto er = ErLandscape::build(8, 0, 2, 100, seed);
        for (BlockMask m = 0; m < 255; ++m) {
            bool fitter = false;
            for (std::size_t l = 0; l < 8; ++l)
                fitter = fitter || er.fitness_of_blocks(m | (BlockMask{1} << l)) > er.fitness_of_blocks(m);
            CHECK(fitter);
        }
    }
}

TEST_CASE("local optimum statistics") {
    std::vector<AdaptiveWalkResult> walks;
    Rng rng(11);
    for (int i = 0; i < 40; ++i) walks.push_back({Genotype{}, rng.uniform01(), rng.below(6)});
    const auto s = local_optima_stats(walks);
    double mean = 0, len = 0;
    for (const auto& w : walks) {
        mean += w.final_fitness;
        len += double(w.length);
    }
    mean /= 40;
    len /= 40;
    double m2 = 0, m3 = 0, m4 = 0;
    for (const auto& w : walks) {
        const double d = w.final_fitness - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    CHECK(s.walks == 40);
    CHECK(s.mean_fitness == doctest::Approx(mean));
    CHECK(s.std_fitness == doctest::Approx(std::sqrt(m2 / 39)));
    CHECK(s.skewness == doctest::Approx((m3 / 40) / std::pow(m2 / 40, 1.5)));
    CHECK(s.excess_kurtosis == doctest::Approx((m4 / 40) / ((m2 / 40) * (m2 / 40)) - 3));
    CHECK(s.mean_length == doctest::Approx(len));
    CHECK(s.est_optima_distance == doctest::Approx(2 * len));

    std::vector<AdaptiveWalkResult> still(5, AdaptiveWalkResult{Genotype{}, 0.3, 0});
    CHECK(local_optima_stats(still).est_optima_distance == 0.0);
    CHECK_THROWS(local_optima_stats(std::span(still.data(), 1)));
}

TEST_CASE("neighbour classification") {
    const ConstantLandscape flat({2, 4, 16});
    Rng rng(13);
    const Genotype g = random_genotype(16, Alphabet(4), rng);
    const auto c = classify_neighbors(flat, g);
    CHECK(c.lower == 0);
    CHECK(c.higher == 0);
    CHECK(c.total() == neighborhood_size(g.size(), 4) - (g.size() == 16 ? 17 * 4 : 0));
    const auto p = proportions(neutrality_walk(flat, g, 20, rng));
    CHECK(p.equal == 1.0);

    // Against a direct enumeration of neighbours.
    const auto er = ErLandscape::build(6, 3, 2, 30, 2);
    for (int i = 0; i < 30; ++i) {
        const Genotype h = random_genotype(30, Alphabet(6), rng);
        NeighborCounts expect;
        const double f = er.fitness(h);
        for (const auto& nb : enumerate_neighbors(h, Alphabet(6))) {
            if (nb.size() > 30) continue;
            const double x = er.fitness(nb);
            (x < f ? expect.lower : x > f ? expect.higher : expect.equal) += 1;
        }
        const auto got = classify_neighbors(er, h);
        CHECK(got.lower == expect.lower);
        CHECK(got.equal == expect.equal);
        CHECK(got.higher == expect.higher);
        const auto q = proportions(got);
        CHECK(q.lower + q.equal + q.higher == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("equal-fitness share grows with the block size") {
    double previous = 0;
    for (std::size_t b : {2u, 3u, 4u}) {
        const auto er = ErLandscape::build(8, 4, b, 100, 21);
        const auto r = run_neutrality(er, {.walks = 200, .length = 20, .lambda_max = 100, .seed = 4});
        CHECK(r.proportions.equal > previous);
        previous = r.proportions.equal;
    }
}

TEST_CASE("campaigns are reproducible and independent of the worker count") {
    const auto er = ErLandscape::build(8, 2, 2, 100, 3);
    const RandomWalkCampaign rw{.walks = 200, .length = 35, .lambda_max = 0, .max_lag = 10, .seed = 5};
    const auto a = run_random_walks(er, rw, 1);
    const auto b = run_random_walks(er, rw, 4);
    CHECK(a.rho == b.rho);
    CHECK(a.tau == b.tau);
    CHECK(a.steps == 200 * 35);
    CHECK(*a.rho[0] == 1.0);

    const AdaptiveWalkCampaign aw{.walks = 100, .lambda_max = 50, .seed = 6};
    const auto c = run_adaptive_walks(er, aw, 1);
    const auto d = run_adaptive_walks(er, aw, 3);
    CHECK(c.stats.mean_fitness == d.stats.mean_fitness);
    CHECK(c.stats.mean_length == d.stats.mean_length);
    REQUIRE(c.walks.size() == 100);
    for (std::size_t i = 0; i < 100; ++i) CHECK(c.walks[i].final_genotype == d.walks[i].final_genotype);

    const NeutralityCampaign nc{.walks = 50, .length = 20, .lambda_max = 0, .seed = 7};
    const auto e = run_neutrality(er, nc, 1);
    const auto f = run_neutrality(er, nc, 2);
    CHECK(e.counts.lower == f.counts.lower);
    CHECK(e.counts.equal == f.counts.equal);
    CHECK(e.counts.higher == f.counts.higher);
}

TEST_CASE("campaign bounds") {
    const auto er = ErLandscape::build(8, 2, 2, 100, 3);
    CHECK(campaign_bound(er, 0) == 32);
    CHECK(campaign_bound(er, 50) == 50);
    CHECK(campaign_bound(er, 500) == 100);
}

}  // TEST_SUITE
