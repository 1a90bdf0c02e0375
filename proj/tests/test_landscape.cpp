#include <doctest.h>

#include <set>
#include <stdexcept>
#include <vector>

#include "epiroad/landscape.hpp"

using namespace epiroad;

namespace {

// A genotype whose block vector is exactly `mask`: one run per letter, in random order.
Genotype genotype_for(BlockMask mask, std::size_t n, std::size_t b, Rng& rng) {
    std::vector<std::vector<Letter>> runs;
    for (std::size_t l = 0; l < n; ++l) {
        const std::size_t len = (mask >> l) & 1 ? b + rng.below(2) : rng.below(b);
        if (len > 0) runs.emplace_back(len, static_cast<Letter>(l));
    }
    for (std::size_t i = runs.size(); i > 1; --i) std::swap(runs[i - 1], runs[rng.below(i)]);
    std::vector<Letter> out;
    for (const auto& r : runs) out.insert(out.end(), r.begin(), r.end());
    return Genotype(std::move(out));
}

}  // namespace

TEST_SUITE("landscape") {

TEST_CASE("Royal Road fitness") {
    const RoyalRoadLandscape rr({3, 4, 40});
    CHECK(rr.fitness(parse_genotype("AAAGTAGGGTAATTTCCCTCCC", Alphabet(4))) == 1.0);
    CHECK(rr.fitness(Genotype{}) == 0.0);
    CHECK(rr.fitness(parse_genotype("GGGA", Alphabet(4))) == 0.25);
    CHECK_THROWS_AS(rr.fitness(Genotype(std::vector<Letter>(41, 0))), std::invalid_argument);
    CHECK_THROWS_AS(rr.fitness(Genotype({4})), std::invalid_argument);
    CHECK_THROWS_AS(RoyalRoadLandscape({3, 4, 11}), std::invalid_argument);
}

TEST_CASE("ER construction") {
    const auto er = ErLandscape::build(8, 0, 2, 100, 4);
    for (std::size_t i = 0; i < 8; ++i) CHECK(er.nk().links(i).empty());
    CHECK(er.lambda_max() == 100);
    CHECK(er.alphabet_size() == 8);
    CHECK(er.optimum_value() == er.nk().evaluate(0xFF));

    std::set<std::vector<double>> distinct;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto e = ErLandscape::build(8, 3, 2, 100, s);
        distinct.insert({e.nk().all_tables().begin(), e.nk().all_tables().end()});
    }
    CHECK(distinct.size() == 10);

    // An instance whose optimum is not 1^N is rejected.
    const auto raw = NkInstance::generate(6, 2, NeighborhoodKind::random, 1);
    if (exhaustive_optimum(raw).argmax != BitString::ones(6))
        CHECK_THROWS_AS(ErLandscape({2, 6, 12}, raw), std::invalid_argument);
    CHECK_THROWS_AS(ErLandscape({2, 7, 14}, normalize_to_one(raw)), std::invalid_argument);
    CHECK_THROWS_AS(ErLandscape::build(8, 8, 2, 100, 0), std::invalid_argument);
    CHECK_THROWS_AS(ErLandscape::build(8, 2, 2, 15, 0), std::invalid_argument);
}

TEST_CASE("ER fitness factors through the block vector") {
    Rng rng(8);
    for (std::size_t k = 0; k < 8; ++k) {
        const auto er = ErLandscape::build(8, k, 3, 100, 50 + k);
        for (BlockMask m = 0; m < 256; ++m) {
            CHECK(er.fitness_of_blocks(m) == er.nk().evaluate(m));
            CHECK(er.fitness_of_blocks(m) <= er.optimum_value());
            const Genotype a = genotype_for(m, 8, 3, rng);
            const Genotype b = genotype_for(m, 8, 3, rng);
            REQUIRE(er.blocks(a) == m);
            REQUIRE(er.blocks(b) == m);
            CHECK(er.fitness(a) == er.fitness(b));
        }
        const Genotype top = genotype_for(0xFF, 8, 3, rng);
        CHECK(er.fitness(top) == er.optimum_value());
        CHECK(er.is_success(er.fitness(top)));
    }
}

TEST_CASE("uncached ER evaluation is identical") {
    const auto er = ErLandscape::build(22, 3, 1, 44, 5);
    Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        const BlockMask m = rng.below(std::uint64_t{1} << 22);
        CHECK(er.fitness_of_blocks(m) == er.nk().evaluate(m));
    }
    CHECK(er.optimum_value() == er.nk().evaluate((std::uint64_t{1} << 22) - 1));
}

TEST_CASE("success tolerance") {
    const auto er = ErLandscape::build(6, 2, 2, 12, 3);
    CHECK(er.is_success(er.optimum_value()));
    CHECK_FALSE(er.is_success(er.optimum_value() - 1e-6));
    CHECK(er.is_success(er.optimum_value() - 5e-13));
}

TEST_CASE("without epistasis adding blocks never lowers fitness") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto er = ErLandscape::build(8, 0, 2, 100, seed);
        for (BlockMask u = 0; u < 256; ++u)
            for (std::size_t l = 0; l < 8; ++l) {
                if ((u >> l) & 1) continue;
                CHECK(er.fitness_of_blocks(u | (BlockMask{1} << l)) > er.fitness_of_blocks(u));
            }
        // Royal Road and ER share the same optimal block vectors.
        const RoyalRoadLandscape rr({2, 8, 100});
        for (BlockMask u = 0; u < 256; ++u)
            CHECK((er.fitness_of_blocks(u) == er.optimum_value()) == (rr.fitness_of_blocks(u) == 1.0));
    }
}

TEST_CASE("instance seeds") {
    const GridCell a{8, 2, 3}, b{8, 3, 2};
    CHECK(instance_seed(1, a, 0) == instance_seed(1, a, 0));
    CHECK(instance_seed(1, a, 0) != instance_seed(1, a, 1));
    CHECK(instance_seed(1, a, 0) != instance_seed(1, b, 0));
    CHECK(instance_seed(1, a, 0) != instance_seed(2, a, 0));
}

}  // TEST_SUITE
