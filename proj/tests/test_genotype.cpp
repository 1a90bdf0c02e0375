#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "epiroad/genotype.hpp"

using namespace epiroad;

namespace {

Genotype g4(std::string_view text) { return parse_genotype(text, Alphabet(4)); }

// Longest run of each letter, computed by a plain scan.
bool run_oracle(const std::vector<Letter>& s, Letter l, std::size_t b) {
    std::size_t run = 0, best = 0;
    for (Letter c : s) {
        run = c == l ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best >= b;
}

// Full two-dimensional Levenshtein table.
std::size_t levenshtein_table(const std::vector<Letter>& a, const std::vector<Letter>& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    return d[a.size()][b.size()];
}

std::vector<Letter> letters(const Genotype& g) { return {g.begin(), g.end()}; }

Genotype random_of_length(std::size_t len, std::size_t n, Rng& rng) {
    std::vector<Letter> s(len);
    for (auto& c : s) c = static_cast<Letter>(rng.below(n));
    return Genotype(std::move(s));
}

}  // namespace

TEST_SUITE("genotype") {

TEST_CASE("block predicate on the four-letter optimum example") {
    const Genotype g = g4("AAAGTAGGGTAATTTCCCTCCC");
    CHECK(has_block(g, 0, 3));
    CHECK(block_vector(g, 4, 3) == 0b1111);
    CHECK(block_count(block_vector(g, 4, 3)) == 4);
}

TEST_CASE("has_block on hand-checked runs") {
    const Genotype g = parse_genotype("AABAA", Alphabet(5));
    CHECK_FALSE(has_block(g, 0, 3));
    CHECK(has_block(g, 0, 2));
    CHECK(has_block(g, 4, 1));
    CHECK_FALSE(has_block(g, 4, 2));
    for (Letter l = 0; l < 4; ++l) CHECK_FALSE(has_block(Genotype{}, l, 1));
}

TEST_CASE("block_vector simple cases") {
    CHECK(block_vector(Genotype{}, 4, 1) == 0);
    CHECK(block_vector(g4("AAAA"), 4, 3) == 0b0001);
    BlockParams p{3, 4, 12};
    CHECK(block_vector(g4("TTTCC"), p) == 0b0010);
}

TEST_CASE("BlockParams validation") {
    CHECK_NOTHROW((BlockParams{2, 8, 16}.validate()));
    CHECK_THROWS_AS((BlockParams{2, 8, 15}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BlockParams{0, 8, 16}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BlockParams{1, 0, 16}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BlockParams{1, 65, 100}.validate()), std::invalid_argument);
}

TEST_CASE("has_block agrees with a run scan and is monotone in b") {
    Rng rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        const Genotype g = random_of_length(rng.below(40), 3, rng);
        for (Letter l = 0; l < 3; ++l)
            for (std::size_t b = 1; b <= 6; ++b) {
                CHECK(has_block(g, l, b) == run_oracle(letters(g), l, b));
                if (has_block(g, l, b + 1)) CHECK(has_block(g, l, b));
            }
    }
}

TEST_CASE("neighbourhood size is (2*length+1)*N") {
    Rng rng(3);
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
        const Alphabet a(n);
        for (std::size_t len = 0; len <= 20; ++len) {
            const Genotype g = random_of_length(len, n, rng);
            CHECK(enumerate_neighbors(g, a).size() == (2 * len + 1) * n);
            CHECK(neighborhood_size(len, n) == (2 * len + 1) * n);
        }
    }
    CHECK(enumerate_neighbors(g4("AAA"), Alphabet(4)).size() == 28);
    const auto empty = enumerate_neighbors(Genotype{}, Alphabet(4));
    REQUIRE(empty.size() == 4);
    for (Letter l = 0; l < 4; ++l) CHECK(empty[l] == Genotype({l}));
}

TEST_CASE("operation inventory: insertions, proper substitutions and one deletion per position") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(6);
        const Genotype g = random_of_length(rng.below(12), n, rng);
        std::map<EditKind, std::size_t> count;
        for (std::size_t i = 0; i < neighborhood_size(g.size(), n); ++i) {
            const Edit e = neighbor_edit(g, n, i);
            ++count[e.kind];
            if (e.kind == EditKind::substitution) CHECK(e.letter != g[e.position]);
        }
        CHECK(count[EditKind::insertion] == (g.size() + 1) * n);
        CHECK(count[EditKind::substitution] == g.size() * (n - 1));
        CHECK(count[EditKind::deletion] == g.size());
    }
}

TEST_CASE("every neighbour is within edit distance one") {
    Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.below(4);
        const Genotype g = random_of_length(rng.below(10), n, rng);
        for (const auto& h : enumerate_neighbors(g, Alphabet(n))) {
            CHECK(edit_distance(g, h) <= 1);
            CHECK(levenshtein_table(letters(g), letters(h)) == 1);
        }
    }
}

TEST_CASE("incremental neighbour block masks match recomputation") {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(5);
        const std::size_t b = 1 + rng.below(4);
        // Few letters and long strings give many runs near the block size.
        const Genotype g = random_of_length(rng.below(30), std::min<std::size_t>(n, 1 + rng.below(3)), rng);
        const NeighborBlockMasks masks(g, n, b);
        CHECK(masks.base() == block_vector(g, n, b));
        for (std::size_t i = 0; i < neighborhood_size(g.size(), n); ++i) {
            const Edit e = neighbor_edit(g, n, i);
            CHECK(masks(e) == block_vector(apply_edit(g, e), n, b));
        }
    }
}

TEST_CASE("apply_edit_into equals apply_edit") {
    Rng rng(29);
    Genotype out;
    for (int trial = 0; trial < 50; ++trial) {
        const Genotype g = random_of_length(rng.below(15), 4, rng);
        for (std::size_t i = 0; i < neighborhood_size(g.size(), 4); ++i) {
            const Edit e = neighbor_edit(g, 4, i);
            apply_edit_into(g, e, out);
            CHECK(out == apply_edit(g, e));
        }
    }
}

TEST_CASE("edit distance") {
    CHECK(edit_distance(g4("ATGC"), g4("ATGC")) == 0);
    CHECK(edit_distance(g4("AAA"), g4("AA")) == 1);
    CHECK(edit_distance(Genotype{}, g4("GGG")) == 3);
    Rng rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const Genotype a = random_of_length(rng.below(9), 3, rng);
        const Genotype b = random_of_length(rng.below(9), 3, rng);
        const Genotype c = random_of_length(rng.below(9), 3, rng);
        const std::size_t d = edit_distance(a, b);
        CHECK(d == levenshtein_table(letters(a), letters(b)));
        CHECK(d == edit_distance(b, a));
        CHECK((d == 0) == (a == b));
        CHECK(edit_distance(a, c) <= d + edit_distance(b, c));
    }
}

TEST_CASE("random_genotype length and symbol distribution") {
    const Alphabet a(4);
    Rng rng(41);
    for (int i = 0; i < 100; ++i) CHECK(random_genotype(0, a, rng).empty());

    const std::size_t draws = 100000, max_len = 20;
    double sum = 0;
    std::vector<double> freq(4, 0.0);
    double symbols = 0;
    for (std::size_t i = 0; i < draws; ++i) {
        const Genotype g = random_genotype(max_len, a, rng);
        CHECK(g.size() <= max_len);
        sum += static_cast<double>(g.size());
        for (Letter l : g) ++freq[l];
        symbols += static_cast<double>(g.size());
    }
    // Uniform on {0..20}: mean 10, variance (21^2 - 1) / 12.
    const double se_len = std::sqrt((21.0 * 21.0 - 1.0) / 12.0 / draws);
    CHECK(std::abs(sum / draws - 10.0) < 3 * se_len);

    double chi2 = 0;
    for (double f : freq) {
        const double expected = symbols / 4;
        chi2 += (f - expected) * (f - expected) / expected;
        const double se = std::sqrt(symbols * 0.25 * 0.75);
        CHECK(std::abs(f - expected) < 3 * se);
    }
    CHECK(chi2 < 16.27);  // chi-square, 3 degrees of freedom, p = 0.001
}

TEST_CASE("block_vector is invariant under block translocation") {
    Rng rng(43);
    int checked = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t n = 4, b = 1 + rng.below(3);
        std::vector<Letter> s = letters(random_of_length(rng.below(25), n, rng));
        // Locate maximal runs; pick one that is exactly a block.
        std::vector<std::pair<std::size_t, std::size_t>> runs;
        for (std::size_t i = 0; i < s.size();) {
            std::size_t j = i;
            while (j < s.size() && s[j] == s[i]) ++j;
            runs.push_back({i, j - i});
            i = j;
        }
        std::vector<std::size_t> blocks;
        for (std::size_t r = 0; r < runs.size(); ++r)
            if (runs[r].second == b) blocks.push_back(r);
        if (blocks.empty()) continue;
        const auto [start, len] = runs[blocks[rng.below(blocks.size())]];
        const Letter l = s[start];
        // Removing the block must not fuse its neighbours.
        if (start > 0 && start + len < s.size() && s[start - 1] == s[start + len]) continue;
        std::vector<Letter> rest(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(start));
        rest.insert(rest.end(), s.begin() + static_cast<std::ptrdiff_t>(start + len), s.end());
        // Re-insert at a run boundary whose sides differ from the moved letter.
        std::vector<std::size_t> gaps;
        for (std::size_t gap = 0; gap <= rest.size(); ++gap) {
            const bool boundary = gap == 0 || gap == rest.size() || rest[gap - 1] != rest[gap];
            const bool left_ok = gap == 0 || rest[gap - 1] != l;
            const bool right_ok = gap == rest.size() || rest[gap] != l;
            if (boundary && left_ok && right_ok) gaps.push_back(gap);
        }
        if (gaps.empty()) continue;
        const std::size_t gap = gaps[rng.below(gaps.size())];
        std::vector<Letter> moved(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(gap));
        moved.insert(moved.end(), len, l);
        moved.insert(moved.end(), rest.begin() + static_cast<std::ptrdiff_t>(gap), rest.end());
        CHECK(block_vector(Genotype(s), n, b) == block_vector(Genotype(moved), n, b));
        ++checked;
    }
    CHECK(checked > 500);
}

TEST_CASE("text form") {
    const Alphabet four(4);
    CHECK(to_text(g4("ATGC"), four) == "ATGC");
    CHECK(g4("ATGC") == Genotype({0, 1, 2, 3}));
    CHECK(display_letter(4) == 'B');
    CHECK_THROWS_AS(parse_genotype("ATGX", four), std::invalid_argument);
    const Alphabet big(30);
    const Genotype g({0, 29, 7});
    CHECK(to_text(g, big) == "0,29,7");
    CHECK(parse_genotype("0,29,7", big) == g);
    CHECK(parse_genotype("", big).empty());
    CHECK_THROWS_AS(parse_genotype("0,30", big), std::invalid_argument);
}

TEST_CASE("validity over an alphabet") {
    CHECK(Genotype({0, 1, 3}).valid_over(Alphabet(4)));
    CHECK_FALSE(Genotype({0, 4}).valid_over(Alphabet(4)));
    CHECK_THROWS(Alphabet(0));
}

}  // TEST_SUITE
