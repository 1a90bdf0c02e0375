#pragma once

/// @file genotype.hpp
/// @brief Variable-length genotypes over an N-letter alphabet, block detection
/// and the edit-distance-1 neighbourhood.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "epiroad/random.hpp"

namespace epiroad {

/// Letters are the indices 0..N-1 of the alphabet.
using Letter = std::uint16_t;

/// Bit l is set when letter l has at least one block in a genotype.
using BlockMask = std::uint64_t;

/// Upper bound on N for anything that produces a BlockMask.
inline constexpr std::size_t kMaxBlockLetters = 64;

class Alphabet {
public:
    explicit Alphabet(std::size_t size);

    std::size_t size() const noexcept { return size_; }
    bool contains(Letter l) const noexcept { return l < size_; }

private:
    std::size_t size_;
};

class Genotype {
public:
    Genotype() = default;
    explicit Genotype(std::vector<Letter> symbols) : symbols_(std::move(symbols)) {}

    std::span<const Letter> symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    Letter operator[](std::size_t i) const { return symbols_[i]; }

    auto begin() const noexcept { return symbols_.begin(); }
    auto end() const noexcept { return symbols_.end(); }

    void insert(std::size_t gap, Letter l);
    void erase(std::size_t pos);
    void substitute(std::size_t pos, Letter l) { symbols_.at(pos) = l; }

    /// True when every symbol is a letter of `alphabet`.
    bool valid_over(const Alphabet& alphabet) const noexcept;

    friend bool operator==(const Genotype&, const Genotype&) = default;

private:
    std::vector<Letter> symbols_;
};

/// Block size b, alphabet size N and maximum genotype length.
struct BlockParams {
    std::size_t block_size = 1;
    std::size_t n_letters = 1;
    std::size_t lambda_max = 1;

    /// Throws std::invalid_argument unless b >= 1, 1 <= N <= 64 and lambda_max >= N*b.
    void validate() const;
};

/// True iff g contains a run of at least b consecutive copies of `letter`.
bool has_block(const Genotype& g, Letter letter, std::size_t b);

/// Bit i of the result equals has_block(g, i, b), for i < n_letters.
BlockMask block_vector(const Genotype& g, std::size_t n_letters, std::size_t b);

inline BlockMask block_vector(const Genotype& g, const BlockParams& p) {
    return block_vector(g, p.n_letters, p.block_size);
}

/// Number of letters with a block.
int block_count(BlockMask mask) noexcept;

// -- edit-distance-1 neighbourhood ---------------------------------------------

enum class EditKind : std::uint8_t { insertion, deletion, substitution };

/// One elementary edit. For insertions `position` is a gap in [0, length];
/// otherwise it is a symbol index. `letter` is unused by deletions.
struct Edit {
    EditKind kind;
    std::size_t position;
    Letter letter;

    friend bool operator==(const Edit&, const Edit&) = default;
};

/// (2*length + 1) * n_letters.
constexpr std::size_t neighborhood_size(std::size_t length, std::size_t n_letters) noexcept {
    return (2 * length + 1) * n_letters;
}

/// Number of neighbourhood operations that are insertions: (length + 1) * n_letters.
constexpr std::size_t insertion_count(std::size_t length, std::size_t n_letters) noexcept {
    return (length + 1) * n_letters;
}

/// Decodes operation `index` of the neighbourhood of g.
///
/// Indices [0, (λ+1)N) are insertions, gap = index / N and letter = index % N.
/// The remaining λN indices address (position, letter) pairs; the pair whose
/// letter equals the incumbent symbol is the deletion of that position, every
/// other pair is a substitution. The neighbourhood is therefore the multiset
/// of (λ+1)N insertions, λ(N-1) substitutions and λ deletions.
Edit neighbor_edit(const Genotype& g, std::size_t n_letters, std::size_t index);

Genotype apply_edit(const Genotype& g, const Edit& e);

/// Writes apply_edit(g, e) into `out`, reusing its storage.
void apply_edit_into(const Genotype& g, const Edit& e, Genotype& out);

/// Block vectors of neighbours of a fixed genotype in constant time per edit.
///
/// The genotype is held as maximal runs of equal letters together with, per
/// letter, the number of runs of length >= b. An edit only touches the run it
/// falls in and the two runs around it, so only those are re-examined.
class NeighborBlockMasks {
public:
    NeighborBlockMasks(const Genotype& g, std::size_t n_letters, std::size_t b);

    BlockMask base() const noexcept { return base_; }

    /// Equals block_vector(apply_edit(g, e), n_letters, b).
    BlockMask operator()(const Edit& e) const;

private:
    struct Run {
        Letter letter;
        std::size_t start;
        std::size_t length;
    };

    std::size_t n_letters_;
    std::size_t b_;
    std::size_t length_;
    std::vector<Run> runs_;
    std::vector<std::size_t> run_of_;     // position -> run index
    std::vector<std::uint32_t> blocks_;  // per letter, runs of length >= b
    BlockMask base_ = 0;
};

/// All (2λ+1)N operation neighbours in index order; duplicates are kept.
std::vector<Genotype> enumerate_neighbors(const Genotype& g, const Alphabet& alphabet);

/// Length uniform on {0..max_len}, symbols i.i.d. uniform over the alphabet.
Genotype random_genotype(std::size_t max_len, const Alphabet& alphabet, Rng& rng);

/// Levenshtein distance (unit-cost insertion, deletion, substitution).
std::size_t edit_distance(const Genotype& a, const Genotype& b);

// -- text form -------------------------------------------------------------------

/// Display letter for index i when N <= 26: A, T, G, C, then the remaining
/// capital letters in alphabetical order.
char display_letter(Letter l);

/// Letter strings for N <= 26, comma-separated indices otherwise.
std::string to_text(const Genotype& g, const Alphabet& alphabet);

/// Inverse of to_text. Throws std::invalid_argument on unknown symbols.
Genotype parse_genotype(std::string_view text, const Alphabet& alphabet);

}  // namespace epiroad
