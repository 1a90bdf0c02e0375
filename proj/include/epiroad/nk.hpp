#pragma once

/// @file nk.hpp
/// @brief NK-landscapes over fixed-length bit strings.
///
/// Component tables are indexed big-endian with the locus' own allele as the
/// most significant bit followed by the alleles of its links in stored order:
///
///     index_i(x) = x_i << K | x_{l_1} << (K-1) | ... | x_{l_K}
///
/// normalize_to_one() rewrites tables under this encoding.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace epiroad {

enum class NeighborhoodKind { adjacent, random };

std::string_view to_string(NeighborhoodKind kind);
NeighborhoodKind parse_neighborhood_kind(std::string_view text);

/// Largest N for which exhaustive search over {0,1}^N is allowed.
inline constexpr std::size_t kExhaustiveMaxN = 24;

/// Fixed-length bit string; locus i is stored in bit i of the packed word.
class BitString {
public:
    BitString() = default;
    BitString(std::size_t n, std::uint64_t packed);

    /// Parses "0110..." with locus 0 first.
    static BitString from_text(std::string_view text);
    static BitString ones(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::uint64_t packed() const noexcept { return bits_; }
    bool operator[](std::size_t i) const noexcept { return (bits_ >> i) & 1u; }
    BitString flipped(std::size_t i) const { return {n_, bits_ ^ (std::uint64_t{1} << i)}; }

    std::string to_text() const;

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::size_t n_ = 0;
    std::uint64_t bits_ = 0;
};

class NkInstance {
public:
    /// Builds an instance from explicit content; validates every invariant.
    /// `tables` holds n * 2^(k+1) values, locus-major; `links` holds n * k loci.
    NkInstance(std::size_t n, std::size_t k, NeighborhoodKind kind, std::uint64_t seed,
               std::vector<std::size_t> links, std::vector<double> tables, std::uint64_t mask = 0);

    /// Draws links and i.i.d. uniform [0,1) tables from `seed`.
    static NkInstance generate(std::size_t n, std::size_t k, NeighborhoodKind kind, std::uint64_t seed);

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    NeighborhoodKind kind() const noexcept { return kind_; }
    std::uint64_t seed() const noexcept { return seed_; }
    /// XOR relabelling applied by normalize_to_one (0 when never normalized).
    std::uint64_t mask() const noexcept { return mask_; }

    std::span<const std::size_t> links(std::size_t locus) const;
    std::span<const double> table(std::size_t locus) const;
    std::span<const std::size_t> all_links() const noexcept { return links_; }
    std::span<const double> all_tables() const noexcept { return tables_; }
    std::size_t table_size() const noexcept { return std::size_t{1} << (k_ + 1); }

    /// Table row used by `locus` for the packed string x.
    std::size_t component_index(std::size_t locus, std::uint64_t x) const noexcept;

    /// Mean of the N component values. Throws on length mismatch.
    double fitness(const BitString& x) const;

    /// Same as fitness() on a packed string of length n(); loci summed in order 0..N-1.
    double evaluate(std::uint64_t x) const noexcept;

    friend bool operator==(const NkInstance&, const NkInstance&) = default;

private:
    std::size_t n_;
    std::size_t k_;
    NeighborhoodKind kind_;
    std::uint64_t seed_;
    std::uint64_t mask_;
    std::vector<std::size_t> links_;
    std::vector<double> tables_;
};

struct NkOptimum {
    BitString argmax;
    double value;
};

/// Global maximum over all 2^N strings; ties go to the lexicographically
/// smallest string (locus 0 compared first). Requires N <= kExhaustiveMaxN.
NkOptimum exhaustive_optimum(const NkInstance& inst);

/// Returns the instance f'(x) = f(x XOR m) with m the complement of the
/// optimum, so that 1^N becomes the global maximum.
NkInstance normalize_to_one(const NkInstance& inst);

// -- closed forms for NK properties ----------------------------------------------

/// Correlation length -1 / ln(1 - (K+1)/N); requires K+1 < N.
double theoretical_tau(std::size_t n, std::size_t k);

/// Random-walk autocorrelation (1 - (K+1)/N)^s.
double theoretical_rho(std::size_t n, std::size_t k, std::size_t s);

struct OptimaFitnessStats {
    double mean;
    double variance;
};

inline constexpr double kUniformMu = 0.5;
inline const double kUniformSigma = 0.28867513459481287;  // sqrt(1/12)

/// Large-K approximation of the mean and variance of local-optimum fitness.
OptimaFitnessStats theoretical_optima_stats(std::size_t n, std::size_t k, double mu = kUniformMu,
                                            double sigma = kUniformSigma);

/// 2^N / (N+1): expected number of one-bit-flip local optima when K = N-1.
double expected_optima_count(std::size_t n);

}  // namespace epiroad
