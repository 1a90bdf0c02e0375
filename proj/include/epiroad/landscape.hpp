#pragma once

/// @file landscape.hpp
/// @brief Variable-length fitness functions: the block-counting Royal Road and
/// the Epistatic Road, which evaluates an NK instance on a genotype's block
/// vector.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "epiroad/genotype.hpp"
#include "epiroad/nk.hpp"

namespace epiroad {

/// Common evaluation surface consumed by the walk analyses and the EA.
class Landscape {
public:
    virtual ~Landscape() = default;

    virtual std::size_t alphabet_size() const noexcept = 0;
    virtual std::size_t lambda_max() const noexcept = 0;

    /// Fitness of g. Throws std::invalid_argument when g is longer than
    /// lambda_max() or uses letters outside the alphabet.
    double fitness(const Genotype& g) const {
        check(g);
        return fitness_unchecked(g);
    }

    /// Fitness without the length and alphabet checks; callers guarantee both.
    virtual double fitness_unchecked(const Genotype& g) const = 0;

protected:
    void check(const Genotype& g) const;
};

/// Block-based landscapes also expose the block vector behind their fitness.
class BlockLandscape : public Landscape {
public:
    explicit BlockLandscape(BlockParams params);

    const BlockParams& params() const noexcept { return params_; }
    std::size_t alphabet_size() const noexcept override { return params_.n_letters; }
    std::size_t lambda_max() const noexcept override { return params_.lambda_max; }

    BlockMask blocks(const Genotype& g) const { return block_vector(g, params_); }

    /// Fitness as a function of the block vector alone.
    virtual double fitness_of_blocks(BlockMask mask) const = 0;

    double fitness_unchecked(const Genotype& g) const override { return fitness_of_blocks(blocks(g)); }

private:
    BlockParams params_;
};

/// f(g) = n / N with n the number of letters having a block.
class RoyalRoadLandscape final : public BlockLandscape {
public:
    using BlockLandscape::BlockLandscape;

    double fitness_of_blocks(BlockMask mask) const override;
};

/// NK fitness of the block vector, with the NK optimum relabelled to 1^N.
class ErLandscape final : public BlockLandscape {
public:
    /// Absolute tolerance used by is_success().
    static constexpr double kSuccessTolerance = 1e-12;

    /// Wraps an already normalized instance. Throws unless nk.n() equals N and
    /// 1^N is the exhaustive argmax of nk.
    ErLandscape(BlockParams params, NkInstance nk);

    /// Random-neighbourhood NK instance from `seed`, normalized to 1^N.
    static ErLandscape build(std::size_t n, std::size_t k, std::size_t b, std::size_t lambda_max,
                             std::uint64_t seed);

    const NkInstance& nk() const noexcept { return nk_; }
    double optimum_value() const noexcept { return optimum_value_; }

    double fitness_of_blocks(BlockMask mask) const override;

    /// True iff f >= optimum_value - 1e-12.
    bool is_success(double f) const noexcept { return f >= optimum_value_ - kSuccessTolerance; }

private:
    NkInstance nk_;
    double optimum_value_;
    // Fitness of every block vector; filled when N is small enough.
    std::vector<double> cache_;
};

/// One (N, K, b) parameter triple of an experiment grid.
struct GridCell {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t b = 0;

    friend bool operator==(const GridCell&, const GridCell&) = default;
};

/// Seed of landscape instance `index` in `cell`: derive_seed(master, {N, K, b, index}).
std::uint64_t instance_seed(std::uint64_t master, const GridCell& cell, std::size_t index);

}  // namespace epiroad
