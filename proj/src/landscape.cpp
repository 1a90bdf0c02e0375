#include "epiroad/landscape.hpp"

#include <stdexcept>
#include <string>

#include "epiroad/random.hpp"

namespace epiroad {

namespace {

constexpr std::size_t kCacheMaxN = 20;

}  // namespace

void Landscape::check(const Genotype& g) const {
    if (g.size() > lambda_max())
        throw std::invalid_argument("genotype length " + std::to_string(g.size()) + " exceeds lambda_max " +
                                    std::to_string(lambda_max()));
    if (!g.valid_over(Alphabet(alphabet_size())))
        throw std::invalid_argument("genotype uses letters outside the alphabet");
}

BlockLandscape::BlockLandscape(BlockParams params) : params_(params) { params_.validate(); }

double RoyalRoadLandscape::fitness_of_blocks(BlockMask mask) const {
    return static_cast<double>(block_count(mask)) / static_cast<double>(params().n_letters);
}

ErLandscape::ErLandscape(BlockParams params, NkInstance nk)
    : BlockLandscape(params), nk_(std::move(nk)) {
    if (nk_.n() != params.n_letters)
        throw std::invalid_argument("NK instance N does not match the alphabet size");
    const auto opt = exhaustive_optimum(nk_);
    if (opt.argmax != BitString::ones(nk_.n()))
        throw std::invalid_argument("NK instance is not normalized: optimum is " + opt.argmax.to_text());
    optimum_value_ = opt.value;
    if (nk_.n() <= kCacheMaxN) {
        cache_.resize(std::size_t{1} << nk_.n());
        for (std::size_t x = 0; x < cache_.size(); ++x) cache_[x] = nk_.evaluate(x);
    }
}

ErLandscape ErLandscape::build(std::size_t n, std::size_t k, std::size_t b, std::size_t lambda_max,
                               std::uint64_t seed) {
    BlockParams params{b, n, lambda_max};
    params.validate();
    if (n > kExhaustiveMaxN)
        throw std::invalid_argument("Epistatic Road needs N <= " + std::to_string(kExhaustiveMaxN));
    return ErLandscape(params, normalize_to_one(NkInstance::generate(n, k, NeighborhoodKind::random, seed)));
}

double ErLandscape::fitness_of_blocks(BlockMask mask) const {
    if (!cache_.empty()) return cache_[mask];
    return nk_.evaluate(mask);
}

std::uint64_t instance_seed(std::uint64_t master, const GridCell& cell, std::size_t index) {
    return derive_seed(master, {cell.n, cell.k, cell.b, index});
}

}  // namespace epiroad
