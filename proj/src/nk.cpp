#include "epiroad/nk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "epiroad/random.hpp"

namespace epiroad {

namespace {

std::uint64_t low_mask(std::size_t n) {
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

// Maps a lexicographic rank to the packed string: rank bit N-1 is locus 0.
std::uint64_t lex_unrank(std::uint64_t rank, std::size_t n) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < n; ++i) x |= ((rank >> (n - 1 - i)) & 1u) << i;
    return x;
}

std::vector<std::size_t> adjacent_links(std::size_t n, std::size_t k, std::size_t locus) {
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t d = 1; out.size() < k; ++d) {
        out.push_back((locus + d) % n);
        if (out.size() < k) out.push_back((locus + n - d % n) % n);
    }
    return out;
}

std::vector<std::size_t> random_links(std::size_t n, std::size_t k, std::size_t locus, Rng& rng) {
    std::vector<std::size_t> pool;
    pool.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
        if (j != locus) pool.push_back(j);
    for (std::size_t j = 0; j < k; ++j) std::swap(pool[j], pool[j + rng.below(pool.size() - j)]);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

std::string_view to_string(NeighborhoodKind kind) {
    return kind == NeighborhoodKind::adjacent ? "adjacent" : "random";
}

NeighborhoodKind parse_neighborhood_kind(std::string_view text) {
    if (text == "adjacent") return NeighborhoodKind::adjacent;
    if (text == "random") return NeighborhoodKind::random;
    throw std::invalid_argument("unknown neighborhood kind '" + std::string(text) + "'");
}

BitString::BitString(std::size_t n, std::uint64_t packed) : n_(n), bits_(packed) {
    if (n > 64) throw std::invalid_argument("bit strings are limited to 64 loci");
    if (packed & ~low_mask(n)) throw std::invalid_argument("bits set beyond string length");
}

BitString BitString::from_text(std::string_view text) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1') bits |= std::uint64_t{1} << i;
        else if (text[i] != '0') throw std::invalid_argument("bit strings contain only 0 and 1");
    }
    return {text.size(), bits};
}

BitString BitString::ones(std::size_t n) { return {n, low_mask(n)}; }

std::string BitString::to_text() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
        if ((*this)[i]) s[i] = '1';
    return s;
}

NkInstance::NkInstance(std::size_t n, std::size_t k, NeighborhoodKind kind, std::uint64_t seed,
                       std::vector<std::size_t> links, std::vector<double> tables, std::uint64_t mask)
    : n_(n), k_(k), kind_(kind), seed_(seed), mask_(mask), links_(std::move(links)), tables_(std::move(tables)) {
    if (n < 1 || n > 64) throw std::invalid_argument("NK requires 1 <= N <= 64");
    if (k > n - 1) throw std::invalid_argument("NK requires 0 <= K <= N-1, got K=" + std::to_string(k) +
                                               " for N=" + std::to_string(n));
    if (k > 30) throw std::invalid_argument("K above 30 gives unmanageable tables");
    if (links_.size() != n * k) throw std::invalid_argument("NK links must hold N*K entries");
    if (tables_.size() != n * table_size()) throw std::invalid_argument("NK tables must hold N*2^(K+1) values");
    if (mask & ~low_mask(n)) throw std::invalid_argument("NK mask has bits beyond N");
    for (std::size_t i = 0; i < n; ++i) {
        auto l = this->links(i);
        std::vector<std::size_t> sorted(l.begin(), l.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("NK links of a locus must be distinct");
        for (auto j : sorted)
            if (j >= n || j == i) throw std::invalid_argument("NK link out of range or self-referential");
    }
    for (double v : tables_)
        if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("NK table values must lie in [0,1)");
}

NkInstance NkInstance::generate(std::size_t n, std::size_t k, NeighborhoodKind kind, std::uint64_t seed) {
    if (n < 1 || n > 64) throw std::invalid_argument("NK requires 1 <= N <= 64");
    if (k > n - 1)
        throw std::invalid_argument("NK requires 0 <= K <= N-1, got K=" + std::to_string(k) + " for N=" +
                                    std::to_string(n));
    Rng rng(seed);
    std::vector<std::size_t> links;
    links.reserve(n * k);
    for (std::size_t i = 0; i < n; ++i) {
        auto l = kind == NeighborhoodKind::adjacent ? adjacent_links(n, k, i) : random_links(n, k, i, rng);
        links.insert(links.end(), l.begin(), l.end());
    }
    std::vector<double> tables(n * (std::size_t{1} << (k + 1)));
    for (auto& v : tables) v = rng.uniform01();
    return NkInstance(n, k, kind, seed, std::move(links), std::move(tables));
}

std::span<const std::size_t> NkInstance::links(std::size_t locus) const {
    return std::span<const std::size_t>(links_).subspan(locus * k_, k_);
}

std::span<const double> NkInstance::table(std::size_t locus) const {
    return std::span<const double>(tables_).subspan(locus * table_size(), table_size());
}

std::size_t NkInstance::component_index(std::size_t locus, std::uint64_t x) const noexcept {
    std::size_t idx = (x >> locus) & 1u;
    const std::size_t* l = links_.data() + locus * k_;
    for (std::size_t j = 0; j < k_; ++j) idx = (idx << 1) | ((x >> l[j]) & 1u);
    return idx;
}

double NkInstance::evaluate(std::uint64_t x) const noexcept {
    const std::size_t rows = table_size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) sum += tables_[i * rows + component_index(i, x)];
    return sum / static_cast<double>(n_);
}

double NkInstance::fitness(const BitString& x) const {
    if (x.size() != n_)
        throw std::invalid_argument("bit string length " + std::to_string(x.size()) + " does not match N=" +
                                    std::to_string(n_));
    return evaluate(x.packed());
}

NkOptimum exhaustive_optimum(const NkInstance& inst) {
    const std::size_t n = inst.n();
    if (n > kExhaustiveMaxN)
        throw std::invalid_argument("exhaustive search limited to N <= " + std::to_string(kExhaustiveMaxN));
    std::uint64_t best = lex_unrank(0, n);
    double best_value = inst.evaluate(best);
    for (std::uint64_t rank = 1; rank < (std::uint64_t{1} << n); ++rank) {
        const std::uint64_t x = lex_unrank(rank, n);
        const double v = inst.evaluate(x);
        if (v > best_value) {
            best_value = v;
            best = x;
        }
    }
    return {BitString(n, best), best_value};
}

NkInstance normalize_to_one(const NkInstance& inst) {
    const auto opt = exhaustive_optimum(inst);
    const std::uint64_t m = ~opt.argmax.packed() & low_mask(inst.n());
    if (m == 0) return inst;
    const std::size_t rows = inst.table_size();
    std::vector<double> tables(inst.all_tables().begin(), inst.all_tables().end());
    for (std::size_t i = 0; i < inst.n(); ++i) {
        // f'_i(idx) = f_i(idx XOR mask bits of the locus and its links).
        const std::size_t flip = inst.component_index(i, m);
        const auto old = inst.table(i);
        for (std::size_t idx = 0; idx < rows; ++idx) tables[i * rows + idx] = old[idx ^ flip];
    }
    return NkInstance(inst.n(), inst.k(), inst.kind(), inst.seed(),
                      std::vector<std::size_t>(inst.all_links().begin(), inst.all_links().end()),
                      std::move(tables), inst.mask() ^ m);
}

double theoretical_tau(std::size_t n, std::size_t k) {
    if (n == 0 || k + 1 >= n) throw std::domain_error("correlation length needs K+1 < N");
    return -1.0 / std::log(1.0 - static_cast<double>(k + 1) / static_cast<double>(n));
}

double theoretical_rho(std::size_t n, std::size_t k, std::size_t s) {
    if (n == 0 || k + 1 > n) throw std::domain_error("autocorrelation needs K < N");
    return std::pow(1.0 - static_cast<double>(k + 1) / static_cast<double>(n), static_cast<double>(s));
}

OptimaFitnessStats theoretical_optima_stats(std::size_t n, std::size_t k, double mu, double sigma) {
    if (n == 0 || k + 1 > n) throw std::domain_error("optima statistics need K < N");
    if (sigma < 0) throw std::domain_error("sigma must be non-negative");
    const double kp1 = static_cast<double>(k + 1);
    const double log_term = std::log(kp1);
    const double mean = mu + sigma * std::sqrt(2.0 * log_term / kp1);
    const double variance =
        kp1 * sigma * sigma / (static_cast<double>(n) * (kp1 + 2.0 * (static_cast<double>(k) + 2.0) * log_term));
    return {mean, variance};
}

double expected_optima_count(std::size_t n) {
    if (n == 0) throw std::domain_error("N must be positive");
    return std::ldexp(1.0, static_cast<int>(n)) / static_cast<double>(n + 1);
}

}  // namespace epiroad
