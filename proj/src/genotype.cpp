#include "epiroad/genotype.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <stdexcept>
#include <string_view>

namespace epiroad {

namespace {

constexpr std::string_view kDisplayLetters = "ATGCBDEFHIJKLMNOPQRSUVWXYZ";

}  // namespace

Alphabet::Alphabet(std::size_t size) : size_(size) {
    if (size == 0) throw std::invalid_argument("alphabet size must be positive");
    if (size > 0xFFFF) throw std::invalid_argument("alphabet size exceeds letter range");
}

void Genotype::insert(std::size_t gap, Letter l) {
    if (gap > symbols_.size()) throw std::out_of_range("insertion gap out of range");
    symbols_.insert(symbols_.begin() + static_cast<std::ptrdiff_t>(gap), l);
}

void Genotype::erase(std::size_t pos) {
    if (pos >= symbols_.size()) throw std::out_of_range("deletion position out of range");
    symbols_.erase(symbols_.begin() + static_cast<std::ptrdiff_t>(pos));
}

bool Genotype::valid_over(const Alphabet& alphabet) const noexcept {
    return std::all_of(symbols_.begin(), symbols_.end(),
                       [&](Letter l) { return alphabet.contains(l); });
}

void BlockParams::validate() const {
    if (block_size < 1) throw std::invalid_argument("block size b must be >= 1");
    if (n_letters < 1 || n_letters > kMaxBlockLetters)
        throw std::invalid_argument("alphabet size N must be in [1, 64]");
    if (lambda_max < n_letters * block_size)
        throw std::invalid_argument("lambda_max must be at least N*b");
}

bool has_block(const Genotype& g, Letter letter, std::size_t b) {
    if (b == 0) return true;
    std::size_t run = 0;
    for (Letter s : g) {
        run = (s == letter) ? run + 1 : 0;
        if (run >= b) return true;
    }
    return false;
}

BlockMask block_vector(const Genotype& g, std::size_t n_letters, std::size_t b) {
    if (n_letters > kMaxBlockLetters) throw std::invalid_argument("block vector limited to 64 letters");
    BlockMask mask = 0;
    const auto s = g.symbols();
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t j = i + 1;
        while (j < s.size() && s[j] == s[i]) ++j;
        if (j - i >= b && s[i] < n_letters) mask |= BlockMask{1} << s[i];
        i = j;
    }
    return mask;
}

int block_count(BlockMask mask) noexcept { return std::popcount(mask); }

Edit neighbor_edit(const Genotype& g, std::size_t n_letters, std::size_t index) {
    const std::size_t inserts = insertion_count(g.size(), n_letters);
    if (index < inserts)
        return {EditKind::insertion, index / n_letters, static_cast<Letter>(index % n_letters)};
    index -= inserts;
    const std::size_t pos = index / n_letters;
    if (pos >= g.size()) throw std::out_of_range("neighbour index out of range");
    const auto letter = static_cast<Letter>(index % n_letters);
    if (letter == g[pos]) return {EditKind::deletion, pos, letter};
    return {EditKind::substitution, pos, letter};
}

void apply_edit_into(const Genotype& g, const Edit& e, Genotype& out) {
    out = g;
    switch (e.kind) {
        case EditKind::insertion: out.insert(e.position, e.letter); break;
        case EditKind::deletion: out.erase(e.position); break;
        case EditKind::substitution: out.substitute(e.position, e.letter); break;
    }
}

Genotype apply_edit(const Genotype& g, const Edit& e) {
    Genotype out;
    apply_edit_into(g, e, out);
    return out;
}

std::vector<Genotype> enumerate_neighbors(const Genotype& g, const Alphabet& alphabet) {
    const std::size_t total = neighborhood_size(g.size(), alphabet.size());
    std::vector<Genotype> out;
    out.reserve(total);
    for (std::size_t i = 0; i < total; ++i) out.push_back(apply_edit(g, neighbor_edit(g, alphabet.size(), i)));
    return out;
}

Genotype random_genotype(std::size_t max_len, const Alphabet& alphabet, Rng& rng) {
    const std::size_t len = rng.below(max_len + 1);
    std::vector<Letter> symbols(len);
    for (auto& s : symbols) s = static_cast<Letter>(rng.below(alphabet.size()));
    return Genotype(std::move(symbols));
}

std::size_t edit_distance(const Genotype& a, const Genotype& b) {
    const auto x = a.symbols();
    const auto y = b.symbols();
    std::vector<std::size_t> row(y.size() + 1);
    for (std::size_t j = 0; j <= y.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= y.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({up + 1, row[j - 1] + 1, diag + (x[i - 1] == y[j - 1] ? 0u : 1u)});
            diag = up;
        }
    }
    return row[y.size()];
}

char display_letter(Letter l) {
    if (l >= kDisplayLetters.size()) throw std::out_of_range("no display letter beyond 26");
    return kDisplayLetters[l];
}

std::string to_text(const Genotype& g, const Alphabet& alphabet) {
    std::string out;
    if (alphabet.size() <= kDisplayLetters.size()) {
        for (Letter l : g) out.push_back(display_letter(l));
        return out;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(g[i]);
    }
    return out;
}

Genotype parse_genotype(std::string_view text, const Alphabet& alphabet) {
    std::vector<Letter> symbols;
    if (alphabet.size() <= kDisplayLetters.size()) {
        for (char c : text) {
            const auto at = kDisplayLetters.find(c);
            if (at == std::string_view::npos || at >= alphabet.size())
                throw std::invalid_argument(std::string("unknown genotype symbol '") + c + "'");
            symbols.push_back(static_cast<Letter>(at));
        }
        return Genotype(std::move(symbols));
    }
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto field = text.substr(0, comma);
        unsigned value = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || ptr != field.data() + field.size() || value >= alphabet.size())
            throw std::invalid_argument("bad genotype index '" + std::string(field) + "'");
        symbols.push_back(static_cast<Letter>(value));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return Genotype(std::move(symbols));
}

NeighborBlockMasks::NeighborBlockMasks(const Genotype& g, std::size_t n_letters, std::size_t b)
    : n_letters_(n_letters), b_(b), length_(g.size()), run_of_(g.size()), blocks_(n_letters, 0) {
    if (n_letters > kMaxBlockLetters) throw std::invalid_argument("block vector limited to 64 letters");
    if (!g.valid_over(Alphabet(n_letters))) throw std::invalid_argument("genotype uses letters outside the alphabet");
    std::size_t i = 0;
    while (i < g.size()) {
        std::size_t j = i + 1;
        while (j < g.size() && g[j] == g[i]) ++j;
        for (std::size_t p = i; p < j; ++p) run_of_[p] = runs_.size();
        runs_.push_back({g[i], i, j - i});
        if (j - i >= b) {
            ++blocks_[g[i]];
            base_ |= BlockMask{1} << g[i];
        }
        i = j;
    }
}

BlockMask NeighborBlockMasks::operator()(const Edit& e) const {
    struct Piece {
        Letter letter;
        std::size_t length;
    };
    Piece pieces[6];
    std::size_t count = 0;
    auto push = [&](Letter l, std::size_t len) {
        if (len == 0) return;
        if (count > 0 && pieces[count - 1].letter == l) pieces[count - 1].length += len;
        else pieces[count++] = {l, len};
    };

    // Affected runs [lo, hi) are rebuilt as pieces with the edit applied.
    std::size_t lo = 0, hi = 0;
    if (e.kind == EditKind::insertion) {
        const std::size_t q = e.position;
        if (q > length_) throw std::out_of_range("insertion gap out of range");
        const std::size_t r = q < length_ ? run_of_[q] : runs_.size();
        if (r < runs_.size() && q > runs_[r].start) {
            lo = r > 0 ? r - 1 : 0;
            hi = std::min(r + 2, runs_.size());
            for (std::size_t k = lo; k < hi; ++k) {
                const Run& run = runs_[k];
                if (k == r) {
                    push(run.letter, q - run.start);
                    push(e.letter, 1);
                    push(run.letter, run.start + run.length - q);
                } else {
                    push(run.letter, run.length);
                }
            }
        } else {
            lo = r > 0 ? r - 1 : 0;
            hi = std::min(r + 1, runs_.size());
            if (r > 0) push(runs_[r - 1].letter, runs_[r - 1].length);
            push(e.letter, 1);
            if (r < runs_.size()) push(runs_[r].letter, runs_[r].length);
        }
    } else {
        if (e.position >= length_) throw std::out_of_range("edit position out of range");
        const std::size_t r = run_of_[e.position];
        lo = r > 0 ? r - 1 : 0;
        hi = std::min(r + 2, runs_.size());
        for (std::size_t k = lo; k < hi; ++k) {
            const Run& run = runs_[k];
            if (k != r) {
                push(run.letter, run.length);
            } else if (e.kind == EditKind::deletion) {
                push(run.letter, run.length - 1);
            } else {
                push(run.letter, e.position - run.start);
                push(e.letter, 1);
                push(run.letter, run.start + run.length - e.position - 1);
            }
        }
    }

    // Letters whose block status may change: those of the old and new runs.
    Letter touched[12];
    int delta[12];
    std::size_t nt = 0;
    auto adjust = [&](Letter l, int d) {
        for (std::size_t t = 0; t < nt; ++t)
            if (touched[t] == l) {
                delta[t] += d;
                return;
            }
        touched[nt] = l;
        delta[nt++] = d;
    };
    for (std::size_t k = lo; k < hi; ++k) adjust(runs_[k].letter, runs_[k].length >= b_ ? -1 : 0);
    for (std::size_t k = 0; k < count; ++k) adjust(pieces[k].letter, pieces[k].length >= b_ ? 1 : 0);

    BlockMask mask = base_;
    for (std::size_t t = 0; t < nt; ++t) {
        if (touched[t] >= n_letters_) continue;
        const auto bit = BlockMask{1} << touched[t];
        if (static_cast<int>(blocks_[touched[t]]) + delta[t] > 0) mask |= bit;
        else mask &= ~bit;
    }
    return mask;
}

}  // namespace epiroad
