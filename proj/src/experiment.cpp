#include "epiroad/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "epiroad/parallel.hpp"

namespace epiroad {

namespace {

using LandscapeSource = std::function<ErLandscape(const GridCell&, std::size_t index, std::uint64_t seed)>;

std::vector<std::size_t> size_list(const json& v, const char* what) {
    if (v.is_number_unsigned()) return {v.get<std::size_t>()};
    if (!v.is_array()) throw std::invalid_argument(std::string("grid '") + what + "' must be a list of integers");
    std::vector<std::size_t> out;
    for (const auto& x : v) {
        if (!x.is_number_unsigned())
            throw std::invalid_argument(std::string("grid '") + what + "' must hold non-negative integers");
        out.push_back(x.get<std::size_t>());
    }
    return out;
}

std::vector<GridCell> grid_from_json(const json& g) {
    if (g.is_array()) {
        std::vector<GridCell> cells;
        for (const auto& t : g) {
            const auto v = size_list(t, "cell");
            if (v.size() != 3) throw std::invalid_argument("grid cells are [N, K, b] triples");
            const auto one = make_grid(std::span(v.data(), 1), std::span(v.data() + 1, 1), std::span(v.data() + 2, 1));
            cells.push_back(one.front());
        }
        return cells;
    }
    if (!g.is_object()) throw std::invalid_argument("grid must be an object {n, k, b} or a list of triples");
    const auto ns = size_list(g.at("n"), "n");
    const auto bs = size_list(g.at("b"), "b");
    const json& k = g.at("k");
    if (k.is_string()) {
        const auto mode = k.get<std::string>();
        if (mode != "all" && mode != "half") throw std::invalid_argument("grid 'k' must be a list, \"all\" or \"half\"");
        std::vector<GridCell> cells;
        for (auto n : ns) {
            if (n == 0) throw std::invalid_argument("grid N must be positive");
            const std::size_t top = mode == "all" ? n - 1 : n / 2;
            for (std::size_t kk = 0; kk <= top; ++kk)
                for (auto b : bs) cells.push_back({n, kk, b});
        }
        return cells;
    }
    const auto ks = size_list(k, "k");
    return make_grid(ns, ks, bs);
}

template <typename T>
void read_field(const json& obj, const char* key, T& field) {
    if (obj.contains(key)) field = obj.at(key).get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
            throw std::invalid_argument("unknown field '" + key + "' in " + where);
}

std::string cell_text(const GridCell& c) {
    return "N=" + std::to_string(c.n) + " K=" + std::to_string(c.k) + " b=" + std::to_string(c.b);
}

void provenance_header(CsvTable& table, const ExperimentSpec& spec, const std::string& name) {
    table.add_comment("epiroad " + std::string(kVersion));
    table.add_comment("table " + name);
    table.add_comment("spec_hash " + spec_hash(spec));
    table.add_comment("master_seed " + std::to_string(spec.seed));
}

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }

double nan_mean(const std::vector<double>& v) {
    double sum = 0.0;
    std::size_t used = 0;
    for (double x : v)
        if (!std::isnan(x)) {
            sum += x;
            ++used;
        }
    return used ? sum / static_cast<double>(used) : NAN;
}

std::vector<InstanceAnalysis> analyze_grid(const ExperimentSpec& spec, const LandscapeSource& source, unsigned jobs,
                                           CommandStatus& status) {
    std::vector<InstanceAnalysis> rows;
    for (const auto& cell : spec.grid) {
        std::size_t failed = 0;
        for (std::size_t i = 0; i < spec.instances; ++i) {
            const std::uint64_t seed = instance_seed(spec.seed, cell, i);
            try {
                const ErLandscape landscape = source(cell, i, seed);
                rows.push_back(analyze_instance(spec, landscape, cell, i, seed, jobs));
            } catch (const std::exception& e) {
                InstanceAnalysis failed_row;
                failed_row.cell = cell;
                failed_row.instance_index = i;
                failed_row.instance_seed = seed;
                failed_row.error = e.what();
                rows.push_back(std::move(failed_row));
            }
            if (!rows.back().error.empty()) {
                ++failed;
                status.errors.push_back(cell_text(cell) + " instance " + std::to_string(i) + ": " + rows.back().error);
            }
        }
        if (spec.instances > 0 && failed == spec.instances) status.any_cell_failed = true;
    }
    return rows;
}

std::vector<CellAnalysis> aggregate_grid(const ExperimentSpec& spec, const std::vector<InstanceAnalysis>& rows) {
    std::vector<CellAnalysis> cells;
    for (const auto& cell : spec.grid) {
        std::vector<InstanceAnalysis> mine;
        for (const auto& r : rows)
            if (r.cell == cell) mine.push_back(r);
        cells.push_back(aggregate_cell(cell, mine, spec.random_walk.max_lag));
    }
    return cells;
}

struct EvolveOutcome {
    std::vector<RunRecord> runs;
    std::vector<CellSummary> cells;
};

EvolveOutcome evolve_grid(const ExperimentSpec& spec, const LandscapeSource& source, unsigned jobs,
                          CommandStatus& status) {
    EaConfig cfg = spec.ea;
    cfg.seed = spec.seed;
    cfg.landscape_instances = spec.instances;
    std::vector<ErLandscape> loaded;
    loaded.reserve(spec.grid.size() * spec.instances);
    std::vector<LandscapeRef> refs;
    std::map<std::size_t, std::size_t> failures;
    for (std::size_t c = 0; c < spec.grid.size(); ++c) {
        const auto& cell = spec.grid[c];
        for (std::size_t i = 0; i < spec.instances; ++i) {
            const std::uint64_t seed = instance_seed(spec.seed, cell, i);
            try {
                ErLandscape landscape = source(cell, i, seed);
                if (landscape.lambda_max() < cfg.max_program_size)
                    throw std::invalid_argument("landscape lambda_max " + std::to_string(landscape.lambda_max()) +
                                                " is below max_program_size");
                loaded.push_back(std::move(landscape));
                refs.push_back({cell, i, seed, nullptr});
            } catch (const std::exception& e) {
                ++failures[c];
                status.errors.push_back(cell_text(cell) + " instance " + std::to_string(i) + ": " + e.what());
            }
        }
        if (spec.instances > 0 && failures[c] == spec.instances) status.any_cell_failed = true;
    }
    for (std::size_t j = 0; j < refs.size(); ++j) refs[j].landscape = &loaded[j];
    EvolveOutcome out;
    out.runs = run_on(refs, cfg, jobs);
    for (const auto& cell : spec.grid) out.cells.push_back(summarize(cell, out.runs));
    return out;
}

ErLandscape build_landscape(const ExperimentSpec& spec, const GridCell& cell, std::uint64_t seed) {
    return ErLandscape::build(cell.n, cell.k, cell.b, landscape_lambda_max(spec, cell), seed);
}

LandscapeSource builder(const ExperimentSpec& spec) {
    return [&spec](const GridCell& cell, std::size_t, std::uint64_t seed) { return build_landscape(spec, cell, seed); };
}

LandscapeSource file_loader(const std::filesystem::path& out) {
    return [out](const GridCell& cell, std::size_t index, std::uint64_t) {
        const auto path = landscape_path(out, cell, index);
        if (!std::filesystem::exists(path)) throw IoError("missing landscape file " + path.string());
        return load_landscape(path);
    };
}

void write_traces(const std::filesystem::path& path, const std::vector<RunRecord>& runs) {
    std::string text;
    for (const auto& r : runs) {
        json line = {{"n", r.cell.n},
                     {"k", r.cell.k},
                     {"b", r.cell.b},
                     {"instance_seed", r.instance_seed},
                     {"run_index", r.run_index},
                     {"best_fitness", r.result.best_fitness_trace},
                     {"best_blocks", r.result.best_blocks_trace}};
        text += line.dump() + "\n";
    }
    write_text_file(path, text);
}

void write_walk_log(const std::filesystem::path& path, const std::vector<InstanceAnalysis>& rows) {
    std::string text;
    for (const auto& r : rows) {
        if (!r.adaptive_walk) continue;
        const Alphabet alphabet(r.cell.n);
        for (std::size_t w = 0; w < r.adaptive_walk->walks.size(); ++w) {
            const auto& walk = r.adaptive_walk->walks[w];
            json line = {{"n", r.cell.n},
                         {"k", r.cell.k},
                         {"b", r.cell.b},
                         {"instance_seed", r.instance_seed},
                         {"walk", w},
                         {"length", walk.length},
                         {"final_fitness", walk.final_fitness},
                         {"final_genotype", to_text(walk.final_genotype, alphabet)}};
            text += line.dump() + "\n";
        }
    }
    write_text_file(path, text);
}

}  // namespace

std::vector<GridCell> make_grid(std::span<const std::size_t> ns, std::span<const std::size_t> ks,
                                std::span<const std::size_t> bs) {
    std::vector<GridCell> cells;
    for (auto n : ns)
        for (auto k : ks) {
            if (n == 0) throw std::invalid_argument("grid N must be positive");
            if (k >= n)
                throw std::invalid_argument("invalid grid pair (N=" + std::to_string(n) + ", K=" + std::to_string(k) +
                                            "): K must be below N");
            for (auto b : bs) {
                if (b == 0) throw std::invalid_argument("grid b must be positive");
                if (n > kExhaustiveMaxN)
                    throw std::invalid_argument("grid N=" + std::to_string(n) + " exceeds the exhaustive bound " +
                                                std::to_string(kExhaustiveMaxN));
                cells.push_back({n, k, b});
            }
        }
    return cells;
}

ExperimentSpec spec_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("experiment spec must be a JSON object");
    reject_unknown(doc,
                   {"command", "grid", "instances", "seed", "lambda_max", "random_walk", "adaptive_walk", "neutrality",
                    "campaigns", "ea", "raw_logs"},
                   "experiment spec");
    ExperimentSpec spec;
    try {
        if (doc.contains("grid")) spec.grid = grid_from_json(doc.at("grid"));
        read_field(doc, "instances", spec.instances);
        read_field(doc, "seed", spec.seed);
        read_field(doc, "lambda_max", spec.lambda_max);
        read_field(doc, "raw_logs", spec.raw_logs);
        if (doc.contains("random_walk")) {
            const auto& rw = doc.at("random_walk");
            reject_unknown(rw, {"walks", "length", "lambda_max", "max_lag"}, "random_walk");
            read_field(rw, "walks", spec.random_walk.walks);
            read_field(rw, "length", spec.random_walk.length);
            read_field(rw, "lambda_max", spec.random_walk.lambda_max);
            read_field(rw, "max_lag", spec.random_walk.max_lag);
        }
        if (doc.contains("adaptive_walk")) {
            const auto& aw = doc.at("adaptive_walk");
            reject_unknown(aw, {"walks", "lambda_max"}, "adaptive_walk");
            read_field(aw, "walks", spec.adaptive_walk.walks);
            read_field(aw, "lambda_max", spec.adaptive_walk.lambda_max);
        }
        if (doc.contains("neutrality")) {
            const auto& nt = doc.at("neutrality");
            reject_unknown(nt, {"walks", "length", "lambda_max"}, "neutrality");
            read_field(nt, "walks", spec.neutrality.walks);
            read_field(nt, "length", spec.neutrality.length);
            read_field(nt, "lambda_max", spec.neutrality.lambda_max);
        }
        if (doc.contains("campaigns")) {
            spec.run_random_walk = spec.run_adaptive_walk = spec.run_neutrality = false;
            for (const auto& c : doc.at("campaigns")) {
                const auto name = c.get<std::string>();
                if (name == "random_walk") spec.run_random_walk = true;
                else if (name == "adaptive_walk") spec.run_adaptive_walk = true;
                else if (name == "neutrality") spec.run_neutrality = true;
                else throw std::invalid_argument("unknown campaign '" + name + "'");
            }
        }
        if (doc.contains("ea")) spec.ea = ea_config_from_json(doc.at("ea"));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed experiment spec: ") + e.what());
    }
    if (spec.instances == 0) throw std::invalid_argument("instances must be positive");
    spec.ea.landscape_instances = spec.instances;
    spec.ea.seed = spec.seed;
    return spec;
}

json to_json(const ExperimentSpec& spec) {
    json grid = json::array();
    for (const auto& c : spec.grid) grid.push_back({c.n, c.k, c.b});
    json campaigns = json::array();
    if (spec.run_random_walk) campaigns.push_back("random_walk");
    if (spec.run_adaptive_walk) campaigns.push_back("adaptive_walk");
    if (spec.run_neutrality) campaigns.push_back("neutrality");
    return {{"grid", grid},
            {"instances", spec.instances},
            {"seed", spec.seed},
            {"lambda_max", spec.lambda_max},
            {"random_walk",
             {{"walks", spec.random_walk.walks},
              {"length", spec.random_walk.length},
              {"lambda_max", spec.random_walk.lambda_max},
              {"max_lag", spec.random_walk.max_lag}}},
            {"adaptive_walk", {{"walks", spec.adaptive_walk.walks}, {"lambda_max", spec.adaptive_walk.lambda_max}}},
            {"neutrality",
             {{"walks", spec.neutrality.walks},
              {"length", spec.neutrality.length},
              {"lambda_max", spec.neutrality.lambda_max}}},
            {"campaigns", campaigns},
            {"ea", to_json(spec.ea)},
            {"raw_logs", spec.raw_logs}};
}

std::string spec_hash(const ExperimentSpec& spec) { return fnv1a_hex(to_json(spec).dump()); }

ExperimentSpec scaled(ExperimentSpec spec, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("scale must be positive");
    auto scale = [factor](std::size_t v, std::size_t floor) {
        return std::max<std::size_t>(floor, static_cast<std::size_t>(std::llround(static_cast<double>(v) * factor)));
    };
    spec.random_walk.walks = scale(spec.random_walk.walks, 2);
    spec.adaptive_walk.walks = scale(spec.adaptive_walk.walks, 2);
    spec.neutrality.walks = scale(spec.neutrality.walks, 1);
    spec.ea.runs = scale(spec.ea.runs, 1);
    spec.ea.population = scale(spec.ea.population, 10);
    return spec;
}

std::size_t landscape_lambda_max(const ExperimentSpec& spec, const GridCell& cell) {
    return std::max({spec.lambda_max, 2 * cell.n * cell.b, spec.ea.max_program_size});
}

std::filesystem::path landscape_path(const std::filesystem::path& out, const GridCell& cell, std::size_t index) {
    return out / "landscapes" /
           ("er_n" + std::to_string(cell.n) + "_k" + std::to_string(cell.k) + "_b" + std::to_string(cell.b) + "_i" +
            std::to_string(index) + ".json");
}

CommandStatus cmd_gen(const ExperimentSpec& spec, const std::filesystem::path& out, unsigned jobs) {
    // Every cell is validated before the first file is written.
    for (const auto& cell : spec.grid) {
        make_grid(std::span(&cell.n, 1), std::span(&cell.k, 1), std::span(&cell.b, 1));
        BlockParams{cell.b, cell.n, landscape_lambda_max(spec, cell)}.validate();
    }
    CommandStatus status;
    const std::string hash = spec_hash(spec);
    const std::size_t total = spec.grid.size() * spec.instances;
    std::vector<std::filesystem::path> paths(total);
    parallel_for(total, jobs, [&](std::size_t j) {
        const auto& cell = spec.grid[j / spec.instances];
        const std::size_t i = j % spec.instances;
        const std::uint64_t seed = instance_seed(spec.seed, cell, i);
        const json provenance = {{"version", kVersion},
                                 {"spec_hash", hash},
                                 {"master_seed", spec.seed},
                                 {"cell", {{"n", cell.n}, {"k", cell.k}, {"b", cell.b}}},
                                 {"instance_index", i},
                                 {"instance_seed", seed}};
        paths[j] = landscape_path(out, cell, i);
        save_landscape(paths[j], build_landscape(spec, cell, seed), provenance);
    });
    status.written = std::move(paths);
    return status;
}

InstanceAnalysis analyze_instance(const ExperimentSpec& spec, const ErLandscape& landscape, const GridCell& cell,
                                  std::size_t index, std::uint64_t seed, unsigned jobs) {
    InstanceAnalysis row;
    row.cell = cell;
    row.instance_index = index;
    row.instance_seed = seed;
    std::string errors;
    auto attempt = [&](const char* name, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            errors += std::string(errors.empty() ? "" : "; ") + name + ": " + e.what();
        }
    };
    if (spec.run_random_walk)
        attempt("random_walk", [&] {
            auto c = spec.random_walk;
            c.seed = derive_seed(seed, Stream::random_walk);
            row.random_walk = run_random_walks(landscape, c, jobs);
        });
    if (spec.run_adaptive_walk)
        attempt("adaptive_walk", [&] {
            auto c = spec.adaptive_walk;
            c.seed = derive_seed(seed, Stream::adaptive_walk);
            row.adaptive_walk = run_adaptive_walks(landscape, c, jobs);
        });
    if (spec.run_neutrality)
        attempt("neutrality", [&] {
            auto c = spec.neutrality;
            c.seed = derive_seed(seed, Stream::neutrality);
            row.neutrality = run_neutrality(landscape, c, jobs);
        });
    row.error = errors;
    return row;
}

CellAnalysis aggregate_cell(const GridCell& cell, std::span<const InstanceAnalysis> instances, std::size_t max_lag) {
    CellAnalysis out;
    out.cell = cell;
    std::vector<std::vector<double>> rho(max_lag + 1);
    std::vector<double> tau, fit_mean, fit_std, length, lower, equal, higher;
    for (const auto& r : instances) {
        if (!(r.cell == cell)) continue;
        if (!r.error.empty()) {
            ++out.failed;
            continue;
        }
        ++out.instances;
        if (r.random_walk) {
            for (std::size_t s = 0; s <= max_lag && s < r.random_walk->rho.size(); ++s)
                rho[s].push_back(r.random_walk->rho[s].value_or(NAN));
            tau.push_back(r.random_walk->tau.value_or(NAN));
        }
        if (r.adaptive_walk) {
            fit_mean.push_back(r.adaptive_walk->stats.mean_fitness);
            fit_std.push_back(r.adaptive_walk->stats.std_fitness);
            length.push_back(r.adaptive_walk->stats.mean_length);
        }
        if (r.neutrality) {
            lower.push_back(r.neutrality->proportions.lower);
            equal.push_back(r.neutrality->proportions.equal);
            higher.push_back(r.neutrality->proportions.higher);
        }
    }
    for (auto& values : rho) out.rho.push_back(nan_mean(values));
    out.tau = nan_mean(tau);
    out.optima_fitness_mean = nan_mean(fit_mean);
    out.optima_fitness_std = nan_mean(fit_std);
    out.mean_walk_length = nan_mean(length);
    out.est_optima_distance = 2.0 * out.mean_walk_length;
    out.neutrality = {nan_mean(lower), nan_mean(equal), nan_mean(higher)};
    return out;
}

CsvTable analysis_instance_table(const ExperimentSpec& spec, std::span<const InstanceAnalysis> rows) {
    std::vector<std::string> cols = {"n", "k", "b", "instance_index", "instance_seed"};
    for (std::size_t s = 1; s <= spec.random_walk.max_lag; ++s) cols.push_back("rho_" + std::to_string(s));
    for (const char* c : {"tau", "optima_fitness_mean", "optima_fitness_std", "optima_skewness",
                          "optima_excess_kurtosis", "mean_walk_length", "est_optima_distance", "neutral_lower",
                          "neutral_equal", "neutral_higher", "status"})
        cols.push_back(c);
    CsvTable table(std::move(cols));
    provenance_header(table, spec, "analysis_instances");
    for (const auto& r : rows) {
        std::vector<std::string> f = {num(r.cell.n), num(r.cell.k), num(r.cell.b), num(r.instance_index),
                                      std::to_string(r.instance_seed)};
        for (std::size_t s = 1; s <= spec.random_walk.max_lag; ++s)
            f.push_back(num(r.random_walk && s < r.random_walk->rho.size() ? r.random_walk->rho[s].value_or(NAN) : NAN));
        f.push_back(num(r.random_walk ? r.random_walk->tau.value_or(NAN) : NAN));
        const LocalOptimaStats* st = r.adaptive_walk ? &r.adaptive_walk->stats : nullptr;
        f.push_back(num(st ? st->mean_fitness : NAN));
        f.push_back(num(st ? st->std_fitness : NAN));
        f.push_back(num(st ? st->skewness : NAN));
        f.push_back(num(st ? st->excess_kurtosis : NAN));
        f.push_back(num(st ? st->mean_length : NAN));
        f.push_back(num(st ? st->est_optima_distance : NAN));
        f.push_back(num(r.neutrality ? r.neutrality->proportions.lower : NAN));
        f.push_back(num(r.neutrality ? r.neutrality->proportions.equal : NAN));
        f.push_back(num(r.neutrality ? r.neutrality->proportions.higher : NAN));
        f.push_back(r.error.empty() ? "ok" : "failed");
        table.add_row(std::move(f));
    }
    return table;
}

CsvTable analysis_cell_table(const ExperimentSpec& spec, std::span<const CellAnalysis> cells) {
    std::vector<std::string> cols = {"n", "k", "b", "instances", "failed"};
    for (std::size_t s = 1; s <= spec.random_walk.max_lag; ++s) cols.push_back("rho_" + std::to_string(s));
    for (const char* c : {"tau", "tau_nk_theory", "optima_fitness_mean", "optima_fitness_std", "mean_walk_length",
                          "est_optima_distance", "neutral_lower", "neutral_equal", "neutral_higher"})
        cols.push_back(c);
    CsvTable table(std::move(cols));
    provenance_header(table, spec, "analysis_cells");
    for (const auto& c : cells) {
        std::vector<std::string> f = {num(c.cell.n), num(c.cell.k), num(c.cell.b), num(c.instances), num(c.failed)};
        for (std::size_t s = 1; s <= spec.random_walk.max_lag; ++s) f.push_back(num(s < c.rho.size() ? c.rho[s] : NAN));
        f.push_back(num(c.tau));
        f.push_back(num(c.cell.k + 1 < c.cell.n ? theoretical_tau(c.cell.n, c.cell.k) : NAN));
        f.push_back(num(c.optima_fitness_mean));
        f.push_back(num(c.optima_fitness_std));
        f.push_back(num(c.mean_walk_length));
        f.push_back(num(c.est_optima_distance));
        f.push_back(num(c.neutrality.lower));
        f.push_back(num(c.neutrality.equal));
        f.push_back(num(c.neutrality.higher));
        table.add_row(std::move(f));
    }
    return table;
}

CsvTable evolve_run_table(const ExperimentSpec& spec, std::span<const RunRecord> runs) {
    CsvTable table({"n", "k", "b", "instance_seed", "run_index", "success", "generations_to_success", "final_blocks"});
    provenance_header(table, spec, "evolve_runs");
    for (const auto& r : runs)
        table.add_row({num(r.cell.n), num(r.cell.k), num(r.cell.b), std::to_string(r.instance_seed), num(r.run_index),
                       r.result.success ? "1" : "0",
                       r.result.generations_to_success ? num(*r.result.generations_to_success) : "",
                       std::to_string(r.result.final_blocks())});
    return table;
}

CsvTable evolve_cell_table(const ExperimentSpec& spec, std::span<const CellSummary> cells) {
    CsvTable table({"n", "k", "b", "runs", "successes", "success_rate", "mean_final_blocks"});
    provenance_header(table, spec, "evolve_cells");
    for (const auto& c : cells)
        table.add_row({num(c.cell.n), num(c.cell.k), num(c.cell.b), num(c.runs), num(c.successes), num(c.success_rate),
                       num(c.mean_final_blocks)});
    return table;
}

CommandStatus cmd_analyze(const ExperimentSpec& spec, const std::filesystem::path& out, unsigned jobs) {
    CommandStatus status;
    const auto rows = analyze_grid(spec, file_loader(out), jobs, status);
    const auto cells = aggregate_grid(spec, rows);
    const auto a = out / "analysis_instances.csv";
    const auto b = out / "analysis_cells.csv";
    analysis_instance_table(spec, rows).write(a);
    analysis_cell_table(spec, cells).write(b);
    status.written = {a, b};
    if (spec.raw_logs) {
        const auto log = out / "adaptive_walks.jsonl";
        write_walk_log(log, rows);
        status.written.push_back(log);
    }
    return status;
}

CommandStatus cmd_evolve(const ExperimentSpec& spec, const std::filesystem::path& out, unsigned jobs) {
    CommandStatus status;
    const auto result = evolve_grid(spec, file_loader(out), jobs, status);
    const auto a = out / "evolve_runs.csv";
    const auto b = out / "evolve_cells.csv";
    evolve_run_table(spec, result.runs).write(a);
    evolve_cell_table(spec, result.cells).write(b);
    status.written = {a, b};
    if (spec.raw_logs) {
        const auto traces = out / "evolve_traces.jsonl";
        write_traces(traces, result.runs);
        status.written.push_back(traces);
    }
    return status;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0 && syy > 0)) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// -- presets -----------------------------------------------------------------------

namespace {

struct ReferenceRow {
    std::size_t b;
    double lower, equal, higher;
};

// Lower / equal / higher neighbour percentages for N=8, K=4.
constexpr ReferenceRow kNeutralityTable[] = {{2, 7.2, 85.8, 7.0}, {3, 2.8, 94.4, 2.8}, {4, 0.5, 98.9, 0.6}};

std::vector<GridCell> k_sweep(std::size_t n, std::size_t k_top, std::initializer_list<std::size_t> bs) {
    std::vector<GridCell> cells;
    for (std::size_t k = 0; k <= k_top; ++k)
        for (auto b : bs) cells.push_back({n, k, b});
    return cells;
}

void only(ExperimentSpec& spec, bool random_walk, bool adaptive_walk, bool neutrality) {
    spec.run_random_walk = random_walk;
    spec.run_adaptive_walk = adaptive_walk;
    spec.run_neutrality = neutrality;
}

std::string fixed(double v, int digits) {
    if (std::isnan(v)) return "nan";
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"table1", "fig1", "fig3", "fig5", "fig6", "fig7", "fig8", "corr-study"};
}

ExperimentSpec preset_spec(const std::string& name, std::uint64_t seed) {
    ExperimentSpec spec;
    spec.seed = seed;
    spec.ea.seed = seed;
    if (name == "table1") {
        spec.grid = {{8, 4, 2}, {8, 4, 3}, {8, 4, 4}};
        only(spec, false, false, true);
    } else if (name == "fig1" || name == "fig3") {
        spec.grid = k_sweep(10, 9, {1, 2, 3, 4, 5});
        only(spec, true, false, false);
    } else if (name == "fig5") {
        spec.grid = k_sweep(10, 9, {1, 2, 3, 4, 5});
        only(spec, false, true, false);
    } else if (name == "fig6") {
        spec.grid = k_sweep(8, 4, {2, 3, 4, 5});
        only(spec, false, false, false);
    } else if (name == "fig7") {
        spec.grid = k_sweep(10, 5, {4});
        only(spec, false, false, false);
    } else if (name == "fig8") {
        spec.grid = k_sweep(16, 8, {2, 3, 4, 5});
        only(spec, false, false, false);
    } else if (name == "corr-study") {
        for (std::size_t n : {8, 10, 16}) {
            const auto cells = k_sweep(n, n / 2, {2, 3, 4, 5});
            spec.grid.insert(spec.grid.end(), cells.begin(), cells.end());
        }
        only(spec, true, true, false);
    } else {
        std::string names;
        for (const auto& p : preset_names()) names += (names.empty() ? "" : ", ") + p;
        throw std::invalid_argument("unknown preset '" + name + "'; available: " + names);
    }
    spec.ea.landscape_instances = spec.instances;
    return spec;
}

CommandStatus cmd_reproduce(const std::string& name, const ExperimentSpec& spec, const std::filesystem::path& out,
                            unsigned jobs, std::ostream& report) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) preset_spec(name, spec.seed);  // throws

    CommandStatus status;
    auto emit = [&](const CsvTable& table, const std::string& file) {
        if (out.empty()) return;
        table.write(out / file);
        status.written.push_back(out / file);
    };
    const bool analysis = name == "table1" || name == "fig1" || name == "fig3" || name == "fig5" || name == "corr-study";
    const bool evolution = name == "fig6" || name == "fig7" || name == "fig8" || name == "corr-study";

    std::vector<CellAnalysis> cells;
    if (analysis) {
        const auto rows = analyze_grid(spec, builder(spec), jobs, status);
        cells = aggregate_grid(spec, rows);
        emit(analysis_instance_table(spec, rows), name + "_instances.csv");
        emit(analysis_cell_table(spec, cells), name + "_cells.csv");
    }
    EvolveOutcome evo;
    if (evolution) {
        evo = evolve_grid(spec, builder(spec), jobs, status);
        emit(evolve_run_table(spec, evo.runs), name + "_runs.csv");
        emit(evolve_cell_table(spec, evo.cells), name + "_ea_cells.csv");
    }

    report << "preset " << name << " (seed " << spec.seed << ", " << spec.instances << " instances per cell)\n";
    if (name == "table1") {
        report << "b  lower%  equal%  higher%   reference: lower equal higher\n";
        for (const auto& c : cells) {
            const auto* ref = std::find_if(std::begin(kNeutralityTable), std::end(kNeutralityTable),
                                             [&](const ReferenceRow& r) { return r.b == c.cell.b; });
            report << c.cell.b << "  " << fixed(100 * c.neutrality.lower, 2) << "  " << fixed(100 * c.neutrality.equal, 2)
                   << "  " << fixed(100 * c.neutrality.higher, 2);
            if (ref != std::end(kNeutralityTable))
                report << "   reference: " << ref->lower << " " << ref->equal << " " << ref->higher;
            report << '\n';
        }
    } else if (name == "fig1") {
        report << "mean correlation length tau (N=10); last column is the NK closed form\n";
        for (const auto& c : cells)
            report << "K=" << c.cell.k << " b=" << c.cell.b << " tau=" << fixed(c.tau, 3) << " nk_tau="
                   << (c.cell.k + 1 < c.cell.n ? fixed(theoretical_tau(c.cell.n, c.cell.k), 3) : "inf") << '\n';
    } else if (name == "fig3") {
        CsvTable curves({"n", "k", "b", "s", "rho", "rho_nk_theory"});
        provenance_header(curves, spec, "fig3_curves");
        for (const auto& c : cells) {
            report << "K=" << c.cell.k << " b=" << c.cell.b << " rho(s), s=1..5:";
            for (std::size_t s = 0; s < c.rho.size(); ++s) {
                curves.add_row({num(c.cell.n), num(c.cell.k), num(c.cell.b), num(s), num(c.rho[s]),
                                num(theoretical_rho(c.cell.n, c.cell.k, s))});
                if (s >= 1 && s <= 5) report << ' ' << fixed(c.rho[s], 3);
            }
            report << '\n';
        }
        emit(curves, "fig3_curves.csv");
    } else if (name == "fig5") {
        report << "adaptive walks (N=10): mean local-optimum fitness, mean walk length\n";
        for (const auto& c : cells)
            report << "K=" << c.cell.k << " b=" << c.cell.b << " optima_fitness=" << fixed(c.optima_fitness_mean, 4)
                   << " walk_length=" << fixed(c.mean_walk_length, 3) << '\n';
    } else if (name == "fig6" || name == "fig8") {
        report << (name == "fig6" ? "success rate" : "mean blocks of best individual") << " by K and b\n";
        for (const auto& c : evo.cells)
            report << "K=" << c.cell.k << " b=" << c.cell.b << " success_rate=" << fixed(c.success_rate, 3)
                   << " mean_blocks=" << fixed(c.mean_final_blocks, 3) << " runs=" << c.runs << '\n';
    } else if (name == "fig7") {
        std::vector<std::string> cols = {"generation"};
        for (const auto& c : evo.cells) cols.push_back("k" + std::to_string(c.cell.k));
        CsvTable traces(std::move(cols));
        provenance_header(traces, spec, "fig7_traces");
        const std::size_t len = spec.ea.generations + 1;
        for (std::size_t g = 0; g < len; ++g) {
            std::vector<std::string> row = {num(g)};
            for (const auto& c : evo.cells) row.push_back(num(g < c.mean_blocks_trace.size() ? c.mean_blocks_trace[g] : NAN));
            traces.add_row(std::move(row));
        }
        emit(traces, "fig7_traces.csv");
        report << "mean blocks of best individual (N=10, b=4) at generations 0, 10, 50, last\n";
        for (const auto& c : evo.cells) {
            report << "K=" << c.cell.k;
            for (std::size_t g : {std::size_t{0}, std::size_t{10}, std::size_t{50}, len - 1})
                if (g < c.mean_blocks_trace.size()) report << ' ' << fixed(c.mean_blocks_trace[g], 2);
            report << '\n';
        }
    } else if (name == "corr-study") {
        std::vector<double> walk_length, tau, blocks;
        CsvTable table({"n", "k", "b", "mean_adaptive_walk_length", "tau", "mean_final_blocks"});
        provenance_header(table, spec, "corr_study");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& c = cells[i];
            const auto& e = evo.cells[i];
            table.add_row({num(c.cell.n), num(c.cell.k), num(c.cell.b), num(c.mean_walk_length), num(c.tau),
                           num(e.mean_final_blocks)});
            if (std::isnan(c.mean_walk_length) || std::isnan(c.tau) || e.runs == 0) continue;
            walk_length.push_back(c.mean_walk_length);
            tau.push_back(c.tau);
            blocks.push_back(e.mean_final_blocks);
        }
        emit(table, "corr_study.csv");
        const auto r_walk = pearson(walk_length, blocks);
        const auto r_tau = pearson(tau, blocks);
        report << "cells used: " << blocks.size() << '\n';
        report << "corr(adaptive walk length, mean blocks) = " << (r_walk ? fixed(*r_walk, 3) : "undefined")
               << "   (published, full scale: 0.71)\n";
        report << "corr(random-walk tau, mean blocks)      = " << (r_tau ? fixed(*r_tau, 3) : "undefined") << '\n';
    }
    for (const auto& e : status.errors) report << "error: " << e << '\n';
    return status;
}

}  // namespace epiroad
