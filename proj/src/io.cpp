#include "epiroad/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace epiroad {

json to_json(const NkInstance& nk) {
    json links = json::array();
    json tables = json::array();
    for (std::size_t i = 0; i < nk.n(); ++i) {
        const auto l = nk.links(i);
        links.push_back(std::vector<std::size_t>(l.begin(), l.end()));
        const auto t = nk.table(i);
        tables.push_back(std::vector<double>(t.begin(), t.end()));
    }
    return {{"n", nk.n()},         {"k", nk.k()},         {"kind", std::string(to_string(nk.kind()))},
            {"seed", nk.seed()},   {"links", links},      {"tables", tables},
            {"mask", nk.mask()}};
}

NkInstance nk_from_json(const json& doc) {
    try {
        const auto n = doc.at("n").get<std::size_t>();
        const auto k = doc.at("k").get<std::size_t>();
        std::vector<std::size_t> links;
        std::vector<double> tables;
        if (doc.at("links").size() != n || doc.at("tables").size() != n)
            throw std::invalid_argument("links and tables need one entry per locus");
        for (const auto& row : doc.at("links"))
            for (const auto& v : row) links.push_back(v.get<std::size_t>());
        for (const auto& row : doc.at("tables"))
            for (const auto& v : row) tables.push_back(v.get<double>());
        return NkInstance(n, k, parse_neighborhood_kind(doc.at("kind").get<std::string>()),
                          doc.at("seed").get<std::uint64_t>(), std::move(links), std::move(tables),
                          doc.value("mask", std::uint64_t{0}));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed NK instance: ") + e.what());
    }
}

json to_json(const ErLandscape& landscape, const json& provenance) {
    const auto& p = landscape.params();
    json doc = {{"params", {{"n_letters", p.n_letters}, {"block_size", p.block_size}, {"lambda_max", p.lambda_max}}},
                {"nk", to_json(landscape.nk())},
                {"optimum_value", landscape.optimum_value()}};
    if (!provenance.is_null()) doc["provenance"] = provenance;
    return doc;
}

ErLandscape landscape_from_json(const json& doc) {
    BlockParams params;
    try {
        const auto& p = doc.at("params");
        params = {p.at("block_size").get<std::size_t>(), p.at("n_letters").get<std::size_t>(),
                  p.at("lambda_max").get<std::size_t>()};
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed landscape params: ") + e.what());
    }
    ErLandscape landscape(params, nk_from_json(doc.at("nk")));
    if (doc.contains("optimum_value") && doc["optimum_value"].get<double>() != landscape.optimum_value())
        throw std::invalid_argument("stored optimum_value does not match the recomputed optimum");
    return landscape;
}

json to_json(const EaConfig& cfg) {
    return {{"population", cfg.population},
            {"generations", cfg.generations},
            {"mutation_rate", cfg.mutation_rate},
            {"crossover_rate", cfg.crossover_rate},
            {"tournament_size", cfg.tournament_size},
            {"max_creation_size", cfg.max_creation_size},
            {"max_program_size", cfg.max_program_size},
            {"elitism", cfg.elitism},
            {"runs", cfg.runs},
            {"landscape_instances", cfg.landscape_instances},
            {"seed", cfg.seed},
            {"independent_mutation", cfg.independent_mutation},
            {"stop_on_success", cfg.stop_on_success}};
}

EaConfig ea_config_from_json(const json& doc) {
    EaConfig cfg;
    if (!doc.is_object()) throw std::invalid_argument("EA configuration must be a JSON object");
    const json defaults = to_json(cfg);
    for (const auto& [key, _] : doc.items())
        if (!defaults.contains(key)) throw std::invalid_argument("unknown EA configuration field '" + key + "'");
    try {
        cfg.population = doc.value("population", cfg.population);
        cfg.generations = doc.value("generations", cfg.generations);
        cfg.mutation_rate = doc.value("mutation_rate", cfg.mutation_rate);
        cfg.crossover_rate = doc.value("crossover_rate", cfg.crossover_rate);
        cfg.tournament_size = doc.value("tournament_size", cfg.tournament_size);
        cfg.max_creation_size = doc.value("max_creation_size", cfg.max_creation_size);
        cfg.max_program_size = doc.value("max_program_size", cfg.max_program_size);
        cfg.elitism = doc.value("elitism", cfg.elitism);
        cfg.runs = doc.value("runs", cfg.runs);
        cfg.landscape_instances = doc.value("landscape_instances", cfg.landscape_instances);
        cfg.seed = doc.value("seed", cfg.seed);
        cfg.independent_mutation = doc.value("independent_mutation", cfg.independent_mutation);
        cfg.stop_on_success = doc.value("stop_on_success", cfg.stop_on_success);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed EA configuration: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

void save_landscape(const std::filesystem::path& path, const ErLandscape& landscape, const json& provenance) {
    write_text_file(path, to_json(landscape, provenance).dump(1) + "\n");
}

ErLandscape load_landscape(const std::filesystem::path& path) {
    const json doc = read_json_file(path);
    try {
        return landscape_from_json(doc);
    } catch (const std::invalid_argument& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Prefer the shortest form that parses back to the same value.
    for (int digits = 6; digits < 17; ++digits) {
        char shorter[32];
        std::snprintf(shorter, sizeof shorter, "%.*g", digits, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

void CsvTable::add_row(std::vector<std::string> fields) {
    if (fields.size() != columns_.size())
        throw std::invalid_argument("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                                    std::to_string(columns_.size()));
    rows_.push_back(std::move(fields));
}

std::string CsvTable::str() const {
    std::ostringstream out;
    for (const auto& c : comments_) out << "# " << c << '\n';
    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
        out << '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return out.str();
}

}  // namespace epiroad
