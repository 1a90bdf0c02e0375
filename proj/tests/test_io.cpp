#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "epiroad/io.hpp"

using namespace epiroad;

TEST_SUITE("io") {

TEST_CASE("NK instances round-trip exactly") {
    for (auto kind : {NeighborhoodKind::adjacent, NeighborhoodKind::random}) {
        const auto nk = normalize_to_one(NkInstance::generate(9, 4, kind, 123));
        const json doc = to_json(nk);
        CHECK(doc.at("links").size() == 9);
        CHECK(doc.at("tables").at(0).size() == 32);
        const auto back = nk_from_json(json::parse(doc.dump()));
        CHECK(back == nk);
        for (std::uint64_t x = 0; x < 512; ++x) CHECK(back.evaluate(x) == nk.evaluate(x));
    }
    CHECK_THROWS_AS(nk_from_json(json{{"n", 2}}), std::invalid_argument);
}

TEST_CASE("landscapes round-trip exactly") {
    const auto er = ErLandscape::build(8, 3, 2, 100, 5);
    const json prov = {{"note", "x"}};
    const json doc = to_json(er, prov);
    CHECK(doc.at("provenance") == prov);
    const auto back = landscape_from_json(json::parse(doc.dump(1)));
    CHECK(back.optimum_value() == er.optimum_value());
    CHECK(back.params().lambda_max == 100);
    for (BlockMask m = 0; m < 256; ++m) CHECK(back.fitness_of_blocks(m) == er.fitness_of_blocks(m));

    json tampered = doc;
    tampered["optimum_value"] = er.optimum_value() + 1e-9;
    CHECK_THROWS_AS(landscape_from_json(tampered), std::invalid_argument);
}

TEST_CASE("EA configuration mirrors the struct") {
    EaConfig cfg;
    cfg.population = 64;
    cfg.independent_mutation = true;
    cfg.seed = 99;
    const auto back = ea_config_from_json(to_json(cfg));
    CHECK(back.population == 64);
    CHECK(back.independent_mutation);
    CHECK(back.seed == 99);
    CHECK(to_json(back) == to_json(cfg));
    CHECK(ea_config_from_json(json::object()).population == 1000);
    CHECK_THROWS_AS(ea_config_from_json(json{{"populaton", 5}}), std::invalid_argument);
    CHECK_THROWS_AS(ea_config_from_json(json{{"crossover_rate", 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(ea_config_from_json(json{{"runs", "many"}}), std::invalid_argument);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 7.0, 1e-300, 0.7210000000000001, -2.5}) CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("CSV tables") {
    CsvTable t({"a", "b"});
    t.add_comment("epiroad 0.1.0");
    t.add_row({"1", "2"});
    CHECK(t.str() == "# epiroad 0.1.0\na,b\n1,2\n");
    CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
}

TEST_CASE("file helpers report paths") {
    CHECK_THROWS_AS(read_json_file("/nonexistent/x.json"), IoError);
    try {
        load_landscape("/nonexistent/land.json");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/land.json") != std::string::npos);
    }
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

}  // TEST_SUITE
