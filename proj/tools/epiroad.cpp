// epiroad: generate Epistatic Road landscapes, analyse them and run the EA over parameter grids.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "epiroad/experiment.hpp"
#include "epiroad/parallel.hpp"

namespace {

struct Options {
    std::string spec_file;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    double scale = 1.0;
    unsigned jobs = 0;
    std::string preset;
};

void add_common(CLI::App* cmd, Options& o, bool needs_spec) {
    auto* spec = cmd->add_option("--spec", o.spec_file, "experiment spec (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "master seed (overrides EPIROAD_SEED and the spec)");
    cmd->add_option("--scale", o.scale, "multiply walk counts, EA runs and population")->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", o.jobs, "worker threads (0 = all cores)");
    auto* preset = cmd->add_option("--preset", o.preset, "use a named preset grid instead of --spec");
    if (needs_spec) {
        spec->excludes(preset);
        preset->excludes(spec);
    }
}

std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv("EPIROAD_SEED");
    if (!v || !*v) return std::nullopt;
    std::size_t used = 0;
    const std::string text(v);
    const auto seed = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument("EPIROAD_SEED is not an integer: " + text);
    return seed;
}

epiroad::ExperimentSpec load_spec(const Options& o) {
    epiroad::ExperimentSpec spec;
    if (!o.preset.empty()) spec = epiroad::preset_spec(o.preset, 0);
    else if (!o.spec_file.empty()) spec = epiroad::spec_from_json(epiroad::read_json_file(o.spec_file));
    else throw std::invalid_argument("either --spec or --preset is required");
    if (auto s = env_seed()) spec.seed = *s;
    if (o.seed) spec.seed = *o.seed;
    spec.ea.seed = spec.seed;
    if (o.scale != 1.0) spec = epiroad::scaled(spec, o.scale);
    return spec;
}

int finish(const epiroad::CommandStatus& status) {
    for (const auto& e : status.errors) std::cerr << "epiroad: " << e << '\n';
    for (const auto& p : status.written) std::cout << p.string() << '\n';
    if (status.any_cell_failed) std::cerr << "epiroad: at least one grid cell failed on every instance\n";
    return status.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Epistatic Road landscapes: generation, analysis and evolution"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(epiroad::kVersion));

    Options gen_o, analyze_o, evolve_o, reproduce_o;
    auto* gen = app.add_subcommand("gen", "write landscape files for every grid cell and instance");
    add_common(gen, gen_o, true);
    auto* analyze = app.add_subcommand("analyze", "run walk campaigns on generated landscapes");
    add_common(analyze, analyze_o, true);
    auto* evolve = app.add_subcommand("evolve", "run the EA on generated landscapes");
    add_common(evolve, evolve_o, true);
    auto* reproduce = app.add_subcommand("reproduce", "run a named preset and print a report");
    add_common(reproduce, reproduce_o, false);
    std::string positional;
    reproduce->add_option("name", positional, "preset name");
    reproduce_o.out.clear();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const auto spec = load_spec(gen_o);
            return finish(epiroad::cmd_gen(spec, gen_o.out, epiroad::resolve_jobs(gen_o.jobs)));
        }
        if (analyze->parsed()) {
            const auto spec = load_spec(analyze_o);
            return finish(epiroad::cmd_analyze(spec, analyze_o.out, epiroad::resolve_jobs(analyze_o.jobs)));
        }
        if (evolve->parsed()) {
            const auto spec = load_spec(evolve_o);
            return finish(epiroad::cmd_evolve(spec, evolve_o.out, epiroad::resolve_jobs(evolve_o.jobs)));
        }
        Options& o = reproduce_o;
        std::string name = o.preset.empty() ? positional : o.preset;
        if (name.empty()) {
            std::cerr << "epiroad: reproduce needs a preset name; available:";
            for (const auto& n : epiroad::preset_names()) std::cerr << ' ' << n;
            std::cerr << '\n';
            return 2;
        }
        o.preset = name;
        const std::string spec_file = o.spec_file;
        epiroad::ExperimentSpec spec = load_spec(o);
        // A spec file may override the preset's campaign and EA settings but not its grid.
        if (!spec_file.empty()) {
            auto custom = epiroad::spec_from_json(epiroad::read_json_file(spec_file));
            custom.grid = spec.grid;
            custom.seed = spec.seed;
            custom.ea.seed = spec.seed;
            custom.run_random_walk = spec.run_random_walk;
            custom.run_adaptive_walk = spec.run_adaptive_walk;
            custom.run_neutrality = spec.run_neutrality;
            spec = o.scale != 1.0 ? epiroad::scaled(custom, o.scale) : custom;
        }
        const auto status = epiroad::cmd_reproduce(name, spec, o.out, epiroad::resolve_jobs(o.jobs), std::cout);
        for (const auto& p : status.written) std::cerr << "wrote " << p.string() << '\n';
        return status.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "epiroad: " << e.what() << '\n';
        return 2;
    }
}
