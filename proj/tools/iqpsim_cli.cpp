#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "iqpsim/nqit.hpp"
#include "iqpsim/runner.hpp"

namespace {

using namespace iqpsim;

bool parse_pair(const std::string& text, char sep, int& a, int& b) {
    const auto pos = text.find(sep);
    if (pos == std::string::npos) return false;
    try {
        a = std::stoi(text.substr(0, pos));
        b = std::stoi(text.substr(pos + 1));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

DeviceProfile resolve_profile(const std::string& spec) {
    DeviceProfile p;
    p.noise = nqit_experiment_noise();
    if (spec == "nqit") return p;
    if (spec == "nqit-appendix") {
        p.noise = nqit_noise();
        return p;
    }
    if (spec == "nqit-reported") {
        p.noise = nqit_reported_noise();
        return p;
    }
    if (spec == "zero") {
        p.noise = zero_noise();
        return p;
    }
    return load_device_profile(spec);
}

struct CliOptions {
    std::string grid = "4x5";
    std::string chain = "4x2";
    std::string ng_range = "5..15";
    std::string na_range = "5..12";
    std::string noise_profile = "nqit";
    std::string variant = "time-gate";
    std::string mode = "fresh";
    std::string engine;        // empty = recipe default
    std::string noisy_engine;  // empty = recipe default
    std::string accounting = "four-step";
    std::string out;
};

void add_common_options(CLI::App* cmd, ExperimentConfig& config, CliOptions& opt) {
    cmd->add_option("--seed", config.master_seed, "Master RNG seed");
    cmd->add_option("--trials", config.trials, "Number of trials");
    cmd->add_option("--runs", config.noisy_circuits_per_trial,
                    "Noisy circuits (runs) per trial");
    cmd->add_option("--shots", config.sims_per_run, "Engine evaluations per run");
    cmd->add_option("--noise-profile", opt.noise_profile,
                    "Profile file path or preset: nqit, nqit-appendix, nqit-reported, zero");
    cmd->add_option("--engine", opt.engine, "Perfect-run engine: exact, sparse, dense (default per recipe)");
    cmd->add_option("--noisy-engine", opt.noisy_engine,
                    "Noisy-run engine: exact, sparse, dense");
    cmd->add_option("--k", config.estimator_k,
                    "Estimator samples per amplitude (0 = auto)");
    cmd->add_option("--time-accounting", opt.accounting,
                    "Idle-noise accounting: four-step, alg4");
    cmd->add_option("--density", config.density,
                    "Matrix entry density / trap connection probability");
    cmd->add_option("--threads", config.threads, "Worker threads (trials in parallel)");
    cmd->add_option("--out", opt.out, "Output directory (default results/<experiment>)");
    cmd->add_flag("--emit-plotdata", config.emit_plotdata,
                  "Also write per-figure plot CSVs");
}

EngineKind parse_engine(const std::string& s) {
    if (s == "exact") return EngineKind::exact;
    if (s == "sparse") return EngineKind::sparse;
    if (s == "dense") return EngineKind::dense;
    throw CLI::ValidationError("--engine", "unknown engine: " + s);
}

void finalize(ExperimentConfig& config, CliOptions& opt) {
    config.profile = resolve_profile(opt.noise_profile);
    const ExperimentConfig defaults = default_config(config.recipe);
    config.perfect_engine =
        opt.engine.empty() ? defaults.perfect_engine : parse_engine(opt.engine);
    config.noisy_engine =
        opt.noisy_engine.empty() ? defaults.noisy_engine : parse_engine(opt.noisy_engine);

    if (opt.accounting == "four-step")
        config.accounting = TimeAccounting::four_step;
    else if (opt.accounting == "alg4" || opt.accounting == "per-gate")
        config.accounting = TimeAccounting::per_gate;
    else
        throw CLI::ValidationError("--time-accounting", "use four-step or alg4");

    if (!parse_pair(opt.grid, 'x', config.grid_nx, config.grid_ny))
        throw CLI::ValidationError("--grid", "expected NXxNY, e.g. 4x5");
    if (!parse_pair(opt.chain, 'x', config.chain_traps, config.chain_app))
        throw CLI::ValidationError("--chain", "expected TRAPSxAPP, e.g. 12x8");

    auto range = [](const std::string& text, int& lo, int& hi, const char* flag) {
        const auto pos = text.find("..");
        if (pos == std::string::npos)
            throw CLI::ValidationError(flag, "expected LO..HI");
        lo = std::stoi(text.substr(0, pos));
        hi = std::stoi(text.substr(pos + 2));
    };
    range(opt.ng_range, config.ng_lo, config.ng_hi, "--ng-range");
    range(opt.na_range, config.na_lo, config.na_hi, "--na-range");

    if (opt.variant == "time-gate")
        config.variant_set = VariantSet::time_gate;
    else if (opt.variant == "dephasing-depolarising")
        config.variant_set = VariantSet::dephasing_depolarising;
    else if (opt.variant == "repetition-code")
        config.variant_set = VariantSet::repetition_code;
    else
        throw CLI::ValidationError(
            "--variant", "use time-gate, dephasing-depolarising or repetition-code");

    if (opt.mode == "fresh")
        config.sweep_mode = SweepMode::fresh_circuit;
    else if (opt.mode == "fixed")
        config.sweep_mode = SweepMode::fixed_circuit;
    else
        throw CLI::ValidationError("--mode", "use fresh or fixed");

    config.out_dir =
        opt.out.empty() ? std::string("results/") + recipe_name(config.recipe) : opt.out;
}

int execute(ExperimentConfig& config, CliOptions& opt) {
    finalize(config, opt);
    const ExperimentResult result = run_experiment(config);
    write_records(result, config.out_dir);
    std::printf("%s: %d trials -> %s\n", recipe_name(config.recipe), config.trials,
                config.out_dir.c_str());
    for (const AggregateEntry& e : result.aggregates) {
        if (e.stderr_value > 0.0)
            std::printf("  %-36s %12.6g  (se %.3g)\n", e.name.c_str(), e.value,
                        e.stderr_value);
        else
            std::printf("  %-36s %12.6g\n", e.name.c_str(), e.value);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noisy IQP-family circuit simulation experiments for a networked "
                 "ion-trap device model"};
    app.require_subcommand(1);

    ExperimentConfig config;
    CliOptions opt;

    CLI::App* bench = app.add_subcommand(
        "bench-simulator",
        "Random programs: probabilistic estimator vs deterministic reference (R^2)");
    add_common_options(bench, config, opt);
    bench->add_option("--ng-range", opt.ng_range, "Program row count range LO..HI");
    bench->add_option("--na-range", opt.na_range, "Application qubit count range LO..HI");

    CLI::App* dqs = app.add_subcommand(
        "dqs-noise", "Noisy lattice circuits vs perfect runs (accuracy classification)");
    add_common_options(dqs, config, opt);
    dqs->add_option("--grid", opt.grid, "Lattice size NXxNY");

    CLI::App* mbqc = app.add_subcommand(
        "mbqc-restricted", "Chain-restricted programs under device noise (R^2)");
    add_common_options(mbqc, config, opt);
    mbqc->add_option("--chain", opt.chain, "Chain size TRAPSxAPP");

    CLI::App* ablation = app.add_subcommand(
        "ablation", "Noise-channel group ablations with l1 proxies");
    add_common_options(ablation, config, opt);
    ablation->add_option("--grid", opt.grid, "Lattice size NXxNY");
    ablation->add_option("--variant", opt.variant,
                         "time-gate, dephasing-depolarising or repetition-code");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Dephasing-rate sweep over fractions {0, 1/4, 1/2, 3/4, 1}");
    add_common_options(sweep, config, opt);
    sweep->add_option("--grid", opt.grid, "Lattice size NXxNY");
    sweep->add_option("--mode", opt.mode, "fresh (new circuit per trial) or fixed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) config.recipe = iqpsim::Recipe::part1_bench;
        if (dqs->parsed()) config.recipe = iqpsim::Recipe::part2_dqs;
        if (mbqc->parsed()) config.recipe = iqpsim::Recipe::part2_mbqc;
        if (ablation->parsed()) config.recipe = iqpsim::Recipe::part3_ablation;
        if (sweep->parsed()) config.recipe = iqpsim::Recipe::part3_sweep;
        return execute(config, opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
