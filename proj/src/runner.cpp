#include "iqpsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "iqpsim/dqs.hpp"
#include "iqpsim/iqp.hpp"
#include "iqpsim/rng.hpp"
#include "iqpsim/simcore.hpp"
#include "iqpsim/statevector.hpp"

namespace iqpsim {

namespace fs = std::filesystem;

const char* recipe_name(Recipe r) {
    switch (r) {
        case Recipe::part1_bench: return "bench-simulator";
        case Recipe::part2_dqs: return "dqs-noise";
        case Recipe::part2_mbqc: return "mbqc-restricted";
        case Recipe::part3_ablation: return "ablation";
        case Recipe::part3_sweep: return "sweep";
    }
    return "?";
}

const char* engine_name(EngineKind e) {
    switch (e) {
        case EngineKind::exact: return "exact";
        case EngineKind::sparse: return "sparse";
        case EngineKind::dense: return "dense";
    }
    return "?";
}

const char* variant_set_name(VariantSet v) {
    switch (v) {
        case VariantSet::time_gate: return "time-gate";
        case VariantSet::dephasing_depolarising: return "dephasing-depolarising";
        case VariantSet::repetition_code: return "repetition-code";
    }
    return "?";
}

const char* sweep_mode_name(SweepMode m) {
    return m == SweepMode::fresh_circuit ? "fresh-circuit" : "fixed-circuit";
}

ExperimentConfig default_config(Recipe recipe) {
    ExperimentConfig config;
    config.recipe = recipe;
    return config;
}

void validate_config(const ExperimentConfig& config) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (config.trials < 1) fail("trials must be >= 1");
    if (config.noisy_circuits_per_trial < 1) fail("noisy runs per trial must be >= 1");
    if (config.sims_per_run < 1) fail("sims per run must be >= 1");
    if (config.threads < 1) fail("threads must be >= 1");
    if (config.density < 0.0 || config.density > 1.0) fail("density must be in [0,1]");
    switch (config.recipe) {
        case Recipe::part1_bench:
            if (config.ng_lo < 0 || config.ng_lo > config.ng_hi) fail("bad gate-count range");
            if (config.na_lo < 0 || config.na_lo > config.na_hi) fail("bad qubit-count range");
            break;
        case Recipe::part2_dqs:
        case Recipe::part3_ablation:
        case Recipe::part3_sweep:
            if (config.grid_nx < 1 || config.grid_ny < 1) fail("grid dimensions must be >= 1");
            break;
        case Recipe::part2_mbqc:
            if (config.chain_traps < 2) fail("chain needs at least 2 traps");
            if (config.chain_app < 1) fail("chain needs at least 1 application qubit per trap");
            break;
    }
    auto violations = validate_profile(config.profile.noise);
    if (!violations.empty()) fail(violations.front());
}

namespace {

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_hex(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Seed streams; combined with the variant index so every (variant, run,
// sim) triple draws from its own generator.
constexpr std::uint64_t kStreamInstance = 1;
constexpr std::uint64_t kStreamOutcome = 2;
constexpr std::uint64_t kStreamPerfect = 3;
constexpr std::uint64_t kStreamCircuit = 4;
constexpr std::uint64_t kStreamSim = 5;
constexpr std::uint64_t kSharedInstanceTag = ~std::uint64_t(0);

std::uint64_t stream_tag(std::uint64_t stream, std::uint64_t variant) {
    return stream | (variant << 8);
}

double norm_factor(int n_measured) { return std::ldexp(1.0, n_measured); }

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double evaluate_probability(const Circuit& c, const Outcome& x, EngineKind engine,
                            const ExperimentConfig& config, std::uint64_t seed) {
    switch (engine) {
        case EngineKind::exact:
            return exact_t_sum_probability(c, x, config.exact_t_cap);
        case EngineKind::dense:
            return statevector_probability(c, x, config.dense_cap);
        case EngineKind::sparse: {
            EstimatorConfig ec;
            ec.samples_k =
                config.estimator_k ? config.estimator_k : default_samples_k(t_count(c));
            ec.rng_seed = seed;
            return sparse_estimate_probability(c, x, ec);
        }
    }
    return 0.0;
}

bool engine_deterministic(EngineKind e) { return e != EngineKind::sparse; }

// One run: sims_per_run evaluations of the same circuit. Deterministic
// engines evaluate once (every repeat would be identical).
std::vector<double> run_sims(const Circuit& c, const Outcome& x, EngineKind engine,
                             const ExperimentConfig& config, std::uint64_t trial_seed,
                             std::uint64_t stream, std::uint64_t run_idx) {
    if (engine_deterministic(engine))
        return {evaluate_probability(c, x, engine, config, 0)};
    std::vector<double> values(std::size_t(config.sims_per_run));
    for (int s = 0; s < config.sims_per_run; ++s)
        values[std::size_t(s)] = evaluate_probability(
            c, x, engine, config, derive_seed(trial_seed, stream, run_idx, std::uint64_t(s)));
    return values;
}

Outcome random_outcome(std::size_t n, std::uint64_t seed) {
    RandomSource rng(seed);
    Outcome x(n);
    for (auto& bit : x.bits) bit = rng.bit() ? 1 : 0;
    return x;
}

VariantResult make_variant(std::string name, std::vector<double> run_means,
                           double perfect_mean, double n_outcomes) {
    VariantResult v;
    v.name = std::move(name);
    v.mean = mean(run_means);
    v.stddev = sample_std(run_means);
    v.run_means = std::move(run_means);
    RunSummary summary{perfect_mean, v.mean, v.stddev, n_outcomes};
    v.classification = advantage_consistency(summary);
    return v;
}

struct TrialTimer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start)
            .count();
    }
};

std::vector<std::pair<std::string, NoiseProfile>> ablation_variants(
    VariantSet set, const NoiseProfile& base) {
    switch (set) {
        case VariantSet::time_gate:
            return {{"full", base}, {"time-only", time_only(base)},
                    {"gate-only", gate_only(base)}};
        case VariantSet::dephasing_depolarising:
            return {{"full", base}, {"dephasing-only", dephasing_only(base)},
                    {"depolarising-only", depolarising_only(base)}};
        case VariantSet::repetition_code:
            return {{"full", base}, {"repetition-code", with_repetition_code(base)},
                    {"no-dephasing", without_dephasing(base)}};
    }
    return {};
}

const double kSweepFractions[] = {0.0, 0.25, 0.5, 0.75, 1.0};

std::string fraction_name(double f) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fraction-%g", f);
    return buf;
}

void append_l1_aggregates(ExperimentResult& result) {
    if (result.records.empty()) return;
    const std::size_t n_variants = result.records.front().variants.size();
    for (std::size_t v = 0; v < n_variants; ++v) {
        std::vector<double> diffs;
        int far_count = 0, far_dismissive = 0;
        for (const TrialRecord& rec : result.records) {
            const VariantResult& var = rec.variants[v];
            diffs.push_back(std::abs(var.mean - rec.perfect_mean) *
                            norm_factor(rec.n_measured));
            if (rec.far) {
                ++far_count;
                if (var.classification == Classification::dismissive) ++far_dismissive;
            }
        }
        const std::string& name = result.records.front().variants[v].name;
        AggregateEntry l1;
        l1.name = "l1:" + name;
        l1.value = mean(diffs);
        l1.stderr_value = sample_std(diffs) / std::sqrt(double(diffs.size()));
        result.aggregates.push_back(l1);
        AggregateEntry frac;
        frac.name = "dismissive_far_fraction:" + name;
        frac.value = far_count ? double(far_dismissive) / far_count : 0.0;
        result.aggregates.push_back(frac);
    }
    AggregateEntry far;
    far.name = "far_trials";
    for (const TrialRecord& rec : result.records) far.value += rec.far ? 1.0 : 0.0;
    result.aggregates.push_back(far);
}

void append_r2_aggregate(ExperimentResult& result) {
    std::vector<double> targets, models;
    for (const TrialRecord& rec : result.records) {
        targets.push_back(rec.perfect_mean);
        models.push_back(rec.variants.front().mean);
    }
    AggregateEntry r2;
    r2.name = "r_squared";
    r2.value = r_squared(targets, models);
    result.aggregates.push_back(r2);
}

}  // namespace

std::string config_text(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "recipe = " << recipe_name(c.recipe) << "\n"
       << "trials = " << c.trials << "\n"
       << "runs = " << c.noisy_circuits_per_trial << "\n"
       << "shots = " << c.sims_per_run << "\n"
       << "ng_range = " << c.ng_lo << ".." << c.ng_hi << "\n"
       << "na_range = " << c.na_lo << ".." << c.na_hi << "\n"
       << "grid = " << c.grid_nx << "x" << c.grid_ny << "\n"
       << "chain = " << c.chain_traps << "x" << c.chain_app << "\n"
       << "density = " << fmt_double(c.density) << "\n"
       << "accounting = "
       << (c.accounting == TimeAccounting::per_gate ? "per-gate" : "four-step") << "\n"
       << "perfect_engine = " << engine_name(c.perfect_engine) << "\n"
       << "noisy_engine = " << engine_name(c.noisy_engine) << "\n"
       << "estimator_k = " << c.estimator_k << "\n"
       << "exact_t_cap = " << c.exact_t_cap << "\n"
       << "dense_cap = " << c.dense_cap << "\n"
       << "variant_set = " << variant_set_name(c.variant_set) << "\n"
       << "sweep_mode = " << sweep_mode_name(c.sweep_mode) << "\n"
       << "master_seed = " << c.master_seed << "\n"
       << device_profile_text(c.profile);
    return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    return fnv1a(config_text(config));
}

bool records_equal(const TrialRecord& a, const TrialRecord& b) {
    if (a.trial != b.trial || a.instance_text != b.instance_text || a.outcome != b.outcome ||
        a.n_measured != b.n_measured || a.perfect_mean != b.perfect_mean ||
        a.perfect_std != b.perfect_std || a.far != b.far || a.trial_seed != b.trial_seed ||
        a.config_hash_value != b.config_hash_value || a.wall_ms != b.wall_ms ||
        a.variants.size() != b.variants.size())
        return false;
    for (std::size_t i = 0; i < a.variants.size(); ++i) {
        const auto& va = a.variants[i];
        const auto& vb = b.variants[i];
        if (va.name != vb.name || va.run_means != vb.run_means || va.mean != vb.mean ||
            va.stddev != vb.stddev || va.classification != vb.classification)
            return false;
    }
    return true;
}

double aggregate_value(const ExperimentResult& result, const std::string& name) {
    if (const AggregateEntry* e = find_aggregate(result, name)) return e->value;
    throw std::invalid_argument("no aggregate named " + name);
}

const AggregateEntry* find_aggregate(const ExperimentResult& result,
                                     const std::string& name) {
    for (const AggregateEntry& e : result.aggregates)
        if (e.name == name) return &e;
    return nullptr;
}

ExperimentResult run_part1(const ExperimentConfig& config) {
    validate_config(config);
    ExperimentResult result;
    result.config = config;
    const std::uint64_t hash = config_hash(config);
    result.records.resize(std::size_t(config.trials));

    parallel_for(config.trials, config.threads, [&](int t) {
        TrialTimer timer;
        const std::uint64_t tseed =
            derive_seed(config.master_seed, std::uint64_t(config.recipe), std::uint64_t(t));
        const XProgram program =
            random_xprogram(config.ng_lo, config.ng_hi, config.na_lo, config.na_hi,
                            config.density, derive_seed(tseed, kStreamInstance));
        const Circuit circuit = compile_mbqc(program);
        const Outcome zeros(circuit.n_qubits);

        TrialRecord rec;
        rec.trial = t;
        rec.instance_text = to_text(program);
        rec.outcome = zeros.to_string();
        rec.n_measured = int(circuit.n_qubits);
        rec.trial_seed = tseed;
        rec.config_hash_value = hash;

        const auto perfect =
            run_sims(circuit, zeros, config.perfect_engine, config, tseed, kStreamPerfect, 0);
        rec.perfect_mean = mean(perfect);
        rec.perfect_std = sample_std(perfect);
        rec.far = far_from_uniform(rec.perfect_mean, norm_factor(rec.n_measured));

        auto sims = run_sims(circuit, zeros, config.noisy_engine, config, tseed,
                             stream_tag(kStreamSim, 0), 0);
        rec.variants.push_back(
            make_variant("estimator", std::move(sims), rec.perfect_mean,
                         norm_factor(rec.n_measured)));
        rec.wall_ms = timer.elapsed_ms();
        result.records[std::size_t(t)] = std::move(rec);
    });

    append_r2_aggregate(result);
    return result;
}

namespace {

// Common body for the lattice recipes: one perfect run plus, per variant
// profile, noisy_circuits_per_trial runs of freshly built noisy circuits.
TrialRecord lattice_trial(const ExperimentConfig& config, int t, std::uint64_t hash,
                          const DqsInstance& instance, const Outcome& outcome,
                          const std::vector<std::pair<std::string, NoiseProfile>>& variants) {
    TrialTimer timer;
    const std::uint64_t tseed =
        derive_seed(config.master_seed, std::uint64_t(config.recipe), std::uint64_t(t));
    const Circuit perfect_circuit = compile_dqs(instance);
    const int n = instance.n_qubits();

    TrialRecord rec;
    rec.trial = t;
    rec.instance_text = to_text(instance);
    rec.outcome = outcome.to_string();
    rec.n_measured = n;
    rec.trial_seed = tseed;
    rec.config_hash_value = hash;

    const auto perfect = run_sims(perfect_circuit, outcome, config.perfect_engine, config,
                                  tseed, kStreamPerfect, 0);
    rec.perfect_mean = mean(perfect);
    rec.perfect_std = sample_std(perfect);
    rec.far = far_from_uniform(rec.perfect_mean, norm_factor(n));

    for (std::size_t v = 0; v < variants.size(); ++v) {
        std::vector<double> run_means(std::size_t(config.noisy_circuits_per_trial));
        for (int r = 0; r < config.noisy_circuits_per_trial; ++r) {
            const Circuit noisy = build_noisy_dqs(
                instance, variants[v].second, config.profile.timing,
                derive_seed(tseed, stream_tag(kStreamCircuit, v), std::uint64_t(r)),
                config.accounting);
            run_means[std::size_t(r)] =
                mean(run_sims(noisy, outcome, config.noisy_engine, config, tseed,
                              stream_tag(kStreamSim, v), std::uint64_t(r)));
        }
        rec.variants.push_back(make_variant(variants[v].first, std::move(run_means),
                                            rec.perfect_mean, norm_factor(n)));
    }
    rec.wall_ms = timer.elapsed_ms();
    return rec;
}

}  // namespace

ExperimentResult run_part2_dqs(const ExperimentConfig& config) {
    validate_config(config);
    ExperimentResult result;
    result.config = config;
    const std::uint64_t hash = config_hash(config);
    result.records.resize(std::size_t(config.trials));
    const std::vector<std::pair<std::string, NoiseProfile>> variants = {
        {"noisy", config.profile.noise}};

    parallel_for(config.trials, config.threads, [&](int t) {
        const std::uint64_t tseed =
            derive_seed(config.master_seed, std::uint64_t(config.recipe), std::uint64_t(t));
        const DqsInstance instance = random_instance(config.grid_nx, config.grid_ny,
                                                     derive_seed(tseed, kStreamInstance));
        const Outcome outcome = random_outcome(std::size_t(instance.n_qubits()),
                                               derive_seed(tseed, kStreamOutcome));
        result.records[std::size_t(t)] =
            lattice_trial(config, t, hash, instance, outcome, variants);
    });

    append_l1_aggregates(result);
    return result;
}

ExperimentResult run_part2_mbqc(const ExperimentConfig& config) {
    validate_config(config);
    ExperimentResult result;
    result.config = config;
    const std::uint64_t hash = config_hash(config);
    result.records.resize(std::size_t(config.trials));
    const ArchitectureParams arch =
        ArchitectureParams::chain(config.chain_traps, config.chain_app);

    parallel_for(config.trials, config.threads, [&](int t) {
        TrialTimer timer;
        const std::uint64_t tseed =
            derive_seed(config.master_seed, std::uint64_t(config.recipe), std::uint64_t(t));
        const RestrictedProgram prog = random_restricted_program(
            arch, config.density, derive_seed(tseed, kStreamInstance));
        const Circuit perfect_circuit = build_restricted_mbqc(prog);
        RandomSource outcome_rng(derive_seed(tseed, kStreamOutcome));
        const Outcome outcome = random_reachable_outcome(prog, outcome_rng);

        TrialRecord rec;
        rec.trial = t;
        rec.instance_text = to_text(prog);
        rec.outcome = outcome.to_string();
        rec.n_measured = int(perfect_circuit.n_qubits);
        rec.trial_seed = tseed;
        rec.config_hash_value = hash;

        const auto perfect = run_sims(perfect_circuit, outcome, config.perfect_engine,
                                      config, tseed, kStreamPerfect, 0);
        rec.perfect_mean = mean(perfect);
        rec.perfect_std = sample_std(perfect);
        rec.far = far_from_uniform(rec.perfect_mean, norm_factor(rec.n_measured));

        std::vector<double> run_means(std::size_t(config.noisy_circuits_per_trial));
        for (int r = 0; r < config.noisy_circuits_per_trial; ++r) {
            const Circuit noisy = build_noisy_restricted_mbqc(
                prog, config.profile.noise, config.profile.timing,
                derive_seed(tseed, stream_tag(kStreamCircuit, 0), std::uint64_t(r)));
            run_means[std::size_t(r)] =
                mean(run_sims(noisy, outcome, config.noisy_engine, config, tseed,
                              stream_tag(kStreamSim, 0), std::uint64_t(r)));
        }
        rec.variants.push_back(make_variant("noisy", std::move(run_means),
                                            rec.perfect_mean,
                                            norm_factor(rec.n_measured)));
        rec.wall_ms = timer.elapsed_ms();
        result.records[std::size_t(t)] = std::move(rec);
    });

    append_r2_aggregate(result);
    return result;
}

ExperimentResult run_part3_ablation(const ExperimentConfig& config) {
    validate_config(config);
    ExperimentResult result;
    result.config = config;
    const std::uint64_t hash = config_hash(config);
    result.records.resize(std::size_t(config.trials));
    const auto variants = ablation_variants(config.variant_set, config.profile.noise);

    parallel_for(config.trials, config.threads, [&](int t) {
        const std::uint64_t tseed =
            derive_seed(config.master_seed, std::uint64_t(config.recipe), std::uint64_t(t));
        const DqsInstance instance = random_instance(config.grid_nx, config.grid_ny,
                                                     derive_seed(tseed, kStreamInstance));
        const Outcome outcome = random_outcome(std::size_t(instance.n_qubits()),
                                               derive_seed(tseed, kStreamOutcome));
        result.records[std::size_t(t)] =
            lattice_trial(config, t, hash, instance, outcome, variants);
    });

    append_l1_aggregates(result);
    return result;
}

ExperimentResult run_part3_sweep(const ExperimentConfig& config) {
    validate_config(config);
    ExperimentResult result;
    result.config = config;
    const std::uint64_t hash = config_hash(config);
    result.records.resize(std::size_t(config.trials));

    std::vector<std::pair<std::string, NoiseProfile>> variants;
    for (double f : kSweepFractions)
        variants.emplace_back(fraction_name(f),
                              with_dephasing_fraction(config.profile.noise, f));

    // In fixed-circuit mode every trial shares one instance and varies the
    // outcome string; in fresh-circuit mode both are redrawn per trial.
    DqsInstance shared;
    if (config.sweep_mode == SweepMode::fixed_circuit)
        shared = random_instance(
            config.grid_nx, config.grid_ny,
            derive_seed(config.master_seed, std::uint64_t(config.recipe), kSharedInstanceTag));

    parallel_for(config.trials, config.threads, [&](int t) {
        const std::uint64_t tseed =
            derive_seed(config.master_seed, std::uint64_t(config.recipe), std::uint64_t(t));
        const DqsInstance instance =
            config.sweep_mode == SweepMode::fixed_circuit
                ? shared
                : random_instance(config.grid_nx, config.grid_ny,
                                  derive_seed(tseed, kStreamInstance));
        const Outcome outcome = random_outcome(std::size_t(instance.n_qubits()),
                                               derive_seed(tseed, kStreamOutcome));
        result.records[std::size_t(t)] =
            lattice_trial(config, t, hash, instance, outcome, variants);
    });

    append_l1_aggregates(result);
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    switch (config.recipe) {
        case Recipe::part1_bench: return run_part1(config);
        case Recipe::part2_dqs: return run_part2_dqs(config);
        case Recipe::part2_mbqc: return run_part2_mbqc(config);
        case Recipe::part3_ablation: return run_part3_ablation(config);
        case Recipe::part3_sweep: return run_part3_sweep(config);
    }
    throw std::invalid_argument("unknown recipe");
}

namespace {

std::string trial_file_name(int trial) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "trial_%04d.txt", trial);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string record_text(const TrialRecord& rec) {
    std::ostringstream os;
    os << "TRIAL " << rec.trial << "\n"
       << "CONFIG_HASH " << fmt_hex(rec.config_hash_value) << "\n"
       << "SEED " << rec.trial_seed << "\n"
       << "WALL_MS " << fmt_double(rec.wall_ms) << "\n"
       << "N_MEASURED " << rec.n_measured << "\n"
       << "PERFECT " << fmt_double(rec.perfect_mean) << ' ' << fmt_double(rec.perfect_std)
       << "\n"
       << "FAR " << (rec.far ? 1 : 0) << "\n"
       << "OUTCOME " << rec.outcome << "\n"
       << "INSTANCE_BEGIN\n"
       << rec.instance_text << "INSTANCE_END\n";
    for (const VariantResult& v : rec.variants) {
        os << "VARIANT " << v.name << "\n"
           << "CLASS " << classification_name(v.classification) << "\n"
           << "STATS " << fmt_double(v.mean) << ' ' << fmt_double(v.stddev) << "\n"
           << "RUNS " << v.run_means.size() << "\n";
        for (std::size_t i = 0; i < v.run_means.size(); ++i)
            os << (i ? " " : "") << fmt_double(v.run_means[i]);
        os << "\nVARIANT_END\n";
    }
    os << "END\n";
    return os.str();
}

TrialRecord parse_record(const std::string& text, const std::string& where) {
    std::istringstream is(text);
    TrialRecord rec;
    std::string line, key;
    auto bad = [&](const std::string& msg) {
        throw std::runtime_error(where + ": " + msg);
    };
    auto next_line = [&]() {
        if (!std::getline(is, line)) bad("unexpected end of record");
    };

    while (std::getline(is, line)) {
        if (line == "END") break;
        std::istringstream ls(line);
        ls >> key;
        if (key == "TRIAL") ls >> rec.trial;
        else if (key == "CONFIG_HASH") {
            std::string hex;
            ls >> hex;
            rec.config_hash_value = std::stoull(hex, nullptr, 16);
        } else if (key == "SEED") ls >> rec.trial_seed;
        else if (key == "WALL_MS") ls >> rec.wall_ms;
        else if (key == "N_MEASURED") ls >> rec.n_measured;
        else if (key == "PERFECT") ls >> rec.perfect_mean >> rec.perfect_std;
        else if (key == "FAR") {
            int f = 0;
            ls >> f;
            rec.far = f != 0;
        } else if (key == "OUTCOME") ls >> rec.outcome;
        else if (key == "INSTANCE_BEGIN") {
            std::ostringstream inst;
            for (;;) {
                next_line();
                if (line == "INSTANCE_END") break;
                inst << line << "\n";
            }
            rec.instance_text = inst.str();
        } else if (key == "VARIANT") {
            VariantResult v;
            ls >> v.name;
            next_line();  // CLASS
            v.classification = line == "CLASS dismissive" ? Classification::dismissive
                                                          : Classification::non_dismissive;
            next_line();  // STATS
            {
                std::istringstream ss(line);
                std::string kw;
                ss >> kw >> v.mean >> v.stddev;
                if (kw != "STATS") bad("expected STATS");
            }
            next_line();  // RUNS
            std::size_t n_runs = 0;
            {
                std::istringstream ss(line);
                std::string kw;
                ss >> kw >> n_runs;
                if (kw != "RUNS") bad("expected RUNS");
            }
            next_line();  // values
            {
                std::istringstream ss(line);
                v.run_means.resize(n_runs);
                for (auto& value : v.run_means) ss >> value;
                if (ss.fail()) bad("bad run values");
            }
            next_line();  // VARIANT_END
            if (line != "VARIANT_END") bad("expected VARIANT_END");
            rec.variants.push_back(std::move(v));
        } else if (!key.empty()) {
            bad("unknown record key: " + key);
        }
        if (ls.fail()) bad("bad record line: " + line);
        key.clear();
    }
    return rec;
}

std::string csv_text(const ExperimentResult& result) {
    std::ostringstream os;
    os << "experiment,trial,variant,n_measured,perfect,perfect_std,noisy_mean,noisy_std,"
          "norm_perfect,norm_noisy_mean,norm_noisy_std,far_from_uniform,classification,"
          "trial_seed,config_hash\n";
    const char* name = recipe_name(result.config.recipe);
    for (const TrialRecord& rec : result.records) {
        const double scale = norm_factor(rec.n_measured);
        for (const VariantResult& v : rec.variants) {
            os << name << ',' << rec.trial << ',' << v.name << ',' << rec.n_measured << ','
               << fmt_double(rec.perfect_mean) << ',' << fmt_double(rec.perfect_std) << ','
               << fmt_double(v.mean) << ',' << fmt_double(v.stddev) << ','
               << fmt_double(rec.perfect_mean * scale) << ',' << fmt_double(v.mean * scale)
               << ',' << fmt_double(v.stddev * scale) << ',' << (rec.far ? 1 : 0) << ','
               << classification_name(v.classification) << ',' << rec.trial_seed << ','
               << fmt_hex(rec.config_hash_value) << "\n";
        }
    }
    return os.str();
}

std::string plot_trials_text(const ExperimentResult& result) {
    std::ostringstream os;
    os << "trial,variant,norm_perfect,norm_noisy_mean,norm_noisy_std\n";
    for (const TrialRecord& rec : result.records) {
        const double scale = norm_factor(rec.n_measured);
        for (const VariantResult& v : rec.variants)
            os << rec.trial << ',' << v.name << ',' << fmt_double(rec.perfect_mean * scale)
               << ',' << fmt_double(v.mean * scale) << ',' << fmt_double(v.stddev * scale)
               << "\n";
    }
    return os.str();
}

std::string plot_summary_text(const ExperimentResult& result) {
    std::ostringstream os;
    os << "name,value,stderr\n";
    for (const AggregateEntry& e : result.aggregates)
        os << e.name << ',' << fmt_double(e.value) << ',' << fmt_double(e.stderr_value)
           << "\n";
    return os.str();
}

}  // namespace

Manifest write_records(const ExperimentResult& result, const std::string& directory) {
    fs::path dir(directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + directory);

    Manifest manifest;
    manifest.config_hash_value = config_hash(result.config);
    manifest.master_seed = result.config.master_seed;
    manifest.n_records = int(result.records.size());

    for (const TrialRecord& rec : result.records) {
        const std::string file = trial_file_name(rec.trial);
        write_file(dir / file, record_text(rec));
        manifest.files.push_back(file);
    }

    const std::string csv = std::string(recipe_name(result.config.recipe)) + ".csv";
    write_file(dir / csv, csv_text(result));
    manifest.files.push_back(csv);

    if (result.config.emit_plotdata) {
        write_file(dir / "plot_trials.csv", plot_trials_text(result));
        manifest.files.push_back("plot_trials.csv");
        write_file(dir / "plot_summary.csv", plot_summary_text(result));
        manifest.files.push_back("plot_summary.csv");
    }

    std::ostringstream os;
    os << "experiment " << recipe_name(result.config.recipe) << "\n"
       << "config_hash " << fmt_hex(manifest.config_hash_value) << "\n"
       << "master_seed " << manifest.master_seed << "\n"
       << "records " << manifest.n_records << "\n"
       << "config_begin\n"
       << config_text(result.config) << "config_end\n";
    for (const AggregateEntry& e : result.aggregates)
        os << "aggregate " << e.name << ' ' << fmt_double(e.value) << ' '
           << fmt_double(e.stderr_value) << "\n";
    for (const std::string& f : manifest.files) os << "file " << f << "\n";
    write_file(dir / "manifest.txt", os.str());
    manifest.files.push_back("manifest.txt");
    return manifest;
}

std::vector<TrialRecord> read_records(const std::string& directory) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("trial_", 0) == 0 && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<TrialRecord> records;
    for (const fs::path& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read " + path.string());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        records.push_back(parse_record(buffer.str(), path.string()));
    }
    return records;
}

}  // namespace iqpsim
