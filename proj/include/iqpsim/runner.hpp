#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iqpsim/circuit.hpp"
#include "iqpsim/merit.hpp"
#include "iqpsim/nqit.hpp"

namespace iqpsim {

enum class Recipe { part1_bench, part2_dqs, part2_mbqc, part3_ablation, part3_sweep };
enum class EngineKind { exact, sparse, dense };
enum class VariantSet { time_gate, dephasing_depolarising, repetition_code };
enum class SweepMode { fresh_circuit, fixed_circuit };

const char* recipe_name(Recipe r);
const char* engine_name(EngineKind e);
const char* variant_set_name(VariantSet v);
const char* sweep_mode_name(SweepMode m);

struct ExperimentConfig {
    Recipe recipe = Recipe::part1_bench;

    int trials = 20;
    int noisy_circuits_per_trial = 20;  // noisy runs per trial
    int sims_per_run = 20;              // engine evaluations per run

    // part1_bench instance dimensions (inclusive ranges)
    int ng_lo = 5, ng_hi = 15;
    int na_lo = 5, na_hi = 12;

    // lattice dimensions (part2_dqs, part3_*)
    int grid_nx = 4, grid_ny = 5;

    // chain dimensions (part2_mbqc): traps x application qubits per trap
    int chain_traps = 4, chain_app = 2;

    // entry density for random Q matrices / connection probability for
    // restricted programs
    double density = 0.5;

    DeviceProfile profile{nqit_experiment_noise(), TimingProfile{}};
    TimeAccounting accounting = TimeAccounting::four_step;

    EngineKind perfect_engine = EngineKind::exact;
    EngineKind noisy_engine = EngineKind::sparse;
    std::uint64_t estimator_k = 0;  // 0 = auto: min(4 * ||w||_1^2, 1e5)
    std::size_t exact_t_cap = 22;
    std::uint32_t dense_cap = 24;

    VariantSet variant_set = VariantSet::time_gate;  // part3_ablation
    SweepMode sweep_mode = SweepMode::fresh_circuit;  // part3_sweep

    std::uint64_t master_seed = 1;
    std::string out_dir;
    int threads = 1;
    bool emit_plotdata = false;
};

// Recipe defaults as a starting point for CLI and test configs.
ExperimentConfig default_config(Recipe recipe);

// Throws std::invalid_argument listing the first problem.
void validate_config(const ExperimentConfig& config);

// Canonical text form of a config; its FNV-1a hash stamps every record.
std::string config_text(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

struct VariantResult {
    std::string name;
    std::vector<double> run_means;  // one entry per noisy run
    double mean = 0.0;
    double stddev = 0.0;  // sample std of run_means
    Classification classification = Classification::dismissive;
};

struct TrialRecord {
    int trial = 0;
    std::string instance_text;
    std::string outcome;
    int n_measured = 0;
    double perfect_mean = 0.0;
    double perfect_std = 0.0;
    bool far = false;  // far_from_uniform(perfect_mean)
    std::vector<VariantResult> variants;
    std::uint64_t trial_seed = 0;
    std::uint64_t config_hash_value = 0;
    double wall_ms = 0.0;  // informational; excluded from determinism
};

bool records_equal(const TrialRecord& a, const TrialRecord& b);

struct AggregateEntry {
    std::string name;
    double value = 0.0;
    double stderr_value = 0.0;  // 0 when not applicable
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<TrialRecord> records;
    std::vector<AggregateEntry> aggregates;
};

double aggregate_value(const ExperimentResult& result, const std::string& name);
const AggregateEntry* find_aggregate(const ExperimentResult& result,
                                     const std::string& name);

// The five experiment recipes. All are deterministic functions of
// (config, master_seed); trials may execute on config.threads workers with
// per-trial derived seeds, merged in trial order.
ExperimentResult run_part1(const ExperimentConfig& config);
ExperimentResult run_part2_dqs(const ExperimentConfig& config);
ExperimentResult run_part2_mbqc(const ExperimentConfig& config);
ExperimentResult run_part3_ablation(const ExperimentConfig& config);
ExperimentResult run_part3_sweep(const ExperimentConfig& config);

ExperimentResult run_experiment(const ExperimentConfig& config);

struct Manifest {
    std::uint64_t config_hash_value = 0;
    std::uint64_t master_seed = 0;
    int n_records = 0;
    std::vector<std::string> files;
};

// Writes one structured-text record per trial, a flat CSV, a manifest, and
// (optionally) per-figure plot data with error-bar columns. The CSV and
// manifest are byte-identical across reruns of the same config and seed.
Manifest write_records(const ExperimentResult& result, const std::string& directory);

// Reads trial records back; round-trips exactly (wall_ms included as
// written).
std::vector<TrialRecord> read_records(const std::string& directory);

}  // namespace iqpsim
