#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spoofbench/baselines.hpp"
#include "spoofbench/data.hpp"
#include "spoofbench/evaluation.hpp"
#include "spoofbench/trainer.hpp"

namespace spoofbench {

// Method identifiers accepted by the benchmark and the CLI. "occnn" is the
// trainer with the pseudo-negative Gaussian fixed at the origin and the
// confusion term off; "proposed-nopc" is the ablation that keeps the adaptive
// center but drops the confusion term.
const std::vector<std::string>& known_methods();
bool is_trainer_method(const std::string& method);

// Applies a method's fixed mode switches on top of a base trainer config.
TrainerConfig trainer_config_for_method(const TrainerConfig& base, const std::string& method);

struct BenchConfig {
    std::vector<std::string> methods = {"proposed", "occnn", "md", "gmm", "ocsvm", "svdd"};
    std::size_t seeds = 1;
    std::uint64_t base_seed = 1;
    Protocol protocol = Protocol::p1;
    double fraction = 0.5;
    TrainerConfig trainer;
    SyntheticSpec synth;                       // used when no dataset file is given
    std::optional<std::string> dataset_path;   // fixed data shared by all runs
    EmConfig em;
    SgdConfig sgd;
    double nu = 0.1;
    std::size_t gmm_components = 0;            // 0 = min(50, n_train / 10)
};

struct SeedOutcome {
    std::uint64_t seed = 0;
    double acer = 0.0;
    double apcer = 0.0;
    double bpcer = 0.0;
};

struct MethodSummary {
    std::string method;
    double mean_acer = 0.0;
    double sd_acer = 0.0;
    double mean_apcer = 0.0;
    double mean_bpcer = 0.0;
    std::vector<SeedOutcome> per_seed;
};

struct BenchResult {
    std::vector<MethodSummary> methods;  // in requested order
    std::vector<std::string> notes;      // report-header deviations/warnings
};

// For every requested method and seed: (re)generate or load data, split,
// fit or train on the bonafide side, score the test side, and evaluate per
// identity. Seed s uses base_seed + s for generation, split, and training, so
// independent runs with the same flags are bit-identical.
BenchResult run_bench(const BenchConfig& cfg);

// Fits or trains one method on a prepared split and returns test-set scores.
std::vector<ScoredSample> run_method_on_split(const std::string& method, const BenchConfig& cfg, const SplitResult& split,
                                              std::uint64_t seed);

// Paper-style table: one row per method, "ACER (APCER, BPCER)" in percent.
std::string format_bench_table(const BenchResult& result);

// Machine-readable report with config echo; no timestamps, byte-stable.
void write_bench_report(const BenchResult& result, std::ostream& out, const std::vector<std::string>& comment_lines);

}  // namespace spoofbench
