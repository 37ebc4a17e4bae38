#include "spoofbench/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "spoofbench/error.hpp"

namespace spoofbench {

const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> methods = {"proposed", "proposed-nopc", "occnn", "md", "gmm", "ocsvm", "svdd"};
    return methods;
}

bool is_trainer_method(const std::string& method) {
    return method == "proposed" || method == "proposed-nopc" || method == "occnn";
}

TrainerConfig trainer_config_for_method(const TrainerConfig& base, const std::string& method) {
    TrainerConfig cfg = base;
    if (method == "proposed") {
        cfg.mean_mode = MeanMode::adaptive;
        cfg.pc_mode = PcMode::on;
    } else if (method == "proposed-nopc") {
        cfg.mean_mode = MeanMode::adaptive;
        cfg.pc_mode = PcMode::off;
    } else if (method == "occnn") {
        cfg.mean_mode = MeanMode::origin;
        cfg.pc_mode = PcMode::off;
    } else {
        throw ConfigError("'" + method + "' is not a trainer method");
    }
    return cfg;
}

namespace {

std::vector<ScoredSample> scored_from(const Dataset& test, const std::vector<double>& scores) {
    std::vector<ScoredSample> scored(test.samples.size());
    for (std::size_t i = 0; i < test.samples.size(); ++i) {
        scored[i] = {scores[i], test.samples[i].identity, test.samples[i].label};
    }
    return scored;
}

}  // namespace

std::vector<ScoredSample> run_method_on_split(const std::string& method, const BenchConfig& cfg, const SplitResult& split,
                                              std::uint64_t seed) {
    const Matrix test_features = split.test.feature_matrix();
    if (is_trainer_method(method)) {
        TrainerConfig tcfg = trainer_config_for_method(cfg.trainer, method);
        tcfg.input_dim = split.train.dim;
        tcfg.seed = seed;
        Rng init_rng(seed);
        SpoofModel model = init_model(tcfg, init_rng);
        TrainerState state = make_trainer_state(model, tcfg);
        train(model, state, split.train, tcfg);
        return scored_from(split.test, score(model, test_features));
    }

    const Matrix train_features = split.train.feature_matrix();
    BaselineModel model;
    if (method == "md") {
        model = fit_mahalanobis(train_features);
    } else if (method == "gmm") {
        std::size_t components = cfg.gmm_components;
        if (components == 0) components = std::min<std::size_t>(50, std::max<std::size_t>(1, train_features.rows / 10));
        EmConfig em = cfg.em;
        em.seed = seed;
        model = fit_gmm(train_features, components, em);
    } else if (method == "ocsvm") {
        SgdConfig sgd = cfg.sgd;
        sgd.seed = seed;
        model = fit_linear_ocsvm(train_features, cfg.nu, sgd);
    } else if (method == "svdd") {
        SgdConfig sgd = cfg.sgd;
        sgd.seed = seed;
        model = fit_linear_svdd(train_features, cfg.nu, sgd);
    } else {
        throw ConfigError("unknown method '" + method + "'");
    }
    return scored_from(split.test, baseline_score(model, test_features));
}

BenchResult run_bench(const BenchConfig& cfg) {
    if (cfg.methods.empty()) throw ConfigError("bench: no methods requested");
    if (cfg.seeds == 0) throw ConfigError("bench: seeds must be >= 1");
    for (const auto& m : cfg.methods) {
        if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end())
            throw ConfigError("unknown method '" + m + "'");
    }

    BenchResult result;
    const bool uses_margin_baseline =
        std::count(cfg.methods.begin(), cfg.methods.end(), "ocsvm") ||
        std::count(cfg.methods.begin(), cfg.methods.end(), "svdd");
    if (uses_margin_baseline)
        result.notes.push_back("ocsvm/svdd rows use linear subgradient-descent variants, not kernel solvers");

    std::optional<Dataset> fixed_dataset;
    if (cfg.dataset_path) fixed_dataset = load_dataset(*cfg.dataset_path);

    for (const auto& method : cfg.methods) {
        MethodSummary summary;
        summary.method = method;
        for (std::size_t s = 0; s < cfg.seeds; ++s) {
            const std::uint64_t seed = cfg.base_seed + s;
            try {
                Dataset dataset;
                if (fixed_dataset) {
                    dataset = *fixed_dataset;
                } else {
                    SyntheticSpec spec = cfg.synth;
                    spec.seed = seed;
                    Rng gen_rng(spec.seed);
                    dataset = generate_synthetic(spec, gen_rng);
                }
                Rng split_rng(seed ^ 0x9e3779b97f4a7c15ull);
                const SplitResult split = split_protocol(dataset, cfg.protocol, cfg.fraction, split_rng);
                const auto scored = run_method_on_split(method, cfg, split, seed);
                const EvalReport report = evaluate_per_identity(scored);
                summary.per_seed.push_back({seed, report.mean_acer, report.mean_apcer, report.mean_bpcer});
            } catch (const std::exception& e) {
                throw ConfigError("bench stage failed for method " + method + ", seed " + std::to_string(seed) + ": " +
                                  e.what());
            }
        }

        const double inv = 1.0 / static_cast<double>(summary.per_seed.size());
        for (const auto& o : summary.per_seed) {
            summary.mean_acer += o.acer * inv;
            summary.mean_apcer += o.apcer * inv;
            summary.mean_bpcer += o.bpcer * inv;
        }
        double var = 0.0;
        for (const auto& o : summary.per_seed) var += (o.acer - summary.mean_acer) * (o.acer - summary.mean_acer);
        summary.sd_acer = summary.per_seed.size() > 1
                              ? std::sqrt(var / static_cast<double>(summary.per_seed.size() - 1))
                              : 0.0;
        result.methods.push_back(std::move(summary));
    }
    return result;
}

std::string format_bench_table(const BenchResult& result) {
    std::ostringstream out;
    for (const auto& note : result.notes) out << "note: " << note << "\n";
    out << "method          ACER(%) (APCER(%), BPCER(%))   sd(ACER)\n";
    for (const auto& m : result.methods) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-15s %.3f (%.3f, %.3f)   %.3f\n", m.method.c_str(), m.mean_acer,
                      m.mean_apcer, m.mean_bpcer, m.sd_acer);
        out << line;
    }
    return out.str();
}

void write_bench_report(const BenchResult& result, std::ostream& out, const std::vector<std::string>& comment_lines) {
    for (const auto& line : comment_lines) out << "# " << line << "\n";
    for (const auto& note : result.notes) out << "# note: " << note << "\n";
    out << "method,seed,acer,apcer,bpcer\n";
    for (const auto& m : result.methods) {
        for (const auto& o : m.per_seed) {
            out << m.method << ',' << o.seed << ',' << format_double(o.acer) << ',' << format_double(o.apcer) << ','
                << format_double(o.bpcer) << "\n";
        }
        out << m.method << ",mean," << format_double(m.mean_acer) << ',' << format_double(m.mean_apcer) << ','
            << format_double(m.mean_bpcer) << "\n";
        out << m.method << ",sd_acer," << format_double(m.sd_acer) << ",,\n";
    }
}

}  // namespace spoofbench
