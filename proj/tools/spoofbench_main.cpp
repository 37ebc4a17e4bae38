// spoofbench: one-class spoof-detection benchmark runner.
//
// Subcommands: gen-data, train, score, bench. Flags override a line-oriented
// key=value config file (--config); precedence is flags > file > defaults.
// Every output artifact embeds the fully resolved configuration and seed.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spoofbench/bench.hpp"
#include "spoofbench/checkpoint.hpp"
#include "spoofbench/data.hpp"
#include "spoofbench/error.hpp"
#include "spoofbench/evaluation.hpp"
#include "spoofbench/trainer.hpp"

namespace {

using namespace spoofbench;

using Echo = std::vector<std::pair<std::string, std::string>>;

void add(Echo& echo, const std::string& key, const std::string& value) { echo.emplace_back(key, value); }
void add(Echo& echo, const std::string& key, double value) { echo.emplace_back(key, format_double(value)); }
void add(Echo& echo, const std::string& key, std::uint64_t value) { echo.emplace_back(key, std::to_string(value)); }

std::string join_sizes(const std::vector<std::size_t>& widths) {
    std::string out;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(widths[i]);
    }
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text, const std::string& what) {
    std::vector<std::size_t> out;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
        if (token.empty() || (end && *end != '\0') || v == 0)
            throw ConfigError(what + ": bad width '" + token + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

std::vector<std::string> echo_comments(const Echo& echo) {
    std::vector<std::string> lines;
    lines.reserve(echo.size());
    for (const auto& [key, value] : echo) lines.push_back("config " + key + " " + value);
    return lines;
}

void print_echo(const Echo& echo) {
    for (const auto& [key, value] : echo) std::cout << "config " << key << " " << value << "\n";
}

// Expands `--config <file>` into `--key=value` arguments injected right after
// the subcommand name, so explicit flags (which come later) win under the
// take-last policy: flags > file > defaults.
std::vector<std::string> expand_config_args(int argc, char** argv, const std::vector<std::string>& subcommands) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }
    if (config_path.empty()) return args;

    std::size_t insert_at = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (std::find(subcommands.begin(), subcommands.end(), args[i]) != subcommands.end()) {
            insert_at = i + 1;
            break;
        }
    }

    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    std::vector<std::string> injected;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError(config_path + " line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        if (key == "config") throw ConfigError(config_path + ": config files cannot nest");
        injected.push_back("--" + key + "=" + line.substr(eq + 1));
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), injected.begin(), injected.end());
    return args;
}

struct SynthFlags {
    SyntheticSpec spec;
    std::string offset_mode = "shared";

    void attach(CLI::App* cmd) {
        cmd->add_option("--synth.identities", spec.num_identities, "Number of identities");
        cmd->add_option("--synth.bonafide", spec.bonafide_per_identity, "Bonafide samples per identity");
        cmd->add_option("--synth.attacks", spec.attacks_per_identity, "Attack samples per identity");
        cmd->add_option("--synth.dim", spec.dim, "Feature dimension");
        cmd->add_option("--synth.cluster-spread", spec.identity_cluster_spread, "Per-identity cluster sigma");
        cmd->add_option("--synth.attack-offset,--attack-offset", spec.attack_offset_magnitude,
                        "Euclidean magnitude of the attack offset");
        cmd->add_option("--synth.offset-mode", offset_mode, "shared | per-identity")
            ->check(CLI::IsMember({"shared", "per-identity"}));
        cmd->add_option("--synth.global-spread", spec.global_spread, "Per-axis sigma of cluster centers");
        cmd->add_option("--synth.identity-rank", spec.identity_rank, "Dimension of the identity subspace");
    }

    SyntheticSpec resolve(std::uint64_t seed) const {
        SyntheticSpec out = spec;
        out.offset_mode = offset_mode == "shared" ? OffsetMode::shared_direction : OffsetMode::per_identity_direction;
        out.seed = seed;
        return out;
    }

    void echo_into(Echo& echo) const {
        add(echo, "synth.identities", static_cast<std::uint64_t>(spec.num_identities));
        add(echo, "synth.bonafide", static_cast<std::uint64_t>(spec.bonafide_per_identity));
        add(echo, "synth.attacks", static_cast<std::uint64_t>(spec.attacks_per_identity));
        add(echo, "synth.dim", static_cast<std::uint64_t>(spec.dim));
        add(echo, "synth.cluster-spread", spec.identity_cluster_spread);
        add(echo, "synth.attack-offset", spec.attack_offset_magnitude);
        add(echo, "synth.offset-mode", offset_mode);
        add(echo, "synth.global-spread", spec.global_spread);
        add(echo, "synth.identity-rank", static_cast<std::uint64_t>(spec.identity_rank));
    }
};

struct TrainerFlags {
    TrainerConfig cfg;
    std::string extractor_widths;
    std::string classifier_widths;
    std::string mean_mode = "adaptive";
    std::string pc_mode = "on";
    std::string pc_norm = "pair-mean";
    std::string preset = "desk";

    void attach(CLI::App* cmd) {
        cmd->add_option("--trainer.preset", preset, "desk | large (large-scale architecture and schedule)")
            ->check(CLI::IsMember({"desk", "large"}));
        cmd->add_option("--trainer.alpha", cfg.alpha, "Running-mean blend weight");
        cmd->add_option("--trainer.sigma", cfg.sigma, "Pseudo-negative standard deviation");
        cmd->add_option("--trainer.lambda1", cfg.lambda1, "Pairwise-confusion weight");
        cmd->add_option("--trainer.lambda2", cfg.lambda2, "Cross-entropy weight");
        cmd->add_option("--trainer.lr", cfg.learning_rate, "Learning rate");
        cmd->add_option("--trainer.epochs", cfg.epochs, "Training epochs");
        cmd->add_option("--trainer.batch-k", cfg.batch_k, "Bonafide rows per step (pseudo batch matches)");
        cmd->add_option("--trainer.input-dim", cfg.input_dim, "Input feature dimension");
        cmd->add_option("--trainer.extractor-widths", extractor_widths, "Extractor layer widths, comma separated");
        cmd->add_option("--trainer.classifier-widths", classifier_widths,
                        "Classifier layer widths, comma separated (last must be 2)");
        cmd->add_option("--trainer.mean-mode", mean_mode, "adaptive | origin")
            ->check(CLI::IsMember({"adaptive", "origin"}));
        cmd->add_option("--trainer.pc-mode", pc_mode, "on | off")->check(CLI::IsMember({"on", "off"}));
        cmd->add_option("--trainer.pc-norm", pc_norm, "pair-mean | literal-sum")
            ->check(CLI::IsMember({"pair-mean", "literal-sum"}));
    }

    TrainerConfig resolve(std::uint64_t seed, const CLI::App* cmd) const {
        TrainerConfig out = cfg;
        if (preset == "large" && cmd) {
            // Large-scale preset; explicit flags still win.
            if (cmd->count("--trainer.input-dim") == 0) out.input_dim = 4096;
            if (cmd->count("--trainer.extractor-widths") == 0) out.extractor_widths = {4096};
            if (cmd->count("--trainer.classifier-widths") == 0) out.classifier_widths = {8192, 1000, 500, 2};
            if (cmd->count("--trainer.lr") == 0) out.learning_rate = 1e-4;
            if (cmd->count("--trainer.epochs") == 0) out.epochs = 100;
            if (cmd->count("--trainer.batch-k") == 0) out.batch_k = 80;
        }
        if (!extractor_widths.empty()) out.extractor_widths = parse_sizes(extractor_widths, "extractor widths");
        if (!classifier_widths.empty()) out.classifier_widths = parse_sizes(classifier_widths, "classifier widths");
        out.mean_mode = mean_mode == "adaptive" ? MeanMode::adaptive : MeanMode::origin;
        out.pc_mode = pc_mode == "on" ? PcMode::on : PcMode::off;
        out.pc_normalization = pc_norm == "pair-mean" ? PcNormalization::pair_mean : PcNormalization::literal_sum;
        out.seed = seed;
        return out;
    }

    static void echo_into(Echo& echo, const TrainerConfig& resolved) {
        add(echo, "trainer.alpha", resolved.alpha);
        add(echo, "trainer.sigma", resolved.sigma);
        add(echo, "trainer.lambda1", resolved.lambda1);
        add(echo, "trainer.lambda2", resolved.lambda2);
        add(echo, "trainer.lr", resolved.learning_rate);
        add(echo, "trainer.epochs", static_cast<std::uint64_t>(resolved.epochs));
        add(echo, "trainer.batch-k", static_cast<std::uint64_t>(resolved.batch_k));
        add(echo, "trainer.input-dim", static_cast<std::uint64_t>(resolved.input_dim));
        add(echo, "trainer.extractor-widths", join_sizes(resolved.extractor_widths));
        add(echo, "trainer.classifier-widths", join_sizes(resolved.classifier_widths));
        add(echo, "trainer.mean-mode", resolved.mean_mode == MeanMode::adaptive ? "adaptive" : "origin");
        add(echo, "trainer.pc-mode", resolved.pc_mode == PcMode::on ? "on" : "off");
        add(echo, "trainer.pc-norm",
            resolved.pc_normalization == PcNormalization::pair_mean ? "pair-mean" : "literal-sum");
        add(echo, "trainer.seed", resolved.seed);
    }
};

struct BaselineFlags {
    double nu = 0.1;
    EmConfig em;
    SgdConfig sgd;
    std::size_t gmm_components = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--nu", nu, "OC-SVM / SVDD nu")->check(CLI::Range(1e-9, 1.0));
        cmd->add_option("--em.restarts", em.restarts, "EM restarts");
        cmd->add_option("--em.max-iters", em.max_iterations, "EM iteration cap");
        cmd->add_option("--em.tol", em.tolerance, "EM log-likelihood tolerance");
        cmd->add_option("--em.var-floor", em.variance_floor, "Variance floor");
        cmd->add_option("--sgd.iterations", sgd.iterations, "Subgradient iterations");
        cmd->add_option("--gmm.components", gmm_components, "GMM components (0 = min(50, n/10))");
    }

    void echo_into(Echo& echo) const {
        add(echo, "nu", nu);
        add(echo, "em.restarts", static_cast<std::uint64_t>(em.restarts));
        add(echo, "em.max-iters", static_cast<std::uint64_t>(em.max_iterations));
        add(echo, "em.tol", em.tolerance);
        add(echo, "em.var-floor", em.variance_floor);
        add(echo, "sgd.iterations", static_cast<std::uint64_t>(sgd.iterations));
        add(echo, "gmm.components", static_cast<std::uint64_t>(gmm_components));
    }
};

Protocol parse_protocol(const std::string& name) { return name == "p1" ? Protocol::p1 : Protocol::p2; }

void write_file_checked(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << contents;
    if (!out) throw ParseError("write to " + path + " failed");
}

int cmd_gen_data(const std::string& out_path, const SynthFlags& synth, std::uint64_t seed) {
    const SyntheticSpec spec = synth.resolve(seed);
    Rng rng(spec.seed);
    const Dataset dataset = generate_synthetic(spec, rng);

    Echo echo;
    add(echo, "command", std::string("gen-data"));
    add(echo, "seed", seed);
    synth.echo_into(echo);
    save_dataset(dataset, out_path, echo_comments(echo));

    print_echo(echo);
    std::cout << "wrote " << out_path << ": " << spec.num_identities << " identities, "
              << dataset.count(Label::bonafide) << " bonafide + " << dataset.count(Label::attack)
              << " attack samples, dim " << dataset.dim << "\n";
    return 0;
}

struct TrainArgs {
    std::string data_path;
    std::string method = "proposed";
    std::string protocol = "p1";
    double fraction = 0.5;
    std::string out_path;
    std::string log_path;
};

int cmd_train(const TrainArgs& args, const TrainerFlags& trainer_flags, const BaselineFlags& baseline_flags,
              std::uint64_t seed, const CLI::App* cmd) {
    const Dataset dataset = load_dataset(args.data_path);

    Dataset train_set;
    if (args.protocol == "none") {
        // The file is used as-is as the training set; one-class discipline is
        // enforced before anything is written.
        if (dataset.count(Label::attack) != 0)
            throw ContractError("training input contains attack-labeled samples");
        train_set = dataset;
    } else {
        Rng split_rng(seed ^ 0x9e3779b97f4a7c15ull);
        train_set = split_protocol(dataset, parse_protocol(args.protocol), args.fraction, split_rng).train;
    }

    Echo echo;
    add(echo, "command", std::string("train"));
    add(echo, "method", args.method);
    add(echo, "data", args.data_path);
    add(echo, "protocol", args.protocol);
    add(echo, "fraction", args.fraction);
    add(echo, "seed", seed);

    if (is_trainer_method(args.method)) {
        TrainerConfig cfg = trainer_config_for_method(trainer_flags.resolve(seed, cmd), args.method);
        cfg.input_dim = train_set.dim;
        TrainerFlags::echo_into(echo, cfg);

        Rng init_rng(seed);
        SpoofModel model = init_model(cfg, init_rng);
        TrainerState state = make_trainer_state(model, cfg);
        const TrainingLog log = train(model, state, train_set, cfg);

        save_trainer_checkpoint(args.out_path, args.method, model, state.running_mean, echo);
        if (!args.log_path.empty()) {
            std::ostringstream buffer;
            write_training_log(log, buffer, echo_comments(echo));
            write_file_checked(args.log_path, buffer.str());
        }
        print_echo(echo);
        std::cout << "trained " << args.method << " on " << train_set.samples.size() << " bonafide samples ("
                  << log.epochs.size() << " epochs); first-epoch loss " << log.epochs.front().loss.total
                  << ", last-epoch loss " << log.epochs.back().loss.total << "\n";
    } else {
        baseline_flags.echo_into(echo);
        const Matrix features = train_set.feature_matrix();
        BaselineModel model;
        if (args.method == "md") {
            model = fit_mahalanobis(features);
        } else if (args.method == "gmm") {
            std::size_t components = baseline_flags.gmm_components;
            if (components == 0) components = std::min<std::size_t>(50, std::max<std::size_t>(1, features.rows / 10));
            EmConfig em = baseline_flags.em;
            em.seed = seed;
            add(echo, "gmm.components-resolved", static_cast<std::uint64_t>(components));
            model = fit_gmm(features, components, em);
        } else if (args.method == "ocsvm") {
            SgdConfig sgd = baseline_flags.sgd;
            sgd.seed = seed;
            model = fit_linear_ocsvm(features, baseline_flags.nu, sgd);
        } else if (args.method == "svdd") {
            SgdConfig sgd = baseline_flags.sgd;
            sgd.seed = seed;
            model = fit_linear_svdd(features, baseline_flags.nu, sgd);
        } else {
            throw ConfigError("unknown method '" + args.method + "'");
        }
        save_baseline_checkpoint(args.out_path, args.method, model, echo);
        print_echo(echo);
        std::cout << "fitted " << args.method << " on " << train_set.samples.size() << " bonafide samples\n";
    }
    std::cout << "checkpoint written to " << args.out_path << "\n";
    return 0;
}

int cmd_score(const std::string& model_path, const std::string& data_path, const std::string& out_path) {
    const Checkpoint checkpoint = load_checkpoint(model_path);
    const Dataset dataset = load_dataset(data_path);
    const Matrix features = dataset.feature_matrix();

    std::vector<double> scores;
    if (checkpoint.model) {
        scores = score(*checkpoint.model, features);
    } else if (checkpoint.baseline) {
        scores = baseline_score(*checkpoint.baseline, features);
    } else {
        throw ParseError("checkpoint holds no model");
    }

    std::vector<ScoredSample> scored(dataset.samples.size());
    for (std::size_t i = 0; i < dataset.samples.size(); ++i)
        scored[i] = {scores[i], dataset.samples[i].identity, dataset.samples[i].label};

    Echo echo;
    add(echo, "command", std::string("score"));
    add(echo, "model", model_path);
    add(echo, "model-kind", checkpoint.kind);
    add(echo, "data", data_path);
    std::ostringstream buffer;
    write_scores(scored, buffer, echo_comments(echo));
    write_file_checked(out_path, buffer.str());

    print_echo(echo);
    std::cout << "scored " << scored.size() << " samples -> " << out_path << "\n";
    return 0;
}

struct BenchArgs {
    std::string methods = "proposed,occnn,md,gmm,ocsvm,svdd";
    bool pc_off_ablation = false;
    std::size_t seeds = 1;
    std::string data_path;
    std::string protocol = "p1";
    double fraction = 0.5;
    std::string out_path;
};

int cmd_bench(const BenchArgs& args, const SynthFlags& synth, const TrainerFlags& trainer_flags,
              const BaselineFlags& baseline_flags, std::uint64_t seed, const CLI::App* cmd) {
    BenchConfig cfg;
    cfg.methods = split_csv(args.methods);
    if (args.pc_off_ablation &&
        std::find(cfg.methods.begin(), cfg.methods.end(), "proposed-nopc") == cfg.methods.end())
        cfg.methods.push_back("proposed-nopc");
    cfg.seeds = args.seeds;
    cfg.base_seed = seed;
    cfg.protocol = parse_protocol(args.protocol);
    cfg.fraction = args.fraction;
    cfg.trainer = trainer_flags.resolve(seed, cmd);
    cfg.synth = synth.resolve(seed);
    if (!args.data_path.empty()) cfg.dataset_path = args.data_path;
    cfg.em = baseline_flags.em;
    cfg.sgd = baseline_flags.sgd;
    cfg.nu = baseline_flags.nu;
    cfg.gmm_components = baseline_flags.gmm_components;

    const BenchResult result = run_bench(cfg);

    Echo echo;
    add(echo, "command", std::string("bench"));
    std::string methods_csv;
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) methods_csv += (i ? "," : "") + cfg.methods[i];
    add(echo, "methods", methods_csv);
    add(echo, "seeds", static_cast<std::uint64_t>(cfg.seeds));
    add(echo, "seed", seed);
    add(echo, "protocol", args.protocol);
    add(echo, "fraction", args.fraction);
    if (cfg.dataset_path) {
        add(echo, "data", *cfg.dataset_path);
    } else {
        synth.echo_into(echo);
    }
    TrainerFlags::echo_into(echo, cfg.trainer);
    baseline_flags.echo_into(echo);

    if (!args.out_path.empty()) {
        std::ostringstream buffer;
        write_bench_report(result, buffer, echo_comments(echo));
        write_file_checked(args.out_path, buffer.str());
    }
    print_echo(echo);
    std::cout << format_bench_table(result);
    if (!args.out_path.empty()) std::cout << "report written to " << args.out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-class spoof-detection training and benchmarking toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string config_path;

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "Generate a synthetic benchmark dataset");
    gen->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    gen->add_option("--config", config_path, "key=value config file (flags override it)");
    std::string gen_out;
    gen->add_option("--out", gen_out, "Output dataset path")->required();
    gen->add_option("--seed", seed, "Generation seed")->envname("SPOOFBENCH_SEED");
    SynthFlags gen_synth;
    gen_synth.attach(gen);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train or fit one method on the bonafide side of a dataset");
    train_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    train_cmd->add_option("--config", config_path, "key=value config file (flags override it)");
    TrainArgs train_args;
    train_cmd->add_option("--data", train_args.data_path, "Dataset file")->required();
    train_cmd->add_option("--method", train_args.method, "proposed | proposed-nopc | occnn | md | gmm | ocsvm | svdd")
        ->check(CLI::IsMember(known_methods()));
    train_cmd->add_option("--protocol", train_args.protocol, "p1 | p2 | none (use the file as the train set)")
        ->check(CLI::IsMember({"p1", "p2", "none"}));
    train_cmd->add_option("--fraction", train_args.fraction, "Train fraction for the protocol split");
    train_cmd->add_option("--out", train_args.out_path, "Checkpoint path")->required();
    train_cmd->add_option("--log", train_args.log_path, "Training log path (trainer methods)");
    train_cmd->add_option("--seed", seed, "Run seed")->envname("SPOOFBENCH_SEED");
    TrainerFlags train_trainer;
    train_trainer.attach(train_cmd);
    BaselineFlags train_baselines;
    train_baselines.attach(train_cmd);

    // score
    auto* score_cmd = app.add_subcommand("score", "Score a dataset with a saved checkpoint");
    score_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    score_cmd->add_option("--config", config_path, "key=value config file (flags override it)");
    std::string score_model, score_data, score_out;
    score_cmd->add_option("--model", score_model, "Checkpoint path")->required();
    score_cmd->add_option("--data", score_data, "Dataset file")->required();
    score_cmd->add_option("--out", score_out, "Score file path")->required();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Split, train every method, and compare ACER");
    bench_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    bench_cmd->add_option("--config", config_path, "key=value config file (flags override it)");
    BenchArgs bench_args;
    bench_cmd->add_option("--methods", bench_args.methods, "Comma-separated method list");
    bench_cmd->add_flag("--pc-off", bench_args.pc_off_ablation, "Also run the proposed method with the confusion term off");
    bench_cmd->add_option("--seeds", bench_args.seeds, "Number of seeds per method");
    bench_cmd->add_option("--seed", seed, "Base seed")->envname("SPOOFBENCH_SEED");
    bench_cmd->add_option("--data", bench_args.data_path, "Dataset file (omit to generate synthetic data per seed)");
    bench_cmd->add_option("--protocol", bench_args.protocol, "p1 | p2")->check(CLI::IsMember({"p1", "p2"}));
    bench_cmd->add_option("--fraction", bench_args.fraction, "Train fraction for the protocol split");
    bench_cmd->add_option("--out", bench_args.out_path, "Machine-readable report path");
    SynthFlags bench_synth;
    bench_synth.attach(bench_cmd);
    TrainerFlags bench_trainer;
    bench_trainer.attach(bench_cmd);
    BaselineFlags bench_baselines;
    bench_baselines.attach(bench_cmd);

    try {
        auto args = expand_config_args(argc, argv, {"gen-data", "train", "score", "bench"});
        std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(gen_out, gen_synth, seed);
        if (train_cmd->parsed()) return cmd_train(train_args, train_trainer, train_baselines, seed, train_cmd);
        if (score_cmd->parsed()) return cmd_score(score_model, score_data, score_out);
        if (bench_cmd->parsed()) return cmd_bench(bench_args, bench_synth, bench_trainer, bench_baselines, seed, bench_cmd);
    } catch (const std::exception& e) {
        const char* stage = gen->parsed() ? "gen-data" : train_cmd->parsed() ? "train" : score_cmd->parsed() ? "score" : "bench";
        std::cerr << "error (" << stage << "): " << e.what() << "\n";
        return 1;
    }
    return 0;
}
