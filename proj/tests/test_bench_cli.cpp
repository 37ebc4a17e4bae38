#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spoofbench/bench.hpp"
#include "spoofbench/error.hpp"

using namespace spoofbench;

namespace {

std::string temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "spoofbench_cli_tests";
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_cli(const std::string& args) {
    const std::string command = std::string(SPOOFBENCH_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

BenchConfig small_bench_config() {
    BenchConfig cfg;
    cfg.methods = {"md", "proposed"};
    cfg.seeds = 2;
    cfg.synth.num_identities = 6;
    cfg.synth.bonafide_per_identity = 12;
    cfg.synth.attacks_per_identity = 12;
    cfg.synth.dim = 8;
    cfg.synth.global_spread = 4.0;
    cfg.synth.identity_rank = 2;
    cfg.trainer.input_dim = 8;
    cfg.trainer.extractor_widths = {8, 4};
    cfg.trainer.classifier_widths = {6, 2};
    cfg.trainer.epochs = 5;
    cfg.trainer.batch_k = 8;
    return cfg;
}

}  // namespace

TEST_CASE("run_bench") {
    SUBCASE("produces one summary per requested method, in order") {
        const BenchConfig cfg = small_bench_config();
        const BenchResult result = run_bench(cfg);
        REQUIRE(result.methods.size() == 2);
        CHECK(result.methods[0].method == "md");
        CHECK(result.methods[1].method == "proposed");
        for (const auto& m : result.methods) {
            CHECK(m.per_seed.size() == 2);
            for (const auto& o : m.per_seed) {
                CHECK(o.acer >= 0.0);
                CHECK(o.acer <= 100.0);
            }
        }
    }
    SUBCASE("re-running writes byte-identical reports") {
        const BenchConfig cfg = small_bench_config();
        std::ostringstream a, b;
        write_bench_report(run_bench(cfg), a, {"config seeds 2"});
        write_bench_report(run_bench(cfg), b, {"config seeds 2"});
        CHECK(a.str() == b.str());
        CHECK(a.str().find("method,seed,acer,apcer,bpcer") != std::string::npos);
    }
    SUBCASE("unknown methods are rejected") {
        BenchConfig cfg = small_bench_config();
        cfg.methods = {"kernel-svm"};
        CHECK_THROWS_AS(run_bench(cfg), ConfigError);
    }
    SUBCASE("margin baselines carry the linear-variant note") {
        BenchConfig cfg = small_bench_config();
        cfg.methods = {"svdd"};
        const BenchResult result = run_bench(cfg);
        REQUIRE(result.notes.size() == 1);
        CHECK(result.notes[0].find("linear") != std::string::npos);
    }
    SUBCASE("method mode switches") {
        TrainerConfig base;
        const TrainerConfig occnn = trainer_config_for_method(base, "occnn");
        CHECK(occnn.mean_mode == MeanMode::origin);
        CHECK(occnn.pc_mode == PcMode::off);
        const TrainerConfig ablation = trainer_config_for_method(base, "proposed-nopc");
        CHECK(ablation.mean_mode == MeanMode::adaptive);
        CHECK(ablation.pc_mode == PcMode::off);
        CHECK_THROWS_AS(trainer_config_for_method(base, "md"), ConfigError);
    }
}

TEST_CASE("cli end to end") {
    const std::string dir = temp_dir();

    SUBCASE("gen-data with the same seed is byte-identical; validation fails fast") {
        const std::string d1 = dir + "/gen1.csv", d2 = dir + "/gen2.csv";
        REQUIRE(run_cli("gen-data --out " + d1 + " --seed 7 --synth.identities 4 --synth.bonafide 5 --synth.attacks 5") == 0);
        REQUIRE(run_cli("gen-data --out " + d2 + " --seed 7 --synth.identities 4 --synth.bonafide 5 --synth.attacks 5") == 0);
        CHECK(slurp(d1) == slurp(d2));
        CHECK(run_cli("gen-data --out " + dir + "/bad.csv --attack-offset 0") != 0);
        CHECK(run_cli("gen-data --out " + dir + "/bad2.csv --synth.offset-mode sideways") != 0);
    }

    SUBCASE("train writes a checkpoint and log; scoring works from the checkpoint") {
        const std::string data = dir + "/train_data.csv";
        const std::string ckpt = dir + "/model.ckpt";
        const std::string log = dir + "/train_log.csv";
        const std::string scores = dir + "/scores.csv";
        REQUIRE(run_cli("gen-data --out " + data +
                        " --seed 3 --synth.identities 6 --synth.bonafide 10 --synth.attacks 10 --synth.dim 8") == 0);
        REQUIRE(run_cli("train --data " + data + " --method proposed --protocol p1 --seed 3 --out " + ckpt +
                        " --log " + log +
                        " --trainer.input-dim 8 --trainer.extractor-widths 8,4 --trainer.classifier-widths 6,2"
                        " --trainer.epochs 4 --trainer.batch-k 8") == 0);
        CHECK(std::filesystem::exists(ckpt));
        const std::string log_text = slurp(log);
        CHECK(log_text.find("# config method proposed") != std::string::npos);
        CHECK(log_text.find("epoch,steps,ce,pc,total,mu") != std::string::npos);
        REQUIRE(run_cli("score --model " + ckpt + " --data " + data + " --out " + scores) == 0);
        const std::string score_text = slurp(scores);
        CHECK(score_text.find("# config model-kind proposed") != std::string::npos);
        CHECK(score_text.find("id1,") != std::string::npos);
    }

    SUBCASE("baseline training produces a loadable, scoreable checkpoint") {
        const std::string data = dir + "/md_data.csv";
        const std::string ckpt = dir + "/md.ckpt";
        const std::string scores = dir + "/md_scores.csv";
        REQUIRE(run_cli("gen-data --out " + data + " --seed 5 --synth.identities 4 --synth.bonafide 8 --synth.attacks 4 --synth.dim 6") == 0);
        REQUIRE(run_cli("train --data " + data + " --method md --protocol p2 --seed 5 --out " + ckpt) == 0);
        CHECK(slurp(ckpt).find("kind md") != std::string::npos);
        REQUIRE(run_cli("score --model " + ckpt + " --data " + data + " --out " + scores) == 0);
        CHECK(slurp(scores).find("# config model-kind md") != std::string::npos);
    }

    SUBCASE("attack rows in a protocol-none training file abort without a checkpoint") {
        const std::string data = dir + "/tainted.csv";
        {
            std::ofstream out(data);
            out << "dim=2\n";
            for (int i = 0; i < 4; ++i) out << "a,bonafide," << i << ",0\n";
            out << "a,attack,9,9\n";
        }
        const std::string ckpt = dir + "/never_written.ckpt";
        std::filesystem::remove(ckpt);
        CHECK(run_cli("train --data " + data + " --method proposed --protocol none --out " + ckpt) != 0);
        CHECK_FALSE(std::filesystem::exists(ckpt));
    }

    SUBCASE("bench emits byte-identical machine reports and honours --pc-off") {
        const std::string r1 = dir + "/bench1.csv", r2 = dir + "/bench2.csv";
        const std::string flags =
            " --methods md,proposed --pc-off --seeds 2 --seed 11"
            " --synth.identities 6 --synth.bonafide 10 --synth.attacks 10 --synth.dim 8"
            " --trainer.input-dim 8 --trainer.extractor-widths 8,4 --trainer.classifier-widths 6,2"
            " --trainer.epochs 4 --trainer.batch-k 8";
        REQUIRE(run_cli("bench --out " + r1 + flags) == 0);
        REQUIRE(run_cli("bench --out " + r2 + flags) == 0);
        CHECK(slurp(r1) == slurp(r2));
        CHECK(slurp(r1).find("proposed-nopc,mean") != std::string::npos);
    }

    SUBCASE("config file values apply and flags override them") {
        const std::string cfgfile = dir + "/run.cfg";
        {
            std::ofstream out(cfgfile);
            out << "synth.identities=3\nsynth.bonafide=4\nsynth.attacks=4\nseed=9\n";
        }
        const std::string d1 = dir + "/from_file.csv";
        REQUIRE(run_cli("gen-data --config " + cfgfile + " --out " + d1) == 0);
        CHECK(slurp(d1).find("# config synth.identities 3") != std::string::npos);
        CHECK(slurp(d1).find("# config seed 9") != std::string::npos);

        const std::string d2 = dir + "/flag_wins.csv";
        REQUIRE(run_cli("gen-data --config " + cfgfile + " --out " + d2 + " --synth.identities 5") == 0);
        CHECK(slurp(d2).find("# config synth.identities 5") != std::string::npos);

        {
            std::ofstream out(cfgfile);
            out << "synth.identities=3\nnot.a.key=1\n";
        }
        CHECK(run_cli("gen-data --config " + cfgfile + " --out " + dir + "/unused.csv") != 0);
    }

    SUBCASE("the seed environment variable is honoured and echoed") {
        const std::string data = dir + "/env_seed.csv";
        const std::string command = std::string("SPOOFBENCH_SEED=31 ") + SPOOFBENCH_BIN +
                                    " gen-data --out " + data +
                                    " --synth.identities 3 --synth.bonafide 4 --synth.attacks 4 >/dev/null 2>&1";
        REQUIRE(std::system(command.c_str()) == 0);
        CHECK(slurp(data).find("# config seed 31") != std::string::npos);
    }

    SUBCASE("unknown methods exit nonzero") {
        CHECK(run_cli("bench --methods quantum --seeds 1") != 0);
        CHECK(run_cli("train --data nowhere.csv --method nope --out x.ckpt") != 0);
    }
}
