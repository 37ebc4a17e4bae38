#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "spoofbench/baselines.hpp"
#include "spoofbench/data.hpp"
#include "spoofbench/error.hpp"
#include "spoofbench/evaluation.hpp"

using namespace spoofbench;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("spoofbench_test_" + name)).string();
}

struct FileGuard {
    std::string path;
    ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("generate_synthetic") {
    SyntheticSpec spec;
    spec.num_identities = 4;
    spec.bonafide_per_identity = 6;
    spec.attacks_per_identity = 5;
    spec.dim = 10;
    spec.seed = 5;

    SUBCASE("counts, labels, and dimensions") {
        Rng rng(spec.seed);
        const Dataset data = generate_synthetic(spec, rng);
        CHECK(data.dim == 10);
        CHECK(data.samples.size() == 4 * 11);
        CHECK(data.count(Label::bonafide) == 24);
        CHECK(data.count(Label::attack) == 20);
        CHECK(data.identities().size() == 4);
        for (const auto& s : data.samples) CHECK(s.features.size() == 10);
    }
    SUBCASE("same seed reproduces the dataset exactly") {
        Rng a(spec.seed), b(spec.seed);
        const Dataset d1 = generate_synthetic(spec, a);
        const Dataset d2 = generate_synthetic(spec, b);
        REQUIRE(d1.samples.size() == d2.samples.size());
        for (std::size_t i = 0; i < d1.samples.size(); ++i) {
            CHECK(d1.samples[i].features == d2.samples[i].features);
            CHECK(d1.samples[i].identity == d2.samples[i].identity);
        }
    }
    SUBCASE("attack centroids sit one offset away from bonafide centroids") {
        SyntheticSpec big = spec;
        big.bonafide_per_identity = 400;
        big.attacks_per_identity = 400;
        big.attack_offset_magnitude = 4.0;
        Rng rng(7);
        const Dataset data = generate_synthetic(big, rng);
        for (const auto& id : data.identities()) {
            std::vector<double> bona(big.dim, 0.0), att(big.dim, 0.0);
            std::size_t nb = 0, na = 0;
            for (const auto& s : data.samples) {
                if (s.identity != id) continue;
                auto& acc = s.label == Label::bonafide ? bona : att;
                for (std::size_t j = 0; j < big.dim; ++j) acc[j] += s.features[j];
                (s.label == Label::bonafide ? nb : na) += 1;
            }
            double dist_sq = 0.0;
            for (std::size_t j = 0; j < big.dim; ++j) {
                const double diff = att[j] / na - bona[j] / nb;
                dist_sq += diff * diff;
            }
            // centroid estimate noise ~ sigma_id/sqrt(n) per dim
            CHECK(std::sqrt(dist_sq) == doctest::Approx(4.0).epsilon(0.1));
        }
    }
    SUBCASE("invalid specs are rejected") {
        SyntheticSpec bad = spec;
        bad.attack_offset_magnitude = 0.0;
        Rng rng(1);
        CHECK_THROWS_AS(generate_synthetic(bad, rng), ConfigError);
        bad = spec;
        bad.identity_rank = 11;  // > dim
        CHECK_THROWS_AS(generate_synthetic(bad, rng), ConfigError);
    }
}

TEST_CASE("offset regimes behave as designed") {
    SUBCASE("near-overlapping classes still carry signal for an ideal projection") {
        SyntheticSpec spec;
        spec.num_identities = 4;
        spec.bonafide_per_identity = 200;
        spec.attacks_per_identity = 200;
        spec.dim = 8;
        spec.identity_cluster_spread = 1.0;
        spec.attack_offset_magnitude = 0.01;  // delta = 0.01 * sigma_id
        Rng gen(13);
        const Dataset data = generate_synthetic(spec, gen);

        // Oracle classifier: project onto the (label-derived) offset
        // direction; lower projection = more bonafide.
        std::vector<double> bona_mean(spec.dim, 0.0), attack_mean(spec.dim, 0.0);
        for (const auto& s : data.samples) {
            auto& acc = s.label == Label::bonafide ? bona_mean : attack_mean;
            for (std::size_t j = 0; j < spec.dim; ++j) acc[j] += s.features[j];
        }
        const double nb = static_cast<double>(data.count(Label::bonafide));
        const double na = static_cast<double>(data.count(Label::attack));
        std::vector<double> direction(spec.dim);
        for (std::size_t j = 0; j < spec.dim; ++j) direction[j] = attack_mean[j] / na - bona_mean[j] / nb;

        std::vector<ScoredSample> scored;
        for (const auto& s : data.samples) {
            double projection = 0.0;
            for (std::size_t j = 0; j < spec.dim; ++j) projection += s.features[j] * direction[j];
            scored.push_back({-projection, s.identity, s.label});
        }
        CHECK(best_acer(scored).acer < 50.0);
    }
    SUBCASE("a huge offset makes the Mahalanobis baseline nearly perfect") {
        SyntheticSpec spec;
        spec.attack_offset_magnitude = 100.0;  // delta = 100 * sigma_id
        Rng gen(14);
        const Dataset data = generate_synthetic(spec, gen);
        Rng split_rng(15);
        const SplitResult split = split_protocol(data, Protocol::p1, 0.5, split_rng);
        const MahalanobisModel model = fit_mahalanobis(split.train.feature_matrix());
        const Matrix test = split.test.feature_matrix();
        const auto scores = baseline_score(BaselineModel{model}, test);
        std::vector<ScoredSample> scored;
        for (std::size_t i = 0; i < split.test.samples.size(); ++i)
            scored.push_back({scores[i], split.test.samples[i].identity, split.test.samples[i].label});
        CHECK(evaluate_per_identity(scored).mean_acer < 5.0);
    }
}

TEST_CASE("split_protocol") {
    SyntheticSpec spec;
    spec.num_identities = 20;
    spec.bonafide_per_identity = 8;
    spec.attacks_per_identity = 6;
    spec.dim = 4;
    Rng gen(11);
    const Dataset data = generate_synthetic(spec, gen);

    SUBCASE("protocol 1 splits identities disjointly") {
        Rng rng(3);
        const SplitResult split = split_protocol(data, Protocol::p1, 0.5, rng);
        const auto train_ids = split.train.identities();
        const auto test_ids = split.test.identities();
        std::set<std::string> train_set(train_ids.begin(), train_ids.end());
        for (const auto& id : test_ids) CHECK(train_set.count(id) == 0);
        CHECK(train_ids.size() + test_ids.size() == 20);
        CHECK(split.train.count(Label::attack) == 0);
        // held-out identities keep all their samples
        CHECK(split.test.samples.size() == test_ids.size() * 14);
    }
    SUBCASE("protocol 2 keeps identities shared and attacks out of train") {
        Rng rng(4);
        const SplitResult split = split_protocol(data, Protocol::p2, 0.5, rng);
        const auto train_ids = split.train.identities();
        const auto test_ids = split.test.identities();
        std::set<std::string> train_set(train_ids.begin(), train_ids.end());
        for (const auto& id : test_ids) CHECK(train_set.count(id) == 1);
        CHECK(split.train.count(Label::attack) == 0);
        CHECK(split.test.count(Label::attack) == data.count(Label::attack));
    }
    SUBCASE("degenerate fractions raise split errors") {
        Rng rng(5);
        CHECK_THROWS_AS(split_protocol(data, Protocol::p1, 0.0, rng), SplitError);
        CHECK_THROWS_AS(split_protocol(data, Protocol::p1, 1.0, rng), SplitError);
        CHECK_THROWS_AS(split_protocol(data, Protocol::p1, 0.001, rng), SplitError);
    }
    SUBCASE("invariants hold over many random splits") {
        Rng rng(99);
        for (int round = 0; round < 50; ++round) {
            const Protocol protocol = round % 2 ? Protocol::p1 : Protocol::p2;
            const double fraction = 0.3 + 0.4 * rng.uniform01();
            const SplitResult split = split_protocol(data, protocol, fraction, rng);
            CHECK(split.train.count(Label::attack) == 0);
            std::set<std::string> train_ids;
            for (const auto& s : split.train.samples) train_ids.insert(s.identity);
            for (const auto& id : split.test.identities()) {
                if (protocol == Protocol::p1) {
                    CHECK(train_ids.count(id) == 0);
                } else {
                    CHECK(train_ids.count(id) == 1);
                }
            }
        }
    }
}

TEST_CASE("dataset file round trip") {
    SyntheticSpec spec;
    spec.num_identities = 3;
    spec.bonafide_per_identity = 4;
    spec.attacks_per_identity = 4;
    spec.dim = 6;
    Rng gen(21);
    const Dataset data = generate_synthetic(spec, gen);

    SUBCASE("load(save(D)) == D exactly") {
        FileGuard guard{temp_path("roundtrip.csv")};
        save_dataset(data, guard.path, {"config seed 21"});
        const Dataset loaded = load_dataset(guard.path);
        CHECK(loaded.dim == data.dim);
        REQUIRE(loaded.samples.size() == data.samples.size());
        for (std::size_t i = 0; i < data.samples.size(); ++i) {
            CHECK(loaded.samples[i].identity == data.samples[i].identity);
            CHECK(loaded.samples[i].label == data.samples[i].label);
            CHECK(loaded.samples[i].features == data.samples[i].features);  // bit-exact
        }
    }
    SUBCASE("minimal hand-written file parses") {
        FileGuard guard{temp_path("minimal.csv")};
        std::ofstream out(guard.path);
        out << "dim=2\nalice,bonafide,1.5,-2\nmallory,attack,0.25,1e-3\n";
        out.close();
        const Dataset loaded = load_dataset(guard.path);
        REQUIRE(loaded.samples.size() == 2);
        CHECK(loaded.samples[0].label == Label::bonafide);
        CHECK(loaded.samples[1].label == Label::attack);
        CHECK(loaded.samples[1].features[1] == 1e-3);
    }
    SUBCASE("a short row names its line") {
        FileGuard guard{temp_path("short.csv")};
        std::ofstream out(guard.path);
        out << "dim=3\nalice,bonafide,1,2,3\nbob,bonafide,1,2\n";
        out.close();
        try {
            load_dataset(guard.path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("bad labels and headers are parse errors") {
        FileGuard guard{temp_path("badlabel.csv")};
        {
            std::ofstream out(guard.path);
            out << "dim=1\nalice,genuine,1\n";
        }
        CHECK_THROWS_AS(load_dataset(guard.path), ParseError);
        {
            std::ofstream out(guard.path);
            out << "size=1\nalice,bonafide,1\n";
        }
        CHECK_THROWS_AS(load_dataset(guard.path), ParseError);
        CHECK_THROWS_AS(load_dataset(temp_path("does_not_exist.csv")), ParseError);
    }
}
