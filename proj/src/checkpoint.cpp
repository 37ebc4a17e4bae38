#include "spoofbench/checkpoint.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "spoofbench/error.hpp"

namespace spoofbench {

std::string format_double_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

namespace {

constexpr const char* kMagic = "spoofbench-model";
constexpr const char* kVersion = "v1";

void write_span(std::ostream& out, const char* tag, std::span<const double> values) {
    out << tag;
    for (double v : values) out << ' ' << format_double_exact(v);
    out << "\n";
}

void write_mlp(std::ostream& out, const char* name, const Mlp& mlp) {
    out << "mlp " << name << ' ' << mlp.layers.size() << "\n";
    for (const auto& layer : mlp.layers) {
        out << "layer " << (layer.activation == Activation::relu ? "relu" : "identity") << ' ' << layer.out_dim()
            << ' ' << layer.in_dim() << "\n";
        for (std::size_t r = 0; r < layer.out_dim(); ++r) write_span(out, "w", layer.weights.row(r));
        write_span(out, "b", layer.bias);
    }
}

void write_header(std::ostream& out, const std::string& kind,
                  const std::vector<std::pair<std::string, std::string>>& echo) {
    out << kMagic << ' ' << kVersion << "\n";
    out << "kind " << kind << "\n";
    for (const auto& [key, value] : echo) out << "config " << key << ' ' << value << "\n";
}

// Whitespace token reader over the whole file.
class TokenReader {
public:
    explicit TokenReader(const std::string& path) : in_(path) {
        if (!in_) throw ParseError("cannot open " + path);
    }

    std::string next() {
        std::string token;
        if (!(in_ >> token)) throw ParseError("unexpected end of checkpoint file");
        return token;
    }

    void expect(const std::string& word) {
        const std::string token = next();
        if (token != word) throw ParseError("expected '" + word + "', found '" + token + "'");
    }

    double next_double() {
        const std::string token = next();
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size()) throw ParseError("bad numeric token '" + token + "'");
        return v;
    }

    std::size_t next_size() {
        const std::string token = next();
        char* end = nullptr;
        const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
        if (end != token.c_str() + token.size()) throw ParseError("bad integer token '" + token + "'");
        return static_cast<std::size_t>(v);
    }

    std::string rest_of_line() {
        std::string line;
        std::getline(in_, line);
        if (!line.empty() && line.front() == ' ') line.erase(0, 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    bool peek_is(const std::string& word) {
        const auto pos = in_.tellg();
        std::string token;
        if (!(in_ >> token)) return false;
        in_.seekg(pos);
        return token == word;
    }

private:
    std::ifstream in_;
};

Mlp read_mlp(TokenReader& reader, const std::string& expected_name) {
    reader.expect("mlp");
    reader.expect(expected_name);
    const std::size_t layer_count = reader.next_size();
    Mlp mlp;
    for (std::size_t li = 0; li < layer_count; ++li) {
        reader.expect("layer");
        const std::string act = reader.next();
        DenseLayer layer;
        if (act == "relu") {
            layer.activation = Activation::relu;
        } else if (act == "identity") {
            layer.activation = Activation::identity;
        } else {
            throw ParseError("unknown activation '" + act + "'");
        }
        const std::size_t out = reader.next_size();
        const std::size_t in = reader.next_size();
        layer.weights = Matrix(out, in);
        for (std::size_t r = 0; r < out; ++r) {
            reader.expect("w");
            for (std::size_t c = 0; c < in; ++c) layer.weights(r, c) = reader.next_double();
        }
        reader.expect("b");
        layer.bias.resize(out);
        for (std::size_t o = 0; o < out; ++o) layer.bias[o] = reader.next_double();
        mlp.layers.push_back(std::move(layer));
    }
    mlp.validate();
    return mlp;
}

}  // namespace

void save_trainer_checkpoint(const std::string& path, const std::string& kind, const SpoofModel& model,
                             const RunningMeanState& running_mean,
                             const std::vector<std::pair<std::string, std::string>>& config_echo) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    write_header(out, kind, config_echo);
    write_mlp(out, "extractor", model.extractor);
    write_mlp(out, "classifier", model.classifier);
    out << "running_mean " << (running_mean.initialized ? 1 : 0) << ' ' << format_double_exact(running_mean.alpha)
        << "\n";
    write_span(out, "mu", running_mean.mu_old);
    out << "end\n";
    if (!out) throw ParseError("write to " + path + " failed");
}

void save_baseline_checkpoint(const std::string& path, const std::string& kind, const BaselineModel& model,
                              const std::vector<std::pair<std::string, std::string>>& config_echo) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    write_header(out, kind, config_echo);
    if (const auto* md = std::get_if<MahalanobisModel>(&model)) {
        out << "md " << md->mean.size() << "\n";
        write_span(out, "mean", md->mean);
        for (std::size_t r = 0; r < md->covariance.rows; ++r) write_span(out, "cov", md->covariance.row(r));
    } else if (const auto* gmm = std::get_if<GmmModel>(&model)) {
        out << "gmm " << gmm->components << ' ' << gmm->means.cols << "\n";
        write_span(out, "weights", gmm->weights);
        for (std::size_t k = 0; k < gmm->components; ++k) write_span(out, "mean", gmm->means.row(k));
        for (std::size_t k = 0; k < gmm->components; ++k) write_span(out, "var", gmm->variances.row(k));
    } else if (const auto* svm = std::get_if<LinearOcSvmModel>(&model)) {
        out << "ocsvm " << svm->weight.size() << "\n";
        write_span(out, "w", svm->weight);
        out << "rho " << format_double_exact(svm->rho) << "\n";
        out << "nu " << format_double_exact(svm->nu) << "\n";
    } else {
        const auto& svdd = std::get<LinearSvddModel>(model);
        out << "svdd " << svdd.center.size() << "\n";
        write_span(out, "center", svdd.center);
        out << "radius " << format_double_exact(svdd.radius) << "\n";
        out << "nu " << format_double_exact(svdd.nu) << "\n";
    }
    out << "end\n";
    if (!out) throw ParseError("write to " + path + " failed");
}

Checkpoint load_checkpoint(const std::string& path) {
    TokenReader reader(path);
    reader.expect(kMagic);
    const std::string version = reader.next();
    if (version != kVersion) throw ParseError("unsupported checkpoint version " + version);

    Checkpoint checkpoint;
    reader.expect("kind");
    checkpoint.kind = reader.next();
    while (reader.peek_is("config")) {
        reader.expect("config");
        const std::string key = reader.next();
        checkpoint.config_echo.emplace_back(key, reader.rest_of_line());
    }

    const std::string section = reader.next();
    if (section == "mlp") {
        // Trainer payload; re-read the two networks from the section start.
        reader.expect("extractor");
        const std::size_t layer_count = reader.next_size();
        SpoofModel model;
        for (std::size_t li = 0; li < layer_count; ++li) {
            reader.expect("layer");
            const std::string act = reader.next();
            DenseLayer layer;
            layer.activation = act == "relu" ? Activation::relu : Activation::identity;
            const std::size_t out = reader.next_size();
            const std::size_t in = reader.next_size();
            layer.weights = Matrix(out, in);
            for (std::size_t r = 0; r < out; ++r) {
                reader.expect("w");
                for (std::size_t c = 0; c < in; ++c) layer.weights(r, c) = reader.next_double();
            }
            reader.expect("b");
            layer.bias.resize(out);
            for (std::size_t o = 0; o < out; ++o) layer.bias[o] = reader.next_double();
            model.extractor.layers.push_back(std::move(layer));
        }
        model.classifier = read_mlp(reader, "classifier");
        reader.expect("running_mean");
        RunningMeanState state;
        state.initialized = reader.next_size() == 1;
        state.alpha = reader.next_double();
        reader.expect("mu");
        state.mu_old.clear();
        for (std::size_t j = 0; j < model.feature_dim() && state.initialized; ++j) state.mu_old.push_back(reader.next_double());
        reader.expect("end");
        model.validate();
        checkpoint.model = std::move(model);
        checkpoint.running_mean = std::move(state);
    } else if (section == "md") {
        const std::size_t d = reader.next_size();
        MahalanobisModel md;
        reader.expect("mean");
        md.mean.resize(d);
        for (auto& v : md.mean) v = reader.next_double();
        md.covariance = Matrix(d, d);
        for (std::size_t r = 0; r < d; ++r) {
            reader.expect("cov");
            for (std::size_t c = 0; c < d; ++c) md.covariance(r, c) = reader.next_double();
        }
        reader.expect("end");
        // Refactorize rather than storing the triangle; the covariance was
        // already regularized at fit time.
        MahalanobisModel rebuilt = md;
        {
            Matrix lower;
            // same algorithm as fit; inline to avoid exposing cholesky
            const std::size_t dim = d;
            lower = Matrix(dim, dim);
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j <= i; ++j) {
                    double sum = md.covariance(i, j);
                    for (std::size_t k = 0; k < j; ++k) sum -= lower(i, k) * lower(j, k);
                    if (i == j) {
                        if (sum <= 0.0) throw ParseError("stored covariance is not positive definite");
                        lower(i, i) = std::sqrt(sum);
                    } else {
                        lower(i, j) = sum / lower(j, j);
                    }
                }
            }
            rebuilt.chol_lower = std::move(lower);
        }
        checkpoint.baseline = std::move(rebuilt);
    } else if (section == "gmm") {
        GmmModel gmm;
        gmm.components = reader.next_size();
        const std::size_t d = reader.next_size();
        reader.expect("weights");
        gmm.weights.resize(gmm.components);
        for (auto& w : gmm.weights) w = reader.next_double();
        gmm.means = Matrix(gmm.components, d);
        for (std::size_t k = 0; k < gmm.components; ++k) {
            reader.expect("mean");
            for (std::size_t j = 0; j < d; ++j) gmm.means(k, j) = reader.next_double();
        }
        gmm.variances = Matrix(gmm.components, d);
        for (std::size_t k = 0; k < gmm.components; ++k) {
            reader.expect("var");
            for (std::size_t j = 0; j < d; ++j) gmm.variances(k, j) = reader.next_double();
        }
        reader.expect("end");
        checkpoint.baseline = std::move(gmm);
    } else if (section == "ocsvm") {
        const std::size_t d = reader.next_size();
        LinearOcSvmModel svm;
        reader.expect("w");
        svm.weight.resize(d);
        for (auto& v : svm.weight) v = reader.next_double();
        reader.expect("rho");
        svm.rho = reader.next_double();
        reader.expect("nu");
        svm.nu = reader.next_double();
        reader.expect("end");
        checkpoint.baseline = std::move(svm);
    } else if (section == "svdd") {
        const std::size_t d = reader.next_size();
        LinearSvddModel svdd;
        reader.expect("center");
        svdd.center.resize(d);
        for (auto& v : svdd.center) v = reader.next_double();
        reader.expect("radius");
        svdd.radius = reader.next_double();
        reader.expect("nu");
        svdd.nu = reader.next_double();
        reader.expect("end");
        checkpoint.baseline = std::move(svdd);
    } else {
        throw ParseError("unknown checkpoint section '" + section + "'");
    }
    return checkpoint;
}

}  // namespace spoofbench
