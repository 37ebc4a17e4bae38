#include "spoofbench/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "spoofbench/error.hpp"

namespace spoofbench {

const char* label_name(Label label) { return label == Label::bonafide ? "bonafide" : "attack"; }

Label parse_label(const std::string& text) {
    if (text == "bonafide") return Label::bonafide;
    if (text == "attack") return Label::attack;
    throw ParseError("unknown label '" + text + "' (expected bonafide or attack)");
}

std::size_t Dataset::count(Label label) const {
    std::size_t n = 0;
    for (const auto& s : samples) n += s.label == label ? 1 : 0;
    return n;
}

std::vector<std::string> Dataset::identities() const {
    std::set<std::string> ids;
    for (const auto& s : samples) ids.insert(s.identity);
    return {ids.begin(), ids.end()};
}

Matrix Dataset::feature_matrix() const {
    Matrix m(samples.size(), dim);
    for (std::size_t i = 0; i < samples.size(); ++i)
        std::copy(samples[i].features.begin(), samples[i].features.end(), m.values.begin() + static_cast<std::ptrdiff_t>(i * dim));
    return m;
}

Matrix Dataset::feature_matrix(Label label) const {
    Matrix m(count(label), dim);
    std::size_t r = 0;
    for (const auto& s : samples) {
        if (s.label != label) continue;
        std::copy(s.features.begin(), s.features.end(), m.values.begin() + static_cast<std::ptrdiff_t>(r * dim));
        ++r;
    }
    return m;
}

void SyntheticSpec::validate() const {
    if (num_identities == 0) throw ConfigError("synthetic spec: need at least one identity");
    if (bonafide_per_identity == 0 || attacks_per_identity == 0)
        throw ConfigError("synthetic spec: per-identity counts must be >= 1");
    if (dim == 0) throw ConfigError("synthetic spec: dim must be >= 1");
    if (attack_offset_magnitude <= 0.0) throw ConfigError("synthetic spec: attack offset magnitude must be > 0");
    if (identity_cluster_spread <= 0.0) throw ConfigError("synthetic spec: cluster spread must be > 0");
    if (global_spread <= 0.0) throw ConfigError("synthetic spec: global spread must be > 0");
    if (identity_rank == 0 || identity_rank > dim)
        throw ConfigError("synthetic spec: identity rank must lie in [1, dim]");
}

namespace {

std::vector<double> random_unit_vector(std::size_t dim, Rng& rng) {
    std::vector<double> v(dim);
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (double& x : v) {
            x = rng.normal();
            norm_sq += x * x;
        }
    } while (norm_sq < 1e-24);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
    return v;
}

// Attack offsets must not point along the origin-to-cloud axis, otherwise a
// zero-centered model would see them in its radial score. Project that axis
// out and renormalize.
std::vector<double> attack_direction(std::size_t dim, Rng& rng) {
    while (true) {
        std::vector<double> v = random_unit_vector(dim, rng);
        double along = 0.0;
        for (double x : v) along += x;
        along /= static_cast<double>(dim);
        double norm_sq = 0.0;
        for (double& x : v) {
            x -= along;
            norm_sq += x * x;
        }
        if (norm_sq < 1e-12) continue;
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& x : v) x *= inv;
        return v;
    }
}

// Orthonormal basis of a random `rank`-dimensional subspace (Gram-Schmidt on
// Gaussian draws).
std::vector<std::vector<double>> random_subspace_basis(std::size_t dim, std::size_t rank, Rng& rng) {
    std::vector<std::vector<double>> basis;
    while (basis.size() < rank) {
        std::vector<double> v(dim);
        for (double& x : v) x = rng.normal();
        for (const auto& b : basis) {
            double proj = 0.0;
            for (std::size_t j = 0; j < dim; ++j) proj += v[j] * b[j];
            for (std::size_t j = 0; j < dim; ++j) v[j] -= proj * b[j];
        }
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        if (norm_sq < 1e-12) continue;
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& x : v) x *= inv;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::string identity_name(std::size_t index, std::size_t total) {
    std::size_t width = 1;
    for (std::size_t t = total; t >= 10; t /= 10) ++width;
    std::ostringstream out;
    out << "id";
    std::string digits = std::to_string(index + 1);
    out << std::string(width > digits.size() ? width - digits.size() : 0, '0') << digits;
    return out.str();
}

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec, Rng& rng) {
    spec.validate();
    Dataset out;
    out.dim = spec.dim;
    out.name = "synthetic";

    std::vector<double> shared_offset;
    if (spec.offset_mode == OffsetMode::shared_direction) {
        shared_offset = attack_direction(spec.dim, rng);
        for (double& x : shared_offset) x *= spec.attack_offset_magnitude;
    }

    // Cluster centers scatter inside a low-dimensional identity subspace
    // around a base point well away from the origin: identity variation is
    // structured (low-rank), per-sample noise is full-rank, and a
    // zero-centered pseudo-negative model is never accidentally sitting
    // inside the bonafide cloud.
    const double base = 2.0 * spec.global_spread + 2.0;
    const auto basis = random_subspace_basis(spec.dim, spec.identity_rank, rng);

    for (std::size_t id = 0; id < spec.num_identities; ++id) {
        const std::string name = identity_name(id, spec.num_identities);
        std::vector<double> center(spec.dim, base);
        for (const auto& axis : basis) {
            const double coord = rng.normal(0.0, spec.global_spread);
            for (std::size_t j = 0; j < spec.dim; ++j) center[j] += coord * axis[j];
        }

        std::vector<double> offset = shared_offset;
        if (spec.offset_mode == OffsetMode::per_identity_direction) {
            offset = attack_direction(spec.dim, rng);
            for (double& x : offset) x *= spec.attack_offset_magnitude;
        }

        for (std::size_t s = 0; s < spec.bonafide_per_identity; ++s) {
            LabeledSample sample;
            sample.identity = name;
            sample.label = Label::bonafide;
            sample.features.resize(spec.dim);
            for (std::size_t j = 0; j < spec.dim; ++j)
                sample.features[j] = center[j] + rng.normal(0.0, spec.identity_cluster_spread);
            out.samples.push_back(std::move(sample));
        }
        for (std::size_t s = 0; s < spec.attacks_per_identity; ++s) {
            LabeledSample sample;
            sample.identity = name;
            sample.label = Label::attack;
            sample.features.resize(spec.dim);
            for (std::size_t j = 0; j < spec.dim; ++j)
                sample.features[j] = center[j] + rng.normal(0.0, spec.identity_cluster_spread) + offset[j];
            out.samples.push_back(std::move(sample));
        }
    }
    return out;
}

const char* protocol_name(Protocol protocol) { return protocol == Protocol::p1 ? "p1" : "p2"; }

SplitResult split_protocol(const Dataset& dataset, Protocol protocol, double fraction, Rng& rng) {
    if (dataset.samples.empty()) throw SplitError("cannot split an empty dataset");
    if (fraction <= 0.0 || fraction >= 1.0) throw SplitError("fraction must lie strictly between 0 and 1");

    SplitResult result;
    result.train.dim = result.test.dim = dataset.dim;
    result.train.name = dataset.name + "/train";
    result.test.name = dataset.name + "/test";

    if (protocol == Protocol::p1) {
        std::vector<std::string> ids = dataset.identities();
        if (ids.size() < 2) throw SplitError("protocol p1 needs at least two identities");
        shuffle(ids, rng);
        const std::size_t n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ids.size())));
        if (n_train == 0 || n_train >= ids.size())
            throw SplitError("protocol p1 fraction leaves an empty side");
        std::set<std::string> train_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
        for (const auto& s : dataset.samples) {
            if (train_ids.count(s.identity)) {
                if (s.label == Label::bonafide) result.train.samples.push_back(s);
            } else {
                result.test.samples.push_back(s);
            }
        }
    } else {
        // Group each identity's bonafide sample indices; attacks always test.
        std::map<std::string, std::vector<std::size_t>> bonafide_by_id;
        for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
            if (dataset.samples[i].label == Label::bonafide) bonafide_by_id[dataset.samples[i].identity].push_back(i);
        }
        std::set<std::size_t> train_indices;
        for (auto& [id, indices] : bonafide_by_id) {
            if (indices.size() < 2)
                throw SplitError("protocol p2: identity " + id + " has too few bonafide samples to split");
            shuffle(indices, rng);
            const std::size_t n_train =
                static_cast<std::size_t>(std::llround(fraction * static_cast<double>(indices.size())));
            if (n_train == 0 || n_train >= indices.size())
                throw SplitError("protocol p2 fraction leaves an empty side for identity " + id);
            train_indices.insert(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(n_train));
        }
        for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
            if (train_indices.count(i)) {
                result.train.samples.push_back(dataset.samples[i]);
            } else {
                result.test.samples.push_back(dataset.samples[i]);
            }
        }
    }

    if (result.train.samples.empty() || result.test.samples.empty())
        throw SplitError("split produced an empty side");
    return result;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void save_dataset(const Dataset& dataset, const std::string& path, const std::vector<std::string>& comment_lines) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << "dim=" << dataset.dim << "\n";
    for (const auto& line : comment_lines) out << "# " << line << "\n";
    for (const auto& s : dataset.samples) {
        out << s.identity << ',' << label_name(s.label);
        for (double v : s.features) out << ',' << format_double(v);
        out << "\n";
    }
    if (!out) throw ParseError("write to " + path + " failed");
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);

    Dataset out;
    out.name = path;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            if (line.rfind("dim=", 0) != 0) throw ParseError("line 1: expected header dim=<d>, got '" + line + "'");
            char* end = nullptr;
            const long d = std::strtol(line.c_str() + 4, &end, 10);
            if (d <= 0 || (end && *end != '\0'))
                throw ParseError("line " + std::to_string(line_no) + ": invalid dimension in header");
            out.dim = static_cast<std::size_t>(d);
            have_header = true;
            continue;
        }

        LabeledSample sample;
        std::size_t pos = line.find(',');
        if (pos == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected identity,label,values");
        sample.identity = line.substr(0, pos);
        if (sample.identity.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty identity");
        std::size_t next = line.find(',', pos + 1);
        if (next == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": missing feature values");
        try {
            sample.label = parse_label(line.substr(pos + 1, next - pos - 1));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }

        const char* cursor = line.c_str() + next + 1;
        sample.features.reserve(out.dim);
        while (true) {
            char* end = nullptr;
            const double v = std::strtod(cursor, &end);
            if (end == cursor) throw ParseError("line " + std::to_string(line_no) + ": bad numeric value");
            if (!std::isfinite(v)) throw ParseError("line " + std::to_string(line_no) + ": non-finite value");
            sample.features.push_back(v);
            if (*end == '\0' || *end == '\r') break;
            if (*end != ',') throw ParseError("line " + std::to_string(line_no) + ": unexpected character after value");
            cursor = end + 1;
        }
        if (sample.features.size() != out.dim)
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(out.dim) +
                             " values, got " + std::to_string(sample.features.size()));
        out.samples.push_back(std::move(sample));
    }
    if (!have_header) throw ParseError(path + ": missing dim=<d> header");
    if (out.samples.empty()) throw ParseError(path + ": no samples");
    return out;
}

}  // namespace spoofbench
