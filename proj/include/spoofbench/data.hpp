#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spoofbench/matrix.hpp"
#include "spoofbench/rng.hpp"

namespace spoofbench {

enum class Label { bonafide, attack };

const char* label_name(Label label);
Label parse_label(const std::string& text);  // ParseError on anything else

struct LabeledSample {
    std::vector<double> features;
    std::string identity;
    Label label = Label::bonafide;
};

struct Dataset {
    std::vector<LabeledSample> samples;
    std::size_t dim = 0;
    std::string name;

    std::size_t count(Label label) const;
    // Sorted unique identity list (deterministic regardless of sample order).
    std::vector<std::string> identities() const;
    // Feature rows of every sample, in dataset order.
    Matrix feature_matrix() const;
    // Feature rows of samples with the given label, in dataset order.
    Matrix feature_matrix(Label label) const;
};

enum class OffsetMode { shared_direction, per_identity_direction };

// Synthetic benchmark generator: per identity, a Gaussian bonafide cluster and
// attack samples that are bonafide-like draws shifted by a fixed-magnitude
// offset. Defaults are the proximal-attack benchmark: attacks sit close to
// their identity's cluster rather than toward the origin.
struct SyntheticSpec {
    std::size_t num_identities = 12;
    std::size_t bonafide_per_identity = 40;
    std::size_t attacks_per_identity = 40;
    std::size_t dim = 32;
    double identity_cluster_spread = 1.0;   // per-dimension sigma of a cluster
    double attack_offset_magnitude = 4.0;   // Euclidean length of the offset
    OffsetMode offset_mode = OffsetMode::shared_direction;
    double global_spread = 16.0;            // per-axis sigma of cluster centers inside the identity subspace
    std::size_t identity_rank = 3;          // dimension of the subspace the centers vary in
    std::uint64_t seed = 1;

    void validate() const;  // ConfigError on bad values
};

Dataset generate_synthetic(const SyntheticSpec& spec, Rng& rng);

enum class Protocol { p1, p2 };

const char* protocol_name(Protocol protocol);

struct SplitResult {
    Dataset train;  // bonafide-only by construction
    Dataset test;
};

// Protocol p1 splits at the identity level; train and test identities are
// disjoint and the test side keeps all samples of held-out identities.
// Protocol p2 splits within each identity; train takes `fraction` of each
// identity's bonafide samples, test gets the remaining bonafide plus every
// attack of the same identities.
SplitResult split_protocol(const Dataset& dataset, Protocol protocol, double fraction, Rng& rng);

// Text format: optional '#' comment lines, a `dim=<d>` header, then one sample
// per line as `identity,label,v1,...,vd`. Values round-trip exactly.
Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& dataset, const std::string& path,
                  const std::vector<std::string>& comment_lines = {});

// Serializes one double with enough digits to round-trip exactly.
std::string format_double(double v);

}  // namespace spoofbench
