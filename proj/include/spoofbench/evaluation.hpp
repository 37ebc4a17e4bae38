#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spoofbench/data.hpp"

namespace spoofbench {

struct ScoredSample {
    double score = 0.0;  // bonafideness, higher = more bonafide
    std::string identity;
    Label label = Label::bonafide;
};

struct Rates {
    double apcer = 0.0;  // percent of attacks accepted as bonafide
    double bpcer = 0.0;  // percent of bonafide rejected as attacks
};

// Decision rule: predict attack iff score < tau. Requires at least one sample
// of each class.
Rates confusion_rates(std::span<const ScoredSample> scored, double tau);

struct ThresholdResult {
    double tau = 0.0;
    double acer = 0.0;
    Rates rates;
};

// Exhaustive sweep over candidate thresholds: the midpoints of adjacent
// sorted unique scores plus -inf and +inf. Ties resolve to the smallest tau.
ThresholdResult best_acer(std::span<const ScoredSample> scored);

struct IdentityResult {
    std::string identity;
    double tau = 0.0;
    double apcer = 0.0;
    double bpcer = 0.0;
    double acer = 0.0;
    std::size_t bonafide_count = 0;
    std::size_t attack_count = 0;
};

struct EvalReport {
    std::vector<IdentityResult> identities;  // sorted by identity
    std::vector<std::string> skipped;        // identities missing one class
    double mean_acer = 0.0;                  // mean over identities of each identity's best ACER
    double mean_apcer = 0.0;                 // mean APCER at each identity's own tau
    double mean_bpcer = 0.0;
};

// Groups by identity, finds each identity's best threshold, and averages the
// per-identity rates. Identities lacking either class are excluded and listed
// as warnings rather than failing the whole evaluation.
EvalReport evaluate_per_identity(std::span<const ScoredSample> scored);

std::string format_report_table(const EvalReport& report);
void write_report_file(const EvalReport& report, std::ostream& out, const std::vector<std::string>& comment_lines);

// Score export, one `identity,label,score` line per sample.
void write_scores(std::span<const ScoredSample> scored, std::ostream& out, const std::vector<std::string>& comment_lines);
std::vector<ScoredSample> load_scores(const std::string& path);

}  // namespace spoofbench
