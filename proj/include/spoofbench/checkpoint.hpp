#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spoofbench/baselines.hpp"
#include "spoofbench/sampler.hpp"
#include "spoofbench/trainer.hpp"

namespace spoofbench {

// Versioned textual model container. One file holds a model-kind tag, the
// resolved configuration echo, and either a trainer model (both networks plus
// the final running-mean state) or a fitted baseline. Parameters are written
// as hex floats, so a save/load round trip reproduces scores bit for bit.
struct Checkpoint {
    std::string kind;  // proposed | occnn | md | gmm | ocsvm | svdd | ...
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::optional<SpoofModel> model;
    std::optional<RunningMeanState> running_mean;
    std::optional<BaselineModel> baseline;
};

void save_trainer_checkpoint(const std::string& path, const std::string& kind, const SpoofModel& model,
                             const RunningMeanState& running_mean,
                             const std::vector<std::pair<std::string, std::string>>& config_echo);

void save_baseline_checkpoint(const std::string& path, const std::string& kind, const BaselineModel& model,
                              const std::vector<std::pair<std::string, std::string>>& config_echo);

Checkpoint load_checkpoint(const std::string& path);

// Exact-round-trip serialization of one double ("%a" / strtod).
std::string format_double_exact(double v);

}  // namespace spoofbench
