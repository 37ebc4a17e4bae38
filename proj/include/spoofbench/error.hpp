#pragma once

#include <stdexcept>
#include <string>

namespace spoofbench {

// Error taxonomy used across the library. Everything derives from
// std::runtime_error so callers can catch broadly at the CLI boundary.

// Dimension / size mismatch between tensors or model stages.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error("shape error: " + msg) {}
};

// Invalid or inconsistent configuration values.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error("config error: " + msg) {}
};

// A documented precondition was violated (bad labels, empty batch, stale cache, ...).
struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& msg) : std::runtime_error("contract violation: " + msg) {}
};

// Training-time failure (non-finite loss or gradient), carries step context in the message.
struct TrainingError : std::runtime_error {
    explicit TrainingError(const std::string& msg) : std::runtime_error("training error: " + msg) {}
};

// A baseline fit could not complete (too few samples, divergence, singular factorization).
struct FitError : std::runtime_error {
    explicit FitError(const std::string& msg) : std::runtime_error("fit error: " + msg) {}
};

// Malformed input file; message names the offending line where possible.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error("parse error: " + msg) {}
};

// Evaluation cannot proceed (e.g. a score set missing one of the two classes).
struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& msg) : std::runtime_error("evaluation error: " + msg) {}
};

// A protocol split produced an unusable partition.
struct SplitError : std::runtime_error {
    explicit SplitError(const std::string& msg) : std::runtime_error("split error: " + msg) {}
};

}  // namespace spoofbench
