#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spoofbench/adam.hpp"
#include "spoofbench/data.hpp"
#include "spoofbench/losses.hpp"
#include "spoofbench/mlp.hpp"
#include "spoofbench/sampler.hpp"

namespace spoofbench {

enum class MeanMode { adaptive, origin };
enum class PcMode { on, off };

// Training configuration. The architecture defaults are desk scale; the
// large-scale preset (4096-d inputs, 8192/1000/500 classifier) is available
// through the CLI but is not the default because no pretrained extractor
// ships with this toolkit.
struct TrainerConfig {
    double alpha = 0.8;           // running-mean blend
    double sigma = 1.0;           // pseudo-negative standard deviation
    double lambda1 = 3.0;         // pairwise-confusion weight
    double lambda2 = 1.0;         // cross-entropy weight
    double learning_rate = 3e-4;
    std::size_t epochs = 160;
    std::size_t batch_k = 40;
    std::size_t input_dim = 32;
    std::vector<std::size_t> extractor_widths = {64, 32};
    std::vector<std::size_t> classifier_widths = {32, 16, 2};
    MeanMode mean_mode = MeanMode::adaptive;
    PcMode pc_mode = PcMode::on;
    PcNormalization pc_normalization = PcNormalization::pair_mean;
    std::uint64_t seed = 1;

    std::size_t feature_dim() const { return extractor_widths.back(); }
    void validate() const;  // ConfigError on inconsistency
};

// Extractor V maps input_dim -> d; classifier G maps d -> 2 logits.
struct SpoofModel {
    Mlp extractor;
    Mlp classifier;

    std::size_t input_dim() const { return extractor.input_dim(); }
    std::size_t feature_dim() const { return extractor.output_dim(); }
    void validate() const;
};

SpoofModel init_model(const TrainerConfig& cfg, Rng& rng);

// Mutable per-run state: the pseudo-negative center and optimizer moments.
struct TrainerState {
    RunningMeanState running_mean;
    AdamOptimizer optimizer;
};

TrainerState make_trainer_state(const SpoofModel& model, const TrainerConfig& cfg);

// Parameter blocks in a fixed order (extractor then classifier, weights then
// bias per layer); the same order is used for optimizer moments and
// checkpoints.
std::vector<std::size_t> parameter_block_sizes(const SpoofModel& model);
std::vector<std::span<double>> parameter_blocks(SpoofModel& model);
std::vector<std::span<const double>> gradient_blocks(const MlpGrads& extractor_grads, const MlpGrads& classifier_grads);

// Loss and parameter gradients of one training objective evaluation for a
// fixed bonafide batch and a fixed (already sampled) pseudo-negative batch:
// cross-entropy over the concatenated 2k rows plus the pairwise-confusion
// term on the bonafide features. Gradient buffers are overwritten. The
// pseudo-negative rows are constants: they enter the classifier only, and no
// gradient flows back into the sampler or the running mean.
LossBreakdown step_objective_with_grads(const SpoofModel& model, const Matrix& bonafide_batch, const Matrix& pseudo_batch,
                                        const TrainerConfig& cfg, MlpGrads& extractor_grads, MlpGrads& classifier_grads);

// One full training step: extractor forward, running-mean update (or the
// origin center), pseudo-negative sampling, combined loss, backprop through
// classifier and extractor, one optimizer step.
LossBreakdown train_step(SpoofModel& model, const Matrix& bonafide_batch, TrainerState& state, const TrainerConfig& cfg,
                         Rng& rng);

struct EpochLog {
    LossBreakdown loss;           // mean over the epoch's steps
    std::vector<double> mu_star;  // pseudo-negative center after the epoch
    std::size_t steps = 0;
    double wall_ms = 0.0;
};

struct TrainingLog {
    std::vector<EpochLog> epochs;
};

// Full run: epochs x (reshuffled batches -> train_step). The final partial
// batch of an epoch is dropped when it has fewer than 2 rows. Training data
// must be bonafide-only.
TrainingLog train(SpoofModel& model, TrainerState& state, const Dataset& train_set, const TrainerConfig& cfg);

// Bonafideness score per row: softmax probability of class 0 from G(V(x)).
std::vector<double> score(const SpoofModel& model, const Matrix& samples);

// Extractor features V(x), one row per sample.
Matrix embed(const SpoofModel& model, const Matrix& samples);

// Machine-readable log: config echo comments, then one line per epoch with
// losses and the running-mean trace. Wall time stays out of this file so
// identical runs produce identical bytes.
void write_training_log(const TrainingLog& log, std::ostream& out, const std::vector<std::string>& comment_lines);

}  // namespace spoofbench
