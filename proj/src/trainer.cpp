#include "spoofbench/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "spoofbench/error.hpp"

namespace spoofbench {

void TrainerConfig::validate() const {
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0,1]");
    if (sigma <= 0.0) throw ConfigError("sigma must be > 0");
    if (lambda1 < 0.0 || lambda2 < 0.0) throw ConfigError("loss weights must be >= 0");
    if (learning_rate <= 0.0) throw ConfigError("learning rate must be > 0");
    if (epochs == 0) throw ConfigError("epochs must be >= 1");
    if (input_dim == 0) throw ConfigError("input_dim must be >= 1");
    if (extractor_widths.empty()) throw ConfigError("extractor needs at least one layer");
    if (classifier_widths.empty()) throw ConfigError("classifier needs at least one layer");
    if (classifier_widths.back() != 2) throw ConfigError("classifier must end in 2 output neurons");
    const std::size_t min_batch = pc_mode == PcMode::on ? 2 : 1;
    if (batch_k < min_batch)
        throw ConfigError("batch_k must be >= " + std::to_string(min_batch) + " for this pc mode");
}

void SpoofModel::validate() const {
    extractor.validate();
    classifier.validate();
    if (extractor.output_dim() != classifier.input_dim())
        throw ShapeError("extractor output dim " + std::to_string(extractor.output_dim()) +
                         " does not match classifier input dim " + std::to_string(classifier.input_dim()));
    if (classifier.output_dim() != 2) throw ShapeError("classifier must produce 2 logits");
}

SpoofModel init_model(const TrainerConfig& cfg, Rng& rng) {
    cfg.validate();
    SpoofModel model;
    model.extractor = make_mlp(cfg.input_dim, cfg.extractor_widths, Activation::relu, rng);
    model.classifier = make_mlp(cfg.feature_dim(), cfg.classifier_widths, Activation::identity, rng);
    model.validate();
    return model;
}

std::vector<std::size_t> parameter_block_sizes(const SpoofModel& model) {
    std::vector<std::size_t> sizes;
    for (const Mlp* mlp : {&model.extractor, &model.classifier}) {
        for (const auto& layer : mlp->layers) {
            sizes.push_back(layer.weights.values.size());
            sizes.push_back(layer.bias.size());
        }
    }
    return sizes;
}

std::vector<std::span<double>> parameter_blocks(SpoofModel& model) {
    std::vector<std::span<double>> blocks;
    for (Mlp* mlp : {&model.extractor, &model.classifier}) {
        for (auto& layer : mlp->layers) {
            blocks.emplace_back(layer.weights.values);
            blocks.emplace_back(layer.bias);
        }
    }
    return blocks;
}

std::vector<std::span<const double>> gradient_blocks(const MlpGrads& extractor_grads, const MlpGrads& classifier_grads) {
    std::vector<std::span<const double>> blocks;
    for (const MlpGrads* grads : {&extractor_grads, &classifier_grads}) {
        for (const auto& layer : grads->layers) {
            blocks.emplace_back(layer.weights.values);
            blocks.emplace_back(layer.bias);
        }
    }
    return blocks;
}

TrainerState make_trainer_state(const SpoofModel& model, const TrainerConfig& cfg) {
    AdamConfig adam;
    adam.learning_rate = cfg.learning_rate;
    const std::vector<std::size_t> sizes = parameter_block_sizes(model);
    TrainerState state{RunningMeanState{{}, cfg.alpha, false}, AdamOptimizer(adam, sizes)};
    return state;
}

namespace {

// Shared by train_step and the public objective entry point; features/vcache
// come from a forward pass of the extractor over the bonafide batch.
LossBreakdown objective_impl(const SpoofModel& model, const Matrix& features, const ForwardCache& vcache,
                             const Matrix& pseudo_batch, const TrainerConfig& cfg, MlpGrads& extractor_grads,
                             MlpGrads& classifier_grads) {
    if (pseudo_batch.cols != model.feature_dim())
        throw ShapeError("pseudo-negative batch dimension does not match the feature space");

    const std::size_t k = features.rows;
    const Matrix joint = vstack(features, pseudo_batch);
    std::vector<int> labels(joint.rows, 1);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(k), 0);

    ForwardCache gcache;
    const Matrix logits = mlp_forward(model.classifier, joint, &gcache);
    CrossEntropyResult ce = softmax_cross_entropy(logits, labels);

    PairwiseConfusionResult pc;
    if (cfg.pc_mode == PcMode::on) {
        pc = pairwise_confusion(features, cfg.pc_normalization);
    } else {
        pc.feature_grad = Matrix(features.rows, features.cols);
    }

    const LossBreakdown breakdown = combined_loss(ce.loss, pc.loss, cfg.lambda1, cfg.lambda2);

    // Scale the cross-entropy gradient by lambda2 up front so the classifier
    // parameter gradients come out weighted.
    for (double& g : ce.logit_grad.values) g *= cfg.lambda2;
    extractor_grads = zero_grads_like(model.extractor);
    classifier_grads = zero_grads_like(model.classifier);
    const Matrix joint_input_grad = mlp_backward(model.classifier, gcache, ce.logit_grad, classifier_grads);

    // Only the bonafide rows traversed the extractor; the pseudo-negative
    // rows' input gradient has nowhere to flow.
    Matrix feature_grad(k, features.cols);
    for (std::size_t i = 0; i < feature_grad.values.size(); ++i) {
        feature_grad.values[i] = joint_input_grad.values[i] + cfg.lambda1 * pc.feature_grad.values[i];
    }
    mlp_backward(model.extractor, vcache, feature_grad, extractor_grads);
    return breakdown;
}

Matrix rows_subset(const Dataset& set, std::span<const std::size_t> indices) {
    Matrix batch(indices.size(), set.dim);
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto& f = set.samples[indices[r]].features;
        std::copy(f.begin(), f.end(), batch.values.begin() + static_cast<std::ptrdiff_t>(r * set.dim));
    }
    return batch;
}

}  // namespace

LossBreakdown step_objective_with_grads(const SpoofModel& model, const Matrix& bonafide_batch, const Matrix& pseudo_batch,
                                        const TrainerConfig& cfg, MlpGrads& extractor_grads, MlpGrads& classifier_grads) {
    ForwardCache vcache;
    const Matrix features = mlp_forward(model.extractor, bonafide_batch, &vcache);
    return objective_impl(model, features, vcache, pseudo_batch, cfg, extractor_grads, classifier_grads);
}

LossBreakdown train_step(SpoofModel& model, const Matrix& bonafide_batch, TrainerState& state, const TrainerConfig& cfg,
                         Rng& rng) {
    if (bonafide_batch.rows == 0) throw ContractError("train_step with an empty batch");
    if (bonafide_batch.cols != model.input_dim())
        throw ShapeError("batch has " + std::to_string(bonafide_batch.cols) + " columns, model expects " +
                         std::to_string(model.input_dim()));

    ForwardCache vcache;
    const Matrix features = mlp_forward(model.extractor, bonafide_batch, &vcache);

    // Center update happens before sampling within the same step.
    std::vector<double> mu_star;
    if (cfg.mean_mode == MeanMode::adaptive) {
        state.running_mean.alpha = cfg.alpha;
        mu_star = update_running_mean(state.running_mean, features);
    } else {
        mu_star.assign(model.feature_dim(), 0.0);
    }

    SamplerConfig sampler_cfg{cfg.sigma, model.feature_dim(), features.rows};
    const Matrix pseudo = sample_pseudo_negatives(mu_star, sampler_cfg, rng);

    MlpGrads extractor_grads, classifier_grads;
    const LossBreakdown breakdown =
        objective_impl(model, features, vcache, pseudo, cfg, extractor_grads, classifier_grads);
    if (!std::isfinite(breakdown.total)) throw TrainingError("non-finite total loss");

    const auto params = parameter_blocks(model);
    const auto grads = gradient_blocks(extractor_grads, classifier_grads);
    state.optimizer.step(params, grads);
    return breakdown;
}

TrainingLog train(SpoofModel& model, TrainerState& state, const Dataset& train_set, const TrainerConfig& cfg) {
    cfg.validate();
    if (train_set.samples.empty()) throw ConfigError("empty training set");
    if (train_set.count(Label::attack) != 0)
        throw ContractError("training set contains attack-labeled samples; training is one-class");
    if (train_set.dim != model.input_dim())
        throw ShapeError("training set dim " + std::to_string(train_set.dim) + " does not match model input " +
                         std::to_string(model.input_dim()));

    Rng root(cfg.seed);
    Rng shuffle_rng = root.fork(0x5u);
    Rng sampler_rng = root.fork(0x51u);

    std::vector<std::size_t> order(train_set.samples.size());
    std::iota(order.begin(), order.end(), 0);

    TrainingLog log;
    log.epochs.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto started = std::chrono::steady_clock::now();
        shuffle(order, shuffle_rng);

        EpochLog entry;
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_k) {
            const std::size_t end = std::min(begin + cfg.batch_k, order.size());
            if (end - begin < 2) break;  // drop final partial batch below 2 rows
            const Matrix batch = rows_subset(train_set, std::span(order).subspan(begin, end - begin));
            LossBreakdown step;
            try {
                step = train_step(model, batch, state, cfg, sampler_rng);
            } catch (const TrainingError& e) {
                throw TrainingError("epoch " + std::to_string(epoch + 1) + ", step " +
                                    std::to_string(entry.steps + 1) + ": " + e.what());
            }
            entry.loss.ce += step.ce;
            entry.loss.pc += step.pc;
            entry.loss.total += step.total;
            entry.loss.lambda1 = step.lambda1;
            entry.loss.lambda2 = step.lambda2;
            ++entry.steps;
        }
        if (entry.steps == 0) throw ConfigError("batch_k larger than the training set; no full step possible");
        const double inv = 1.0 / static_cast<double>(entry.steps);
        entry.loss.ce *= inv;
        entry.loss.pc *= inv;
        entry.loss.total *= inv;
        entry.mu_star = cfg.mean_mode == MeanMode::adaptive ? state.running_mean.mu_old
                                                            : std::vector<double>(model.feature_dim(), 0.0);
        entry.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        log.epochs.push_back(std::move(entry));
    }
    return log;
}

std::vector<double> score(const SpoofModel& model, const Matrix& samples) {
    const Matrix logits = mlp_forward(model.classifier, mlp_forward(model.extractor, samples));
    std::vector<double> scores(samples.rows);
    for (std::size_t r = 0; r < samples.rows; ++r) {
        // class-0 probability, computed without overflow on either side
        const double t = logits(r, 1) - logits(r, 0);
        if (t >= 0.0) {
            const double e = std::exp(-t);
            scores[r] = e / (1.0 + e);
        } else {
            scores[r] = 1.0 / (1.0 + std::exp(t));
        }
    }
    return scores;
}

Matrix embed(const SpoofModel& model, const Matrix& samples) { return mlp_forward(model.extractor, samples); }

void write_training_log(const TrainingLog& log, std::ostream& out, const std::vector<std::string>& comment_lines) {
    for (const auto& line : comment_lines) out << "# " << line << "\n";
    out << "epoch,steps,ce,pc,total,mu\n";
    for (std::size_t e = 0; e < log.epochs.size(); ++e) {
        const EpochLog& entry = log.epochs[e];
        out << e + 1 << ',' << entry.steps << ',' << format_double(entry.loss.ce) << ',' << format_double(entry.loss.pc)
            << ',' << format_double(entry.loss.total) << ',';
        for (std::size_t j = 0; j < entry.mu_star.size(); ++j) {
            if (j) out << ' ';
            out << format_double(entry.mu_star[j]);
        }
        out << "\n";
    }
}

}  // namespace spoofbench
