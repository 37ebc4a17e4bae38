#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spoofbench/matrix.hpp"
#include "spoofbench/rng.hpp"

namespace spoofbench {

enum class Activation { relu, identity };

struct DenseLayer {
    Matrix weights;             // out x in
    std::vector<double> bias;   // out
    Activation activation = Activation::relu;

    std::size_t in_dim() const { return weights.cols; }
    std::size_t out_dim() const { return weights.rows; }
};

// output row i = activation(weights * input_i + bias)
Matrix dense_forward(const DenseLayer& layer, const Matrix& input);

struct Mlp {
    std::vector<DenseLayer> layers;

    std::size_t input_dim() const { return layers.front().in_dim(); }
    std::size_t output_dim() const { return layers.back().out_dim(); }

    // Checks adjacent layer dimension compatibility.
    void validate() const;
};

// Activations recorded during a forward pass, sufficient for backward.
struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre;   // pre-activation per layer
    std::vector<Matrix> post;  // post-activation per layer
};

Matrix mlp_forward(const Mlp& mlp, const Matrix& input, ForwardCache* cache = nullptr);

struct LayerGrads {
    Matrix weights;
    std::vector<double> bias;
};

struct MlpGrads {
    std::vector<LayerGrads> layers;
};

MlpGrads zero_grads_like(const Mlp& mlp);

// Backpropagates output_grad (the loss gradient w.r.t. the forward output)
// through the cached pass. Returns the gradient w.r.t. the input, which lets a
// downstream network's gradient chain into an upstream one. Parameter
// gradients are accumulated into `grads` (callers zero it first).
Matrix mlp_backward(const Mlp& mlp, const ForwardCache& cache, const Matrix& output_grad, MlpGrads& grads);

// He-uniform for relu layers, Xavier-uniform for identity layers.
void init_layer(DenseLayer& layer, Rng& rng);

// widths = successive output widths; activations default to relu with the
// final layer given `final_act`.
Mlp make_mlp(std::size_t input_dim, std::span<const std::size_t> widths, Activation final_act, Rng& rng);

}  // namespace spoofbench
