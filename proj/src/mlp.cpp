#include "spoofbench/mlp.hpp"

#include <cmath>
#include <string>

#include "spoofbench/error.hpp"

namespace spoofbench {

Matrix dense_forward(const DenseLayer& layer, const Matrix& input) {
    if (input.cols != layer.in_dim())
        throw ShapeError("dense_forward: input has " + std::to_string(input.cols) + " columns, layer expects " +
                         std::to_string(layer.in_dim()));
    const std::size_t k = input.rows, in = layer.in_dim(), out = layer.out_dim();
    Matrix output(k, out);
    for (std::size_t r = 0; r < k; ++r) {
        const double* x = input.values.data() + r * in;
        double* y = output.values.data() + r * out;
        for (std::size_t o = 0; o < out; ++o) {
            const double* w = layer.weights.values.data() + o * in;
            double acc = layer.bias[o];
            for (std::size_t i = 0; i < in; ++i) acc += w[i] * x[i];
            y[o] = acc;
        }
    }
    if (layer.activation == Activation::relu) {
        for (double& v : output.values) v = v > 0.0 ? v : 0.0;
    }
    return output;
}

void Mlp::validate() const {
    if (layers.empty()) throw ConfigError("mlp has no layers");
    for (const auto& layer : layers) {
        if (layer.bias.size() != layer.out_dim()) throw ShapeError("bias length does not match layer output width");
    }
    for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
        if (layers[i].out_dim() != layers[i + 1].in_dim())
            throw ShapeError("layer " + std::to_string(i) + " output width " + std::to_string(layers[i].out_dim()) +
                             " does not match layer " + std::to_string(i + 1) + " input width " +
                             std::to_string(layers[i + 1].in_dim()));
    }
}

Matrix mlp_forward(const Mlp& mlp, const Matrix& input, ForwardCache* cache) {
    if (input.cols != mlp.input_dim())
        throw ShapeError("mlp_forward: input has " + std::to_string(input.cols) + " columns, network expects " +
                         std::to_string(mlp.input_dim()));
    if (cache) {
        cache->input = input;
        cache->pre.clear();
        cache->post.clear();
    }
    Matrix current = input;
    for (const auto& layer : mlp.layers) {
        // Recompute pre-activation separately only when caching; dense_forward
        // already fuses matmul and activation for the common path.
        if (cache) {
            DenseLayer linear = layer;
            linear.activation = Activation::identity;
            Matrix pre = dense_forward(linear, current);
            Matrix post = pre;
            if (layer.activation == Activation::relu) {
                for (double& v : post.values) v = v > 0.0 ? v : 0.0;
            }
            cache->pre.push_back(pre);
            cache->post.push_back(post);
            current = cache->post.back();
        } else {
            current = dense_forward(layer, current);
        }
    }
    return current;
}

MlpGrads zero_grads_like(const Mlp& mlp) {
    MlpGrads grads;
    grads.layers.reserve(mlp.layers.size());
    for (const auto& layer : mlp.layers) {
        grads.layers.push_back({Matrix(layer.out_dim(), layer.in_dim()), std::vector<double>(layer.out_dim(), 0.0)});
    }
    return grads;
}

Matrix mlp_backward(const Mlp& mlp, const ForwardCache& cache, const Matrix& output_grad, MlpGrads& grads) {
    if (cache.pre.size() != mlp.layers.size() || cache.post.size() != mlp.layers.size())
        throw ContractError("mlp_backward: cache does not match this network (layer count)");
    if (grads.layers.size() != mlp.layers.size())
        throw ContractError("mlp_backward: gradient buffer does not match this network");
    if (!output_grad.same_shape(cache.post.back()))
        throw ContractError("mlp_backward: output_grad shape does not match cached forward output");
    for (std::size_t li = 0; li < mlp.layers.size(); ++li) {
        if (cache.pre[li].rows != cache.input.rows || cache.pre[li].cols != mlp.layers[li].out_dim())
            throw ContractError("mlp_backward: cache was produced by a different forward call");
    }

    Matrix delta = output_grad;  // gradient w.r.t. the current layer's post-activation
    for (std::size_t li = mlp.layers.size(); li-- > 0;) {
        const DenseLayer& layer = mlp.layers[li];
        const Matrix& pre = cache.pre[li];
        const Matrix& below = li == 0 ? cache.input : cache.post[li - 1];
        const std::size_t k = delta.rows, in = layer.in_dim(), out = layer.out_dim();

        if (layer.activation == Activation::relu) {
            for (std::size_t i = 0; i < delta.values.size(); ++i) {
                if (pre.values[i] <= 0.0) delta.values[i] = 0.0;
            }
        }

        LayerGrads& lg = grads.layers[li];
        for (std::size_t r = 0; r < k; ++r) {
            const double* d = delta.values.data() + r * out;
            const double* x = below.values.data() + r * in;
            for (std::size_t o = 0; o < out; ++o) {
                double* dw = lg.weights.values.data() + o * in;
                const double dv = d[o];
                for (std::size_t i = 0; i < in; ++i) dw[i] += dv * x[i];
                lg.bias[o] += dv;
            }
        }

        Matrix next(k, in);
        for (std::size_t r = 0; r < k; ++r) {
            const double* d = delta.values.data() + r * out;
            double* nx = next.values.data() + r * in;
            for (std::size_t o = 0; o < out; ++o) {
                const double* w = layer.weights.values.data() + o * in;
                const double dv = d[o];
                for (std::size_t i = 0; i < in; ++i) nx[i] += dv * w[i];
            }
        }
        delta = std::move(next);
    }
    return delta;
}

void init_layer(DenseLayer& layer, Rng& rng) {
    const double fan_in = static_cast<double>(layer.in_dim());
    const double fan_out = static_cast<double>(layer.out_dim());
    const double limit = layer.activation == Activation::relu ? std::sqrt(6.0 / fan_in)
                                                              : std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : layer.weights.values) w = (2.0 * rng.uniform01() - 1.0) * limit;
    for (double& b : layer.bias) b = 0.0;
}

Mlp make_mlp(std::size_t input_dim, std::span<const std::size_t> widths, Activation final_act, Rng& rng) {
    if (widths.empty()) throw ConfigError("make_mlp: empty width list");
    Mlp mlp;
    std::size_t in = input_dim;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        DenseLayer layer;
        layer.weights = Matrix(widths[i], in);
        layer.bias.assign(widths[i], 0.0);
        layer.activation = (i + 1 == widths.size()) ? final_act : Activation::relu;
        init_layer(layer, rng);
        mlp.layers.push_back(std::move(layer));
        in = widths[i];
    }
    mlp.validate();
    return mlp;
}

}  // namespace spoofbench
