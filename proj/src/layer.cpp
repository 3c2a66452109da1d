#include "auxnet/layer.hpp"

#include <cmath>
#include <string>

#include "auxnet/errors.hpp"

namespace auxnet {
namespace {

void glorot_fill(Matrix& m, std::mt19937_64& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(m.rows + m.cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& w : m.data) w = dist(rng);
}

void check_label(std::size_t label, std::size_t num_classes) {
    if (label >= num_classes) {
        throw ContractError("label " + std::to_string(label) + " out of range for " +
                            std::to_string(num_classes) + " classes");
    }
}

Vector prob_residual(const LayerActivation& act, std::size_t label) {
    check_label(label, act.class_probs.size());
    Vector r = act.class_probs;
    r[label] -= 1.0;
    return r;
}

}  // namespace

LayerParams make_layer(std::size_t in_dim, std::size_t out_dim, std::size_t num_classes,
                       double alpha, std::mt19937_64& rng, std::size_t num_slots) {
    if (num_slots == 0 || in_dim % num_slots != 0) {
        throw ContractError("make_layer: in_dim " + std::to_string(in_dim) +
                            " not divisible into " + std::to_string(num_slots) + " slots");
    }
    LayerParams p;
    p.W = Matrix(out_dim, in_dim);
    p.c = Vector(out_dim, 0.0);
    p.theta = Matrix(num_classes, out_dim);
    p.alpha = alpha;
    p.num_slots = num_slots;
    glorot_fill(p.W, rng);
    glorot_fill(p.theta, rng);
    p.adam_W.assign(num_slots, AdamState(out_dim * (in_dim / num_slots)));
    p.adam_c = AdamState(out_dim);
    p.adam_theta = AdamState(num_classes * out_dim);
    return p;
}

LayerActivation layer_forward(const LayerParams& params, Vector input, SlotMask slots) {
    if (input.size() != params.in_dim()) {
        throw ContractError("layer_forward: input length " + std::to_string(input.size()) +
                            " != in_dim " + std::to_string(params.in_dim()));
    }
    if (!slots.empty() && slots.size() != params.num_slots) {
        throw ContractError("layer_forward: slot mask size mismatch");
    }
    LayerActivation act;
    act.input = std::move(input);
    act.slots = std::move(slots);

    const std::size_t width = params.slot_width();
    act.preact = params.c;
    for (std::size_t r = 0; r < params.out_dim(); ++r) {
        const auto row = params.W.row(r);
        double acc = 0.0;
        for (std::size_t s = 0; s < params.num_slots; ++s) {
            if (!act.slot_active(s)) continue;
            for (std::size_t k = s * width; k < (s + 1) * width; ++k) acc += row[k] * act.input[k];
        }
        act.preact[r] += acc;
    }
    act.hidden = relu(act.preact);
    act.class_probs = softmax(matvec(params.theta, act.hidden));
    return act;
}

Matrix classifier_grad_theta(const LayerActivation& act, std::size_t label) {
    return outer(prob_residual(act, label), act.hidden);
}

Vector classifier_grad_hidden(const LayerActivation& act, const LayerParams& params,
                              std::size_t label) {
    return matvec_transposed(params.theta, prob_residual(act, label));
}

LayerGradient backprop_through_layer(const LayerActivation& act, const LayerParams& params,
                                     std::span<const double> upstream) {
    if (upstream.size() != params.out_dim()) {
        throw ContractError("backprop_through_layer: upstream length " +
                            std::to_string(upstream.size()) + " != out_dim " +
                            std::to_string(params.out_dim()));
    }
    Vector delta(upstream.begin(), upstream.end());
    for (std::size_t i = 0; i < delta.size(); ++i) {
        if (act.preact[i] <= 0.0) delta[i] = 0.0;
    }

    LayerGradient g;
    g.grad_c = delta;
    g.grad_W = Matrix(params.out_dim(), params.in_dim());
    g.downstream = Vector(params.in_dim(), 0.0);
    const std::size_t width = params.slot_width();
    for (std::size_t s = 0; s < params.num_slots; ++s) {
        if (!act.slot_active(s)) continue;
        const std::size_t lo = s * width;
        const std::size_t hi = lo + width;
        for (std::size_t r = 0; r < params.out_dim(); ++r) {
            if (delta[r] == 0.0) continue;
            const auto wrow = params.W.row(r);
            auto grow = g.grad_W.row(r);
            for (std::size_t k = lo; k < hi; ++k) {
                grow[k] = delta[r] * act.input[k];
                g.downstream[k] += wrow[k] * delta[r];
            }
        }
    }
    return g;
}

void apply_layer_update(LayerParams& params, const LayerGradient& grad, const Matrix& grad_theta,
                        const SlotMask& slots, const OptimizerConfig& opt) {
    if (params.num_slots == 1) {
        apply_gradient(params.W.data, grad.grad_W.data, params.adam_W[0], opt);
    } else {
        const std::size_t width = params.slot_width();
        Vector block(params.out_dim() * width);
        Vector block_grad(block.size());
        for (std::size_t s = 0; s < params.num_slots; ++s) {
            if (!slots.empty() && !slots[s]) continue;
            for (std::size_t r = 0; r < params.out_dim(); ++r) {
                for (std::size_t k = 0; k < width; ++k) {
                    block[r * width + k] = params.W(r, s * width + k);
                    block_grad[r * width + k] = grad.grad_W(r, s * width + k);
                }
            }
            apply_gradient(block, block_grad, params.adam_W[s], opt);
            for (std::size_t r = 0; r < params.out_dim(); ++r) {
                for (std::size_t k = 0; k < width; ++k) params.W(r, s * width + k) = block[r * width + k];
            }
        }
    }
    apply_gradient(params.c, grad.grad_c, params.adam_c, opt);
    apply_gradient(params.theta.data, grad_theta.data, params.adam_theta, opt);
}

}  // namespace auxnet
