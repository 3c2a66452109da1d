#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "auxnet/numeric.hpp"

namespace auxnet {

// One hidden layer, its softmax classifier head and its hedge weight.
//
// The input of W is split into `num_slots` equal column blocks. Ordinary
// layers have a single slot; the first end layer has one slot for the middle
// layer plus one per auxiliary layer, so an unavailable auxiliary feature can
// be masked out column-block-wise. Each block carries its own Adam state so a
// masked block's moments and step counter stay put.
struct LayerParams {
    Matrix W;       // out_dim x in_dim
    Vector c;       // out_dim
    Matrix theta;   // num_classes x out_dim
    double alpha = 0.0;
    std::size_t num_slots = 1;
    std::vector<AdamState> adam_W;  // one per slot, each out_dim x slot_width
    AdamState adam_c;
    AdamState adam_theta;

    std::size_t in_dim() const { return W.cols; }
    std::size_t out_dim() const { return W.rows; }
    std::size_t num_classes() const { return theta.rows; }
    std::size_t slot_width() const { return W.cols / num_slots; }

    bool operator==(const LayerParams&) const = default;
};

// Glorot-uniform W and theta, zero c, fresh optimizer state.
LayerParams make_layer(std::size_t in_dim, std::size_t out_dim, std::size_t num_classes,
                       double alpha, std::mt19937_64& rng, std::size_t num_slots = 1);

// Which input slots take part in the forward product. Empty means all.
using SlotMask = std::vector<bool>;

struct LayerActivation {
    Vector input;
    Vector preact;       // W input + c (masked slots skipped)
    Vector hidden;       // relu(preact)
    Vector class_probs;  // softmax(theta hidden)
    SlotMask slots;

    bool slot_active(std::size_t s) const { return slots.empty() || slots[s]; }
};

LayerActivation layer_forward(const LayerParams& params, Vector input, SlotMask slots = {});

// d CE(f, label) / d theta = (probs - onehot(label)) (outer) hidden
Matrix classifier_grad_theta(const LayerActivation& act, std::size_t label);

// d CE(f, label) / d hidden = theta^T (probs - onehot(label))
Vector classifier_grad_hidden(const LayerActivation& act, const LayerParams& params,
                              std::size_t label);

struct LayerGradient {
    Matrix grad_W;
    Vector grad_c;
    Vector downstream;  // d/d input
};

// Pushes a gradient w.r.t. the layer's hidden output back through the relu and
// the affine map. Masked slots receive neither weight gradient nor downstream
// gradient.
LayerGradient backprop_through_layer(const LayerActivation& act, const LayerParams& params,
                                     std::span<const double> upstream);

// Applies the optimizer to W (active slots only), c and theta.
void apply_layer_update(LayerParams& params, const LayerGradient& grad, const Matrix& grad_theta,
                        const SlotMask& slots, const OptimizerConfig& opt);

}  // namespace auxnet
