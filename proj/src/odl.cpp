#include "auxnet/odl.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "auxnet/errors.hpp"

namespace auxnet {

OdlNetwork::OdlNetwork(const NetworkConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    if (cfg_.aux_layers != 0) throw ContractError("OdlNetwork: auxiliary layers are not supported");
    const std::size_t depth = cfg_.total_layers();
    const double alpha0 = 1.0 / static_cast<double>(depth);
    std::mt19937_64 rng(cfg_.seed);
    layers_.reserve(depth);
    for (std::size_t i = 0; i < depth; ++i) {
        const std::size_t in = i == 0 ? cfg_.num_base_features : cfg_.nodes;
        layers_.push_back(make_layer(in, cfg_.nodes, cfg_.num_classes, alpha0, rng));
    }
}

std::vector<LayerActivation> OdlNetwork::forward_all(std::span<const double> x) const {
    if (x.size() != cfg_.num_base_features) {
        throw ContractError("OdlNetwork: expected " + std::to_string(cfg_.num_base_features) +
                            " features, got " + std::to_string(x.size()));
    }
    std::vector<LayerActivation> acts;
    acts.reserve(layers_.size());
    Vector h(x.begin(), x.end());
    for (const auto& layer : layers_) {
        acts.push_back(layer_forward(layer, std::move(h)));
        h = acts.back().hidden;
    }
    return acts;
}

Vector OdlNetwork::mix(const std::vector<LayerActivation>& acts) const {
    Vector out(cfg_.num_classes, 0.0);
    for (std::size_t z = 0; z < acts.size(); ++z) {
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += layers_[z].alpha * acts[z].class_probs[c];
    }
    return out;
}

Vector OdlNetwork::predict_proba(std::span<const double> x) const { return mix(forward_all(x)); }

StepOutcome OdlNetwork::learn_one(std::span<const double> x, std::size_t label) {
    if (label >= cfg_.num_classes) throw DataError("OdlNetwork: label out of range");
    const auto acts = forward_all(x);

    StepOutcome out;
    out.prediction = mix(acts);
    out.predicted = argmax(out.prediction);
    Vector losses(layers_.size());
    for (std::size_t z = 0; z < layers_.size(); ++z) {
        losses[z] = cross_entropy(acts[z].class_probs, label);
        out.loss += layers_[z].alpha * losses[z];
    }

    // Backward from the deepest layer; each layer's hidden gradient collects
    // its own weighted head plus everything arriving from above.
    const auto opt = cfg_.optimizer_config();
    std::vector<LayerGradient> grads(layers_.size());
    std::vector<Matrix> theta_grads(layers_.size());
    Vector carry(cfg_.nodes, 0.0);
    for (std::size_t z = layers_.size(); z-- > 0;) {
        const double a = layers_[z].alpha;
        Vector dh = classifier_grad_hidden(acts[z], layers_[z], label);
        for (std::size_t k = 0; k < dh.size(); ++k) dh[k] = a * dh[k] + carry[k];
        theta_grads[z] = classifier_grad_theta(acts[z], label);
        for (double& g : theta_grads[z].data) g *= a;
        grads[z] = backprop_through_layer(acts[z], layers_[z], dh);
        carry = grads[z].downstream;
    }
    for (std::size_t z = 0; z < layers_.size(); ++z) {
        apply_layer_update(layers_[z], grads[z], theta_grads[z], {}, opt);
    }

    const double floor = cfg_.lambda / static_cast<double>(layers_.size());
    double total = 0.0;
    for (std::size_t z = 0; z < layers_.size(); ++z) {
        layers_[z].alpha = std::max(layers_[z].alpha * std::pow(cfg_.beta, losses[z]), floor);
        total += layers_[z].alpha;
    }
    for (auto& layer : layers_) layer.alpha /= total;
    return out;
}

RunMetrics run_odl(const NetworkConfig& cfg, std::span<const StreamInstance> stream) {
    OdlNetwork net(cfg);
    RunMetrics metrics;
    for (const auto& inst : stream) {
        if (inst.x_base.size() != cfg.num_base_features) {
            throw DataError("step " + std::to_string(inst.t) + ": expected " +
                            std::to_string(cfg.num_base_features) + " features, got " +
                            std::to_string(inst.x_base.size()));
        }
        const auto out = net.learn_one(inst.x_base, inst.label);
        metrics.record(0, out.predicted, inst.label, out.loss);
    }
    return metrics;
}

}  // namespace auxnet
