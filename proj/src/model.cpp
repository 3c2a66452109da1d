#include "auxnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "auxnet/errors.hpp"

namespace auxnet {

OptimizerConfig NetworkConfig::optimizer_config() const {
    OptimizerConfig opt;
    opt.kind = optimizer;
    opt.eta = eta;
    return opt;
}

void NetworkConfig::validate() const {
    if (base_layers < 1) throw ContractError("config: need at least one base layer");
    if (middle_layers != 1) throw ContractError("config: exactly one middle layer is supported");
    if (end_layers < 1) throw ContractError("config: need at least one end layer");
    if (nodes < 1) throw ContractError("config: nodes per layer must be positive");
    if (num_classes < 2) throw ContractError("config: need at least two classes");
    if (num_base_features < 1) throw ContractError("config: need at least one base feature");
    if (!(beta > 0.0 && beta < 1.0)) throw ContractError("config: beta must lie in (0, 1)");
    if (!(lambda > 0.0 && lambda < 1.0)) throw ContractError("config: lambda must lie in (0, 1)");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ContractError("config: eta must be positive");
}

LayerRole KnowledgeBase::role(std::size_t layer) const {
    if (layer < middle_index()) return LayerRole::kBase;
    if (layer == middle_index()) return LayerRole::kMiddle;
    if (layer < end_index(0)) return LayerRole::kAux;
    return LayerRole::kEnd;
}

double KnowledgeBase::alpha_sum() const {
    double s = 0.0;
    for (const auto& l : layers) s += l.alpha;
    return s;
}

KnowledgeBase init_knowledge_base(const NetworkConfig& cfg) {
    cfg.validate();
    KnowledgeBase kb;
    kb.config = cfg;
    std::mt19937_64 rng(cfg.seed);
    const double alpha0 = 1.0 / static_cast<double>(cfg.total_layers());
    const std::size_t n = cfg.nodes;
    const std::size_t k = cfg.num_classes;

    kb.layers.reserve(cfg.total_layers());
    for (std::size_t i = 0; i < cfg.base_layers; ++i) {
        kb.layers.push_back(make_layer(i == 0 ? cfg.num_base_features : n, n, k, alpha0, rng));
    }
    kb.layers.push_back(make_layer(n, n, k, alpha0, rng));
    for (std::size_t j = 0; j < cfg.aux_layers; ++j) {
        kb.layers.push_back(make_layer(1, n, k, alpha0, rng));
    }
    const std::size_t slots = 1 + cfg.aux_layers;
    for (std::size_t e = 0; e < cfg.end_layers; ++e) {
        if (e == 0) {
            kb.layers.push_back(make_layer(n * slots, n, k, alpha0, rng, slots));
        } else {
            kb.layers.push_back(make_layer(n, n, k, alpha0, rng));
        }
    }
    return kb;
}

SlotMask ActiveModel::end_slots() const {
    SlotMask mask(1 + kb.config.aux_layers, false);
    mask[0] = true;
    for (const auto j : active_aux) mask[1 + j] = true;
    return mask;
}

ActiveModel create_model(KnowledgeBase kb, std::vector<std::size_t> active_aux) {
    std::sort(active_aux.begin(), active_aux.end());
    if (std::adjacent_find(active_aux.begin(), active_aux.end()) != active_aux.end()) {
        throw ContractError("create_model: duplicate auxiliary index");
    }
    if (!active_aux.empty() && active_aux.back() >= kb.config.aux_layers) {
        throw ContractError("create_model: auxiliary index " + std::to_string(active_aux.back()) +
                            " out of range for " + std::to_string(kb.config.aux_layers) +
                            " auxiliary layers");
    }

    ActiveModel m;
    const std::size_t L = kb.layers.size();
    m.layer_active.assign(L, true);
    for (std::size_t j = 0; j < kb.config.aux_layers; ++j) m.layer_active[kb.aux_index(j)] = false;
    for (const auto j : active_aux) m.layer_active[kb.aux_index(j)] = true;

    // With nothing frozen the stored alphas are used as-is, so the A = 0
    // network follows the plain ODL arithmetic exactly.
    const bool all_active = active_aux.size() == kb.config.aux_layers;
    double active_mass = 0.0;
    for (std::size_t z = 0; z < L; ++z) {
        if (m.layer_active[z]) active_mass += kb.layers[z].alpha;
    }
    m.alpha.assign(L, 0.0);
    for (std::size_t z = 0; z < L; ++z) {
        if (m.layer_active[z]) m.alpha[z] = all_active ? kb.layers[z].alpha : kb.layers[z].alpha / active_mass;
    }

    double slot_mass = kb.middle().alpha;
    for (const auto j : active_aux) slot_mass += kb.aux(j).alpha;
    m.gamma.assign(1 + kb.config.aux_layers, 0.0);
    m.gamma[0] = kb.middle().alpha / slot_mass;
    for (const auto j : active_aux) m.gamma[1 + j] = kb.aux(j).alpha / slot_mass;

    m.active_aux = std::move(active_aux);
    m.kb = std::move(kb);
    return m;
}

ForwardTrace forward(const ActiveModel& model, std::span<const double> x_base, const AuxValues& x_aux) {
    const auto& kb = model.kb;
    const auto& cfg = kb.config;
    if (x_base.size() != cfg.num_base_features) {
        throw ContractError("forward: expected " + std::to_string(cfg.num_base_features) +
                            " base features, got " + std::to_string(x_base.size()));
    }
    if (x_aux.size() != model.active_aux.size()) {
        throw ContractError("forward: auxiliary values do not match the active set");
    }
    for (const auto j : model.active_aux) {
        if (!x_aux.contains(j)) {
            throw ContractError("forward: missing value for active auxiliary feature " + std::to_string(j));
        }
    }

    ForwardTrace trace;
    trace.layers.resize(kb.layers.size());

    Vector h(x_base.begin(), x_base.end());
    for (std::size_t i = 0; i < cfg.base_layers; ++i) {
        auto& act = trace.layers[kb.base_index(i)].emplace(layer_forward(kb.layers[kb.base_index(i)], std::move(h)));
        h = act.hidden;
    }
    const auto& mid = trace.layers[kb.middle_index()].emplace(layer_forward(kb.middle(), std::move(h)));
    for (const auto j : model.active_aux) {
        trace.layers[kb.aux_index(j)].emplace(layer_forward(kb.aux(j), Vector{x_aux.at(j)}));
    }

    const std::size_t n = cfg.nodes;
    trace.end_input.assign(n * (1 + cfg.aux_layers), 0.0);
    for (std::size_t k = 0; k < n; ++k) trace.end_input[k] = model.gamma[0] * mid.hidden[k];
    for (const auto j : model.active_aux) {
        const auto& hid = trace.layers[kb.aux_index(j)]->hidden;
        for (std::size_t k = 0; k < n; ++k) trace.end_input[(1 + j) * n + k] = model.gamma[1 + j] * hid[k];
    }

    h = trace.end_input;
    for (std::size_t e = 0; e < cfg.end_layers; ++e) {
        const auto idx = kb.end_index(e);
        auto& act = trace.layers[idx].emplace(
            layer_forward(kb.layers[idx], std::move(h), e == 0 ? model.end_slots() : SlotMask{}));
        h = act.hidden;
    }

    trace.prediction.assign(cfg.num_classes, 0.0);
    for (std::size_t z = 0; z < trace.layers.size(); ++z) {
        if (!trace.layers[z]) continue;
        const auto& probs = trace.layers[z]->class_probs;
        for (std::size_t c = 0; c < probs.size(); ++c) trace.prediction[c] += model.alpha[z] * probs[c];
    }
    return trace;
}

Vector classifier_losses(const ForwardTrace& trace, const ActiveModel& model, std::size_t label) {
    Vector losses(model.num_layers(), 0.0);
    for (std::size_t z = 0; z < losses.size(); ++z) {
        if (trace.layers[z]) losses[z] = cross_entropy(trace.layers[z]->class_probs, label);
    }
    return losses;
}

double ensemble_loss(const ForwardTrace& trace, const ActiveModel& model, std::size_t label) {
    const auto losses = classifier_losses(trace, model, label);
    double total = 0.0;
    for (std::size_t z = 0; z < losses.size(); ++z) total += model.alpha[z] * losses[z];
    return total;
}

ModelGradients compute_gradients(const ActiveModel& model, const ForwardTrace& trace, std::size_t label) {
    const auto& kb = model.kb;
    const auto& cfg = kb.config;
    const std::size_t L = kb.layers.size();
    if (label >= cfg.num_classes) {
        throw ContractError("compute_gradients: label " + std::to_string(label) + " out of range");
    }

    ModelGradients grads;
    grads.layers.resize(L);
    grads.theta.resize(L);

    // Gradient of the ensemble loss w.r.t. each layer's hidden output, seeded
    // by the layer's own weighted classifier and accumulated from successors.
    std::vector<Vector> dh(L);
    for (std::size_t z = 0; z < L; ++z) {
        if (!trace.layers[z]) continue;
        const auto& act = *trace.layers[z];
        dh[z] = classifier_grad_hidden(act, kb.layers[z], label);
        for (double& g : dh[z]) g *= model.alpha[z];
        Matrix gt = classifier_grad_theta(act, label);
        for (double& g : gt.data) g *= model.alpha[z];
        grads.theta[z] = std::move(gt);
    }

    const auto accumulate = [](Vector& into, std::span<const double> from, double scale) {
        for (std::size_t k = 0; k < into.size(); ++k) into[k] += scale * from[k];
    };

    for (std::size_t e = cfg.end_layers; e-- > 0;) {
        const auto idx = kb.end_index(e);
        auto g = backprop_through_layer(*trace.layers[idx], kb.layers[idx], dh[idx]);
        if (e > 0) {
            accumulate(dh[kb.end_index(e - 1)], g.downstream, 1.0);
        } else {
            const std::size_t n = cfg.nodes;
            const std::span<const double> down(g.downstream);
            accumulate(dh[kb.middle_index()], down.subspan(0, n), model.gamma[0]);
            for (const auto j : model.active_aux) {
                accumulate(dh[kb.aux_index(j)], down.subspan((1 + j) * n, n), model.gamma[1 + j]);
            }
        }
        grads.layers[idx] = std::move(g);
    }

    {
        const auto idx = kb.middle_index();
        auto g = backprop_through_layer(*trace.layers[idx], kb.layers[idx], dh[idx]);
        accumulate(dh[kb.base_index(cfg.base_layers - 1)], g.downstream, 1.0);
        grads.layers[idx] = std::move(g);
    }
    for (std::size_t i = cfg.base_layers; i-- > 0;) {
        const auto idx = kb.base_index(i);
        auto g = backprop_through_layer(*trace.layers[idx], kb.layers[idx], dh[idx]);
        if (i > 0) accumulate(dh[kb.base_index(i - 1)], g.downstream, 1.0);
        grads.layers[idx] = std::move(g);
    }
    for (const auto j : model.active_aux) {
        const auto idx = kb.aux_index(j);
        grads.layers[idx] = backprop_through_layer(*trace.layers[idx], kb.layers[idx], dh[idx]);
    }
    return grads;
}

void hedge_update(ActiveModel& model, std::span<const double> losses) {
    const auto& cfg = model.kb.config;
    const double floor = cfg.lambda / static_cast<double>(model.num_layers());
    model.alpha_pre_norm.assign(model.num_layers(), 0.0);
    double total = 0.0;
    for (std::size_t z = 0; z < model.num_layers(); ++z) {
        if (!model.layer_active[z]) continue;
        const double discounted = model.alpha[z] * std::pow(cfg.beta, losses[z]);
        model.alpha_pre_norm[z] = std::max(discounted, floor);
        total += model.alpha_pre_norm[z];
    }
    for (std::size_t z = 0; z < model.num_layers(); ++z) {
        model.alpha[z] = model.layer_active[z] ? model.alpha_pre_norm[z] / total : 0.0;
    }
}

void update_step(ActiveModel& model, const ForwardTrace& trace, std::size_t label) {
    const auto grads = compute_gradients(model, trace, label);
    const auto losses = classifier_losses(trace, model, label);
    const auto opt = model.kb.config.optimizer_config();
    const std::size_t first_end = model.kb.end_index(0);
    for (std::size_t z = 0; z < model.num_layers(); ++z) {
        if (!model.layer_active[z]) continue;
        apply_layer_update(model.kb.layers[z], *grads.layers[z], *grads.theta[z],
                           z == first_end ? model.end_slots() : SlotMask{}, opt);
    }
    hedge_update(model, losses);
}

KnowledgeBase merge_knowledge(ActiveModel updated) {
    KnowledgeBase kb = std::move(updated.kb);
    if (updated.active_aux.size() == kb.config.aux_layers) {
        for (std::size_t z = 0; z < kb.layers.size(); ++z) kb.layers[z].alpha = updated.alpha[z];
        return kb;
    }
    double total = 0.0;
    for (std::size_t z = 0; z < kb.layers.size(); ++z) {
        if (updated.layer_active[z]) kb.layers[z].alpha = updated.alpha[z];
        total += kb.layers[z].alpha;
    }
    for (auto& layer : kb.layers) layer.alpha /= total;
    return kb;
}

AuxNet::AuxNet(const NetworkConfig& cfg) : kb_(init_knowledge_base(cfg)) {}

AuxNet::AuxNet(KnowledgeBase kb) : kb_(std::move(kb)) {
    kb_.config.validate();
    if (kb_.layers.size() != kb_.config.total_layers()) {
        throw ContractError("AuxNet: knowledge base layer count does not match its configuration");
    }
}

std::vector<std::size_t> AuxNet::active_set(const AuxValues& x_aux) const {
    std::vector<std::size_t> active;
    active.reserve(x_aux.size());
    for (const auto& [j, value] : x_aux) {
        if (j >= kb_.config.aux_layers) {
            throw ContractError("auxiliary index " + std::to_string(j) + " out of range for " +
                                std::to_string(kb_.config.aux_layers) + " auxiliary layers");
        }
        active.push_back(j);
    }
    return active;
}

Vector AuxNet::predict_proba(std::span<const double> x_base, const AuxValues& x_aux) const {
    const auto model = create_model(kb_, active_set(x_aux));
    return forward(model, x_base, x_aux).prediction;
}

StepOutcome AuxNet::learn_one(const StreamInstance& instance) {
    if (instance.x_base.size() != kb_.config.num_base_features) {
        throw DataError("step " + std::to_string(instance.t) + ": expected " +
                        std::to_string(kb_.config.num_base_features) + " base features, got " +
                        std::to_string(instance.x_base.size()));
    }
    if (instance.label >= kb_.config.num_classes) {
        throw DataError("step " + std::to_string(instance.t) + ": label " +
                        std::to_string(instance.label) + " out of range");
    }
    auto active = active_set(instance.x_aux);

    std::optional<KnowledgeBase> before;
    if (observer_) before = kb_;

    auto model = create_model(std::move(kb_), std::move(active));
    const auto trace = forward(model, instance.x_base, instance.x_aux);

    StepOutcome out;
    out.prediction = trace.prediction;
    out.predicted = argmax(trace.prediction);
    out.loss = ensemble_loss(trace, model, instance.label);

    update_step(model, trace, instance.label);
    if (observer_) {
        const ActiveModel snapshot = model;
        kb_ = merge_knowledge(std::move(model));
        observer_(instance, *before, snapshot, kb_);
    } else {
        kb_ = merge_knowledge(std::move(model));
    }
    return out;
}

RunMetrics run_stream(AuxNet& net, std::span<const StreamInstance> stream) {
    RunMetrics metrics;
    for (const auto& inst : stream) {
        const auto out = net.learn_one(inst);
        metrics.record(inst.x_aux.size(), out.predicted, inst.label, out.loss);
    }
    return metrics;
}

RunMetrics run_stream(const NetworkConfig& cfg, std::span<const StreamInstance> stream) {
    AuxNet net(cfg);
    return run_stream(net, stream);
}

}  // namespace auxnet
