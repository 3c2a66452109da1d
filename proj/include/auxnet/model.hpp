#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "auxnet/layer.hpp"
#include "auxnet/metrics.hpp"
#include "auxnet/numeric.hpp"
#include "auxnet/stream.hpp"

namespace auxnet {

struct NetworkConfig {
    std::size_t base_layers = 5;    // S
    std::size_t middle_layers = 1;  // M, always 1
    std::size_t aux_layers = 12;    // A, one per auxiliary feature
    std::size_t end_layers = 5;     // E
    std::size_t nodes = 50;
    std::size_t num_classes = 2;
    std::size_t num_base_features = 12;
    double eta = 0.01;
    double beta = 0.99;
    double lambda = 0.2;
    std::uint64_t seed = 0;
    OptimizerKind optimizer = OptimizerKind::kAdam;

    std::size_t total_layers() const { return base_layers + middle_layers + aux_layers + end_layers; }
    OptimizerConfig optimizer_config() const;
    // Throws ContractError describing the first violated constraint.
    void validate() const;

    bool operator==(const NetworkConfig&) const = default;
};

enum class LayerRole { kBase, kMiddle, kAux, kEnd };

// All L layers live in one vector ordered base, middle, aux, end.
struct KnowledgeBase {
    NetworkConfig config;
    std::vector<LayerParams> layers;

    std::size_t base_index(std::size_t i) const { return i; }
    std::size_t middle_index() const { return config.base_layers; }
    std::size_t aux_index(std::size_t j) const { return config.base_layers + 1 + j; }
    std::size_t end_index(std::size_t e) const { return config.base_layers + 1 + config.aux_layers + e; }
    LayerRole role(std::size_t layer) const;

    LayerParams& aux(std::size_t j) { return layers[aux_index(j)]; }
    const LayerParams& aux(std::size_t j) const { return layers[aux_index(j)]; }
    LayerParams& middle() { return layers[middle_index()]; }
    const LayerParams& middle() const { return layers[middle_index()]; }

    double alpha_sum() const;
    bool operator==(const KnowledgeBase&) const = default;
};

// Every alpha = 1/L; weights drawn from a generator seeded with cfg.seed in
// layer order base, middle, aux, end.
KnowledgeBase init_knowledge_base(const NetworkConfig& cfg);

// Per-step model instantiated from the knowledge base for the auxiliary
// subset that is present. Frozen auxiliary layers stay inside `kb` untouched.
struct ActiveModel {
    KnowledgeBase kb;
    std::vector<std::size_t> active_aux;  // sorted, 0-based
    std::vector<bool> layer_active;       // per layer
    Vector alpha;                         // per layer, renormalized over active; 0 when frozen
    Vector gamma;                         // per end-input slot: [middle, aux 0..A-1]; 0 when frozen
    Vector alpha_pre_norm;                // after the last hedge step: discounted and floored

    std::size_t num_layers() const { return layer_active.size(); }
    SlotMask end_slots() const;
};

ActiveModel create_model(KnowledgeBase kb, std::vector<std::size_t> active_aux);

struct ForwardTrace {
    std::vector<std::optional<LayerActivation>> layers;  // nullopt when frozen
    Vector end_input;   // gamma-weighted [middle, aux...] slots, zeros in frozen slots
    Vector prediction;  // alpha-weighted mixture of the active classifiers
};

ForwardTrace forward(const ActiveModel& model, std::span<const double> x_base, const AuxValues& x_aux);

// Per-layer cross-entropy of each active classifier; 0 for frozen layers.
Vector classifier_losses(const ForwardTrace& trace, const ActiveModel& model, std::size_t label);

// Sum over active layers of alpha * cross_entropy.
double ensemble_loss(const ForwardTrace& trace, const ActiveModel& model, std::size_t label);

struct ModelGradients {
    std::vector<std::optional<LayerGradient>> layers;  // W, c gradients
    std::vector<std::optional<Matrix>> theta;
};

// Analytic gradient of ensemble_loss w.r.t. every active W, c and theta, with
// alpha and gamma held constant.
ModelGradients compute_gradients(const ActiveModel& model, const ForwardTrace& trace, std::size_t label);

// Optimizer step on all active parameters, then the hedge update of the
// active alphas (discount, floor at lambda/L, renormalize).
void update_step(ActiveModel& model, const ForwardTrace& trace, std::size_t label);

// Hedge update in isolation; `losses` is indexed per layer.
void hedge_update(ActiveModel& model, std::span<const double> losses);

// Folds the updated active model back into a knowledge base, renormalizing
// the alphas of all L layers together. With no layer frozen the hedged
// alphas already sum to one and are stored unchanged.
KnowledgeBase merge_knowledge(ActiveModel updated);

struct StepOutcome {
    std::size_t predicted = 0;
    double loss = 0.0;
    Vector prediction;
};

// Hook invoked after each training step with the knowledge base before the
// step, the updated active model and the merged knowledge base.
using StepObserver =
    std::function<void(const StreamInstance&, const KnowledgeBase& before, const ActiveModel& updated,
                        const KnowledgeBase& after)>;

// Stateful test-then-train learner around a knowledge base.
class AuxNet {
public:
    explicit AuxNet(const NetworkConfig& cfg);
    explicit AuxNet(KnowledgeBase kb);

    Vector predict_proba(std::span<const double> x_base, const AuxValues& x_aux) const;
    StepOutcome learn_one(const StreamInstance& instance);

    const KnowledgeBase& knowledge() const { return kb_; }
    const NetworkConfig& config() const { return kb_.config; }
    void set_observer(StepObserver observer) { observer_ = std::move(observer); }

private:
    std::vector<std::size_t> active_set(const AuxValues& x_aux) const;

    KnowledgeBase kb_;
    StepObserver observer_;
};

// Prequential run over a stream. Throws DataError naming the step whose base
// dimensionality disagrees with the configuration.
RunMetrics run_stream(const NetworkConfig& cfg, std::span<const StreamInstance> stream);
RunMetrics run_stream(AuxNet& net, std::span<const StreamInstance> stream);

}  // namespace auxnet
