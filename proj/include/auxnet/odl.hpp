#pragma once

#include <span>
#include <vector>

#include "auxnet/layer.hpp"
#include "auxnet/metrics.hpp"
#include "auxnet/model.hpp"
#include "auxnet/stream.hpp"

namespace auxnet {

// Fixed-dimension online deep learning baseline: a plain stack of
// base + middle + end hidden layers, every layer with its own classifier head,
// combined and reweighted by the same hedge rule. Its input is the full base
// vector of each instance; auxiliary values are ignored. `cfg.aux_layers`
// must be zero.
class OdlNetwork {
public:
    explicit OdlNetwork(const NetworkConfig& cfg);

    Vector predict_proba(std::span<const double> x) const;
    StepOutcome learn_one(std::span<const double> x, std::size_t label);

    const std::vector<LayerParams>& layers() const { return layers_; }
    const NetworkConfig& config() const { return cfg_; }

private:
    std::vector<LayerActivation> forward_all(std::span<const double> x) const;
    Vector mix(const std::vector<LayerActivation>& acts) const;

    NetworkConfig cfg_;
    std::vector<LayerParams> layers_;
};

RunMetrics run_odl(const NetworkConfig& cfg, std::span<const StreamInstance> stream);

}  // namespace auxnet
