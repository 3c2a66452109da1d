#include "auxnet/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace auxnet {
namespace {

double loss_at(const KnowledgeBase& kb, const std::vector<std::size_t>& active,
               std::span<const double> x_base, const AuxValues& x_aux, std::size_t label) {
    const auto model = create_model(kb, active);
    return ensemble_loss(forward(model, x_base, x_aux), model, label);
}

}  // namespace

double relative_error(double analytic, double numeric, double scale_floor) {
    const double scale = std::max({std::abs(analytic), std::abs(numeric), scale_floor});
    return std::abs(analytic - numeric) / scale;
}

GradCheckReport check_gradients(const KnowledgeBase& kb, std::span<const double> x_base,
                                const AuxValues& x_aux, std::size_t label, double step) {
    std::vector<std::size_t> active;
    for (const auto& [j, v] : x_aux) active.push_back(j);

    const auto model = create_model(kb, active);
    const auto trace = forward(model, x_base, x_aux);
    const auto grads = compute_gradients(model, trace, label);
    const auto end_slots = model.end_slots();
    const std::size_t first_end = kb.end_index(0);

    GradCheckReport report;
    KnowledgeBase probe = kb;
    const auto check = [&](std::size_t z, const char* name, std::vector<double>& values,
                           const std::vector<double>& analytic, std::size_t i) {
        const double saved = values[i];
        values[i] = saved + step;
        const double up = loss_at(probe, active, x_base, x_aux, label);
        values[i] = saved - step;
        const double down = loss_at(probe, active, x_base, x_aux, label);
        values[i] = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double err = relative_error(analytic[i], numeric);
        ++report.checked;
        if (err >= report.max_rel_error) {
            report.max_rel_error = err;
            report.worst = {z, name, i, analytic[i], numeric, err};
        }
    };

    for (std::size_t z = 0; z < kb.layers.size(); ++z) {
        if (!model.layer_active[z]) continue;
        auto& layer = probe.layers[z];
        const auto& g = *grads.layers[z];
        const std::size_t width = layer.slot_width();
        for (std::size_t i = 0; i < layer.W.data.size(); ++i) {
            const std::size_t slot = (i % layer.W.cols) / width;
            if (z == first_end && !end_slots[slot]) continue;
            check(z, "W", layer.W.data, g.grad_W.data, i);
        }
        for (std::size_t i = 0; i < layer.c.size(); ++i) check(z, "c", layer.c, g.grad_c, i);
        for (std::size_t i = 0; i < layer.theta.data.size(); ++i) {
            check(z, "theta", layer.theta.data, grads.theta[z]->data, i);
        }
    }
    return report;
}

std::vector<GradCheckCase> run_gradcheck_suite(std::uint64_t seed, std::size_t cases) {
    NetworkConfig cfg;
    cfg.base_layers = 2;
    cfg.aux_layers = 2;
    cfg.end_layers = 2;
    cfg.nodes = 3;
    cfg.num_classes = 2;
    cfg.num_base_features = 3;
    cfg.optimizer = OptimizerKind::kSgd;
    cfg.seed = seed;

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> value(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> alpha_draw(0.5, 1.5);

    std::vector<GradCheckCase> out;
    for (std::size_t k = 0; k < cases; ++k) {
        cfg.seed = seed + k;
        auto kb = init_knowledge_base(cfg);
        // Uneven alphas and nonzero biases exercise the weighting paths.
        double total = 0.0;
        for (auto& l : kb.layers) {
            l.alpha = alpha_draw(rng);
            total += l.alpha;
            for (double& c : l.c) c = 0.1 * value(rng);
        }
        for (auto& l : kb.layers) l.alpha /= total;

        std::vector<double> x_base(cfg.num_base_features);
        for (double& x : x_base) x = value(rng);
        AuxValues x_aux;
        for (std::size_t j = 0; j < cfg.aux_layers; ++j) {
            const bool present = k % 3 == 0 ? false : k % 3 == 1 ? true : coin(rng);
            if (present) x_aux[j] = value(rng);
        }
        const std::size_t label = coin(rng) ? 1 : 0;

        GradCheckCase c;
        for (const auto& [j, v] : x_aux) c.active_aux.push_back(j);
        c.report = check_gradients(kb, x_base, x_aux, label);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace auxnet
