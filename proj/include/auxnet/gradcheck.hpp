#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "auxnet/model.hpp"

namespace auxnet {

struct GradCheckEntry {
    std::size_t layer = 0;
    std::string param;  // "W", "c" or "theta"
    std::size_t index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
};

struct GradCheckReport {
    std::size_t checked = 0;
    double max_rel_error = 0.0;
    GradCheckEntry worst;
};

// |a - n| / max(|a|, |n|, scale_floor). The floor keeps entries whose true
// gradient is zero (dead relu units, masked slots) from dividing by ~0.
double relative_error(double analytic, double numeric, double scale_floor = 1e-4);

// Compares compute_gradients against central differences of ensemble_loss
// for every W, c and theta entry of every active layer. W entries of masked
// first-end-layer slots are skipped since they are outside the active model.
GradCheckReport check_gradients(const KnowledgeBase& kb, std::span<const double> x_base,
                                const AuxValues& x_aux, std::size_t label, double step = 1e-5);

struct GradCheckCase {
    std::vector<std::size_t> active_aux;
    GradCheckReport report;
};

// Gradient check on the small reference network (S=2, A=2, E=2, 3 nodes,
// 2 classes, plain SGD) over random inputs, cycling the active auxiliary set
// through empty, full and random subsets.
std::vector<GradCheckCase> run_gradcheck_suite(std::uint64_t seed, std::size_t cases);

}  // namespace auxnet
