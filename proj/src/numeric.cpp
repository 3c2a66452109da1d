#include "auxnet/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "auxnet/errors.hpp"

namespace auxnet {

Vector matvec(const Matrix& m, std::span<const double> x) {
    if (x.size() != m.cols) {
        throw ContractError("matvec: input length " + std::to_string(x.size()) + " != cols " +
                            std::to_string(m.cols));
    }
    Vector y(m.rows, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const auto row = m.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

Vector matvec_transposed(const Matrix& m, std::span<const double> x) {
    if (x.size() != m.rows) {
        throw ContractError("matvec_transposed: input length " + std::to_string(x.size()) +
                            " != rows " + std::to_string(m.rows));
    }
    Vector y(m.cols, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        if (x[r] == 0.0) continue;
        const auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols; ++c) y[c] += row[c] * x[r];
    }
    return y;
}

Matrix outer(std::span<const double> a, std::span<const double> b) {
    Matrix out(a.size(), b.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        auto row = out.row(r);
        for (std::size_t c = 0; c < b.size(); ++c) row[c] = a[r] * b[c];
    }
    return out;
}

Vector relu(std::span<const double> v) {
    Vector out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return x > 0.0 ? x : 0.0; });
    return out;
}

Vector softmax(std::span<const double> v) {
    if (v.empty()) throw ContractError("softmax: empty input");
    const double peak = *std::max_element(v.begin(), v.end());
    Vector out(v.size());
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - peak);
        total += out[i];
    }
    for (double& p : out) p /= total;
    return out;
}

double cross_entropy(std::span<const double> probs, std::size_t label) {
    if (label >= probs.size()) {
        throw ContractError("cross_entropy: label " + std::to_string(label) +
                            " out of range for " + std::to_string(probs.size()) + " classes");
    }
    return -std::log(std::max(probs[label], kProbabilityFloor));
}

std::size_t argmax(std::span<const double> v) {
    if (v.empty()) throw ContractError("argmax: empty input");
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void adam_update(std::span<double> param, std::span<const double> grad, AdamState& state,
                 double eta, double beta1, double beta2, double epsilon) {
    if (param.size() != grad.size() || state.m.size() != param.size() ||
        state.v.size() != param.size()) {
        throw ContractError("adam_update: shape mismatch (param " + std::to_string(param.size()) +
                            ", grad " + std::to_string(grad.size()) + ", state " +
                            std::to_string(state.m.size()) + ")");
    }
    ++state.step_count;
    const double t = static_cast<double>(state.step_count);
    const double bias1 = 1.0 - std::pow(beta1, t);
    const double bias2 = 1.0 - std::pow(beta2, t);
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double g = grad[i];
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g;
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g * g;
        const double m_hat = state.m[i] / bias1;
        const double v_hat = state.v[i] / bias2;
        param[i] -= eta * m_hat / (std::sqrt(v_hat) + epsilon);
    }
}

void apply_gradient(std::span<double> param, std::span<const double> grad, AdamState& state,
                    const OptimizerConfig& opt) {
    if (opt.kind == OptimizerKind::kAdam) {
        adam_update(param, grad, state, opt.eta, opt.beta1, opt.beta2, opt.epsilon);
        return;
    }
    if (param.size() != grad.size()) throw ContractError("apply_gradient: shape mismatch");
    for (std::size_t i = 0; i < param.size(); ++i) param[i] -= opt.eta * grad[i];
}

}  // namespace auxnet
