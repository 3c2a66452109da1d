#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace auxnet {

using Vector = std::vector<double>;

// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    bool operator==(const Matrix&) const = default;
};

// y = M x
Vector matvec(const Matrix& m, std::span<const double> x);
// y = M^T x
Vector matvec_transposed(const Matrix& m, std::span<const double> x);
// M = a (outer) b
Matrix outer(std::span<const double> a, std::span<const double> b);

Vector relu(std::span<const double> v);
Vector softmax(std::span<const double> v);

inline constexpr double kProbabilityFloor = 1e-12;

// -ln(max(probs[label], 1e-12))
double cross_entropy(std::span<const double> probs, std::size_t label);

// Index of the largest entry; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> v);

bool all_finite(std::span<const double> v);

struct AdamState {
    Vector m;
    Vector v;
    std::int64_t step_count = 0;

    AdamState() = default;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

    bool operator==(const AdamState&) const = default;
};

enum class OptimizerKind { kAdam, kSgd };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::kAdam;
    double eta = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// One Adam step in place. Throws ContractError when the shapes of param, grad
// and the moment buffers disagree.
void adam_update(std::span<double> param, std::span<const double> grad, AdamState& state,
                 double eta, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);

// Dispatches to Adam or plain gradient descent (param -= eta * grad). The SGD
// path leaves the optimizer state untouched.
void apply_gradient(std::span<double> param, std::span<const double> grad, AdamState& state,
                    const OptimizerConfig& opt);

}  // namespace auxnet
