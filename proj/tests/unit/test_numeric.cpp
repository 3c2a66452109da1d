#include <cmath>
#include <numeric>
#include <random>

#include <doctest.h>

#include "auxnet/errors.hpp"
#include "auxnet/numeric.hpp"

using namespace auxnet;

TEST_SUITE("numeric") {

TEST_CASE("relu clamps negatives") {
    CHECK(relu(Vector{-1, 0, 2}) == Vector{0, 0, 2});
    CHECK(relu(Vector{0, 0}) == Vector{0, 0});
    CHECK(relu(Vector{3.5, -3.5}) == Vector{3.5, 0});
}

TEST_CASE("softmax values") {
    CHECK(softmax(Vector{0, 0}) == Vector{0.5, 0.5});

    // Reference from tests/oracles/scalar_oracle.py.
    const auto p = softmax(Vector{1, 2});
    CHECK(p[0] == doctest::Approx(0.2689414213699951).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.7310585786300049).epsilon(1e-12));

    const auto big = softmax(Vector{1000, 0});
    CHECK(std::isfinite(big[0]));
    CHECK(big[0] == doctest::Approx(1.0));
    CHECK(big[1] == doctest::Approx(0.0));

    CHECK_THROWS_AS(softmax(Vector{}), ContractError);
}

TEST_CASE("softmax sums to one and never overflows") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> value(-1e4, 1e4);
    std::uniform_int_distribution<int> len(1, 12);
    for (int trial = 0; trial < 500; ++trial) {
        Vector v(static_cast<std::size_t>(len(rng)));
        for (double& x : v) x = value(rng);
        const auto p = softmax(v);
        CHECK(all_finite(p));
        const double total = std::accumulate(p.begin(), p.end(), 0.0);
        CHECK(std::abs(total - 1.0) <= 1e-12);
        for (const double q : p) CHECK(q >= 0.0);
    }
}

TEST_CASE("cross entropy") {
    CHECK(cross_entropy(Vector{1, 0}, 0) == 0.0);
    CHECK(cross_entropy(Vector{0.26894, 0.73106}, 1) == doctest::Approx(0.31326).epsilon(1e-4));
    CHECK(cross_entropy(Vector{0, 1}, 0) == doctest::Approx(-std::log(1e-12)));
    CHECK(cross_entropy(Vector{0, 1}, 0) == doctest::Approx(27.631).epsilon(1e-4));
    CHECK_THROWS_AS(cross_entropy(Vector{0.5, 0.5}, 2), ContractError);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> value(-20, 20);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = softmax(Vector{value(rng), value(rng), value(rng)});
        for (std::size_t k = 0; k < 3; ++k) CHECK(cross_entropy(p, k) >= 0.0);
    }
}

TEST_CASE("argmax breaks ties toward the lowest index") {
    CHECK(argmax(Vector{0.5, 0.5}) == 0);
    CHECK(argmax(Vector{0.1, 0.7, 0.7}) == 1);
    CHECK(argmax(Vector{0.2, 0.3, 0.5}) == 2);
}

TEST_CASE("matrix helpers") {
    Matrix m(2, 3);
    m.data = {1, 2, 3, 4, 5, 6};
    CHECK(matvec(m, Vector{1, 0, -1}) == Vector{-2, -2});
    CHECK(matvec_transposed(m, Vector{1, 1}) == Vector{5, 7, 9});
    const auto o = outer(Vector{1, 2}, Vector{3, 4, 5});
    CHECK(o.rows == 2);
    CHECK(o.data == std::vector<double>{3, 4, 5, 6, 8, 10});
    CHECK_THROWS_AS(matvec(m, Vector{1, 2}), ContractError);
}

TEST_CASE("adam update") {
    SUBCASE("zero gradient leaves parameters unchanged") {
        Vector param{1.0, -2.0, 0.5};
        AdamState state(3);
        adam_update(param, Vector{0, 0, 0}, state, 0.01);
        CHECK(param == Vector{1.0, -2.0, 0.5});
        CHECK(state.step_count == 1);
    }
    SUBCASE("first step moves by eta") {
        Vector param{1.0};
        AdamState state(1);
        adam_update(param, Vector{1.0}, state, 0.01);
        // 1 - 0.01 * 1 / (1 + 1e-8)
        CHECK(param[0] == doctest::Approx(0.9900000001).epsilon(1e-14));
        CHECK(state.m[0] == doctest::Approx(0.1));
        CHECK(state.v[0] == doctest::Approx(0.001));
    }
    SUBCASE("deterministic") {
        Vector a{0.3, -0.7}, b{0.3, -0.7};
        AdamState sa(2), sb(2);
        sa.m = sb.m = {0.01, -0.02};
        sa.v = sb.v = {0.001, 0.002};
        sa.step_count = sb.step_count = 4;
        adam_update(a, Vector{0.2, 0.9}, sa, 0.01);
        adam_update(b, Vector{0.2, 0.9}, sb, 0.01);
        CHECK(a == b);
        CHECK(sa == sb);
        for (const double v : sa.v) CHECK(v >= 0.0);
    }
    SUBCASE("shape mismatch") {
        Vector param{1.0, 2.0};
        AdamState state(3);
        CHECK_THROWS_AS(adam_update(param, Vector{1.0, 1.0}, state, 0.01), ContractError);
    }
}

TEST_CASE("sgd path is plain gradient descent and leaves optimizer state alone") {
    Vector param{1.0, 2.0};
    AdamState state(2);
    OptimizerConfig opt;
    opt.kind = OptimizerKind::kSgd;
    opt.eta = 0.1;
    apply_gradient(param, Vector{1.0, -2.0}, state, opt);
    CHECK(param[0] == doctest::Approx(0.9));
    CHECK(param[1] == doctest::Approx(2.2));
    CHECK(state == AdamState(2));
}

}
