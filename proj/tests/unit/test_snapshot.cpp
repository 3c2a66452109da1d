#include <filesystem>
#include <random>
#include <sstream>

#include <doctest.h>

#include "auxnet/errors.hpp"
#include "auxnet/snapshot.hpp"

using namespace auxnet;

namespace {

NetworkConfig snap_config() {
    NetworkConfig cfg;
    cfg.base_layers = 2;
    cfg.aux_layers = 3;
    cfg.end_layers = 2;
    cfg.nodes = 4;
    cfg.num_base_features = 3;
    cfg.seed = 21;
    return cfg;
}

std::vector<StreamInstance> random_stream(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::bernoulli_distribution present(0.6);
    std::vector<StreamInstance> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t].t = t;
        out[t].x_base = {d(rng), d(rng), d(rng)};
        for (std::size_t a = 0; a < 3; ++a) {
            if (present(rng)) out[t].x_aux[a] = d(rng);
        }
        out[t].label = out[t].x_base[0] > 0.0 ? 1 : 0;
    }
    return out;
}

}  // namespace

TEST_SUITE("snapshot") {

TEST_CASE("round-trip is exact") {
    AuxNet net(snap_config());
    for (const auto& inst : random_stream(40, 1)) net.learn_one(inst);
    std::stringstream io;
    write_snapshot(io, net.knowledge());
    CHECK(read_snapshot(io) == net.knowledge());

    auto sgd = snap_config();
    sgd.optimizer = OptimizerKind::kSgd;
    std::stringstream io2;
    write_snapshot(io2, init_knowledge_base(sgd));
    CHECK(read_snapshot(io2).config.optimizer == OptimizerKind::kSgd);
}

TEST_CASE("resuming from a snapshot continues identically") {
    const auto stream = random_stream(80, 2);
    AuxNet straight(snap_config());
    AuxNet first_half(snap_config());
    for (std::size_t t = 0; t < 40; ++t) {
        straight.learn_one(stream[t]);
        first_half.learn_one(stream[t]);
    }
    const auto path = std::filesystem::temp_directory_path() / "auxnet_snapshot_resume.json";
    save_snapshot(path, first_half.knowledge());
    AuxNet resumed(load_snapshot(path));
    std::filesystem::remove(path);
    for (std::size_t t = 40; t < stream.size(); ++t) {
        const auto a = straight.learn_one(stream[t]);
        const auto b = resumed.learn_one(stream[t]);
        CHECK(a.predicted == b.predicted);
        CHECK(a.loss == b.loss);
    }
    CHECK(straight.knowledge() == resumed.knowledge());
}

TEST_CASE("malformed documents") {
    SUBCASE("not json") {
        std::istringstream in("{ this is not json");
        CHECK_THROWS_AS(read_snapshot(in), DataError);
    }
    SUBCASE("wrong format tag") {
        std::istringstream in(R"({"format":"something-else","version":1})");
        CHECK_THROWS_AS(read_snapshot(in), DataError);
    }
    SUBCASE("shape mismatch") {
        std::stringstream io;
        write_snapshot(io, init_knowledge_base(snap_config()));
        std::string text = io.str();
        const auto pos = text.find("\"nodes\":4");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 9, "\"nodes\":5");
        std::istringstream in(text);
        CHECK_THROWS_AS(read_snapshot(in), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_snapshot("/nonexistent/auxnet.json"), IoError);
    }
}

}
