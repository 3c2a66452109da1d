#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "auxnet/errors.hpp"
#include "auxnet/format.hpp"
#include "auxnet/harness.hpp"

using namespace auxnet;

namespace {

NetworkConfig small_network() {
    NetworkConfig cfg;
    cfg.base_layers = 2;
    cfg.end_layers = 2;
    cfg.nodes = 6;
    return cfg;
}

Dataset head(const Dataset& ds, std::size_t n) {
    Dataset out = ds;
    out.instances.resize(n);
    return out;
}

const Dataset& bundled() {
    static const Dataset ds = head(load_ucr(AUXNET_DATASET), 200);
    return ds;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        rows.push_back(fields);
    }
    return rows;
}

double real(const std::string& s) {
    double v = 0.0;
    REQUIRE(parse_real(s, v));
    return v;
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("mean_std") {
    const auto one = mean_std({0.5});
    CHECK(one.mean == 0.5);
    CHECK(one.std == 0.0);
    const auto two = mean_std({1.0, 3.0});
    CHECK(two.mean == 2.0);
    CHECK(two.std == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("format_real round-trips") {
    for (const double v : {0.1, 1.0 / 3.0, 0.8783, 1e-300, 123456.789, 0.0}) {
        double back = -1.0;
        REQUIRE(parse_real(format_real(v), back));
        CHECK(back == v);
    }
    double v = 0.0;
    CHECK_FALSE(parse_real("1.5x", v));
    CHECK_FALSE(parse_real("", v));
}

TEST_CASE("run_tag and parse_mode") {
    CHECK(run_tag(Mode::kAuxNet, 12, 0.9) == "auxnet_B12_p0.9");
    CHECK(run_tag(Mode::kOdl, 24, 0.9) == "odl_B24");
    CHECK(parse_mode("odl") == Mode::kOdl);
    CHECK_THROWS_AS(parse_mode("dnn"), ContractError);
}

TEST_CASE("csv output re-aggregates exactly") {
    ExperimentConfig cfg;
    cfg.network = small_network();
    cfg.p = 0.7;
    cfg.seeds = {3, 4};
    cfg.out_dir = fresh_dir("auxnet_harness_csv");
    const auto runs = run_experiment(cfg, bundled());
    REQUIRE(runs.size() == 2);

    for (const auto& r : runs) {
        const auto rows = read_csv(cfg.out_dir / ("steps_auxnet_B12_p0.7_seed" + std::to_string(r.seed) + ".csv"));
        REQUIRE(rows.size() == bundled().size() + 1);
        CHECK(rows[0] == std::vector<std::string>{"t", "num_active_aux", "predicted", "actual", "step_loss",
                                                  "cum_accuracy", "cum_loss"});
        double loss = 0.0;
        std::size_t correct = 0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            loss += real(rows[i][4]);
            correct += rows[i][2] == rows[i][3] ? 1 : 0;
            CHECK(std::stoul(rows[i][1]) <= 12);
        }
        const double n = static_cast<double>(rows.size() - 1);
        CHECK(loss / n == r.metrics.avg_loss());
        CHECK(static_cast<double>(correct) / n == r.metrics.avg_accuracy());
        CHECK(real(rows.back()[6]) == r.metrics.avg_loss());
        CHECK(real(rows.back()[5]) == r.metrics.avg_accuracy());
    }

    const auto summary = read_csv(cfg.out_dir / "summary_auxnet_B12_p0.7.csv");
    REQUIRE(summary.size() == 5);
    CHECK(summary[0][0] == "mode");
    const double acc_mean = (real(summary[1][4]) + real(summary[2][4])) / 2.0;
    CHECK(summary[3][3] == "mean");
    CHECK(real(summary[3][4]) == acc_mean);
    CHECK(summary[4][3] == "std");
    std::filesystem::remove_all(cfg.out_dir);
}

TEST_CASE("thread count does not change results") {
    ExperimentConfig cfg;
    cfg.network = small_network();
    cfg.p = 0.5;
    cfg.seeds = {0, 1, 2};
    cfg.threads = 1;
    const auto serial = run_experiment(cfg, bundled());
    cfg.threads = 3;
    const auto parallel = run_experiment(cfg, bundled());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].seed == parallel[i].seed);
        CHECK(serial[i].metrics.avg_loss() == parallel[i].metrics.avg_loss());
        CHECK(serial[i].metrics.avg_accuracy() == parallel[i].metrics.avg_accuracy());
    }
}

TEST_CASE("schedule replay reproduces a run") {
    const auto dir = fresh_dir("auxnet_harness_schedule");
    std::filesystem::create_directories(dir);
    ExperimentConfig cfg;
    cfg.network = small_network();
    cfg.p = 0.6;
    cfg.seeds = {9};
    cfg.schedule_out = dir / "schedule.txt";
    const auto first = run_experiment(cfg, bundled());
    cfg.schedule_out.reset();
    cfg.schedule_in = dir / "schedule.txt";
    cfg.p = 0.1;  // ignored when replaying
    const auto second = run_experiment(cfg, bundled());
    CHECK(first[0].metrics.avg_loss() == second[0].metrics.avg_loss());
    std::filesystem::remove_all(dir);
}

TEST_CASE("degenerate sweeps agree with run_experiment") {
    ExperimentConfig cfg;
    cfg.network = small_network();
    cfg.p = 0.8;
    cfg.seeds = {5, 6};
    const auto runs = run_experiment(cfg, bundled());
    const auto rows = sweep_p(cfg, bundled(), {0.8});
    REQUIRE(rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(rows[i].seed == runs[i].seed);
        CHECK(rows[i].avg_loss == runs[i].metrics.avg_loss());
    }

    const auto b_rows = sweep_b(cfg, bundled(), {12});
    REQUIRE(b_rows.size() == 4);
    ExperimentConfig odl = cfg;
    odl.mode = Mode::kOdl;
    odl.base_features = 12;
    const auto odl_runs = run_experiment(odl, bundled());
    for (const auto& r : b_rows) {
        const auto& ref = r.model == "odl" ? odl_runs : runs;
        const std::size_t k = r.seed == 5 ? 0 : 1;
        CHECK(r.avg_loss == ref[k].metrics.avg_loss());
    }
    const auto means = summarize(b_rows);
    REQUIRE(means.size() == 2);
}

TEST_CASE("contract violations") {
    ExperimentConfig cfg;
    cfg.network = small_network();
    cfg.base_features = 24;
    CHECK_THROWS_AS(run_experiment(cfg, bundled()), ContractError);
    CHECK_THROWS_AS(sweep_b(cfg, bundled(), {24}), ContractError);
    CHECK_THROWS_AS(sweep_b(cfg, bundled(), {0}), ContractError);
    cfg.base_features = 12;
    CHECK_THROWS_AS(sweep_p(cfg, bundled(), {1.2}), ContractError);
    cfg.seeds.clear();
    CHECK_THROWS_AS(run_experiment(cfg, bundled()), ContractError);

    ExperimentConfig odl;
    odl.network = small_network();
    odl.mode = Mode::kOdl;
    odl.base_features = 0;
    odl.seeds = {0};
    odl.out_dir = fresh_dir("auxnet_harness_odl");
    run_experiment(odl, bundled());
    CHECK(std::filesystem::exists(odl.out_dir / "summary_odl_B24.csv"));
    std::filesystem::remove_all(odl.out_dir);
}

}
