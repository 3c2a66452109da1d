#include <filesystem>
#include <sstream>

#include <doctest.h>

#include "auxnet/errors.hpp"
#include "auxnet/stream.hpp"

using namespace auxnet;

namespace {

Dataset toy_dataset(std::size_t rows, std::size_t features) {
    std::ostringstream text;
    for (std::size_t r = 0; r < rows; ++r) {
        text << (r % 2 == 0 ? "1" : "2");
        for (std::size_t f = 0; f < features; ++f) text << '\t' << static_cast<double>(r * 100 + f);
        text << '\n';
    }
    std::istringstream in(text.str());
    return parse_ucr(in, "toy");
}

}  // namespace

TEST_SUITE("stream") {

TEST_CASE("parse_ucr") {
    SUBCASE("tab separated with label remapping") {
        std::istringstream in("2\t0.5\t1.5\n1\t-0.5\t2.5\n# comment\n\n2\t1e-3\t3\n");
        const auto ds = parse_ucr(in);
        CHECK(ds.size() == 3);
        CHECK(ds.num_features == 2);
        CHECK(ds.num_classes == 2);
        CHECK(ds.original_labels == std::vector<std::string>{"1", "2"});
        CHECK(ds.instances[0].label == 1);
        CHECK(ds.instances[1].label == 0);
        CHECK(ds.instances[2].features == Vector{1e-3, 3.0});
    }
    SUBCASE("comma and whitespace separated") {
        std::istringstream comma("1,0.1,0.2\n-1,0.3,0.4\n");
        const auto a = parse_ucr(comma);
        CHECK(a.num_features == 2);
        CHECK(a.original_labels == std::vector<std::string>{"-1", "1"});
        std::istringstream spaces("3  1 2\n10 3 4\n");
        const auto b = parse_ucr(spaces);
        CHECK(b.original_labels == std::vector<std::string>{"3", "10"});
    }
    SUBCASE("ragged row names the line") {
        std::istringstream in("1\t0.1\t0.2\n2\t0.3\n");
        try {
            parse_ucr(in, "bad");
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("bad:2") != std::string::npos);
        }
    }
    SUBCASE("non-numeric value") {
        std::istringstream in("1\t0.1\tx\n");
        CHECK_THROWS_AS(parse_ucr(in), DataError);
    }
    SUBCASE("empty input") {
        std::istringstream in("");
        CHECK_THROWS_AS(parse_ucr(in), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_ucr("/nonexistent/auxnet.tsv"), IoError);
    }
}

TEST_CASE("bundled dataset") {
    const auto ds = load_ucr(AUXNET_DATASET);
    CHECK(ds.size() == 1096);
    CHECK(ds.num_features == 24);
    CHECK(ds.num_classes == 2);
}

TEST_CASE("make_schedule") {
    SUBCASE("p = 1 and p = 0") {
        const auto all = make_schedule(50, 7, 1.0, 3);
        const auto none = make_schedule(50, 7, 0.0, 3);
        for (std::size_t t = 0; t < 50; ++t) {
            CHECK(all.available_at(t) == 7);
            CHECK(none.available_at(t) == 0);
        }
    }
    SUBCASE("empirical rate near p") {
        const auto s = make_schedule(1096, 12, 0.9, 0);
        double total = 0.0;
        for (std::size_t t = 0; t < s.size(); ++t) total += static_cast<double>(s.available_at(t));
        const double rate = total / (1096.0 * 12.0);
        CHECK(rate >= 0.873);
        CHECK(rate <= 0.927);
    }
    SUBCASE("same seed same schedule") {
        CHECK(make_schedule(100, 5, 0.5, 42) == make_schedule(100, 5, 0.5, 42));
        CHECK_FALSE(make_schedule(100, 5, 0.5, 42) == make_schedule(100, 5, 0.5, 43));
    }
    SUBCASE("p outside [0, 1]") {
        CHECK_THROWS_AS(make_schedule(10, 2, 1.5, 0), ContractError);
        CHECK_THROWS_AS(make_schedule(10, 2, -0.1, 0), ContractError);
    }
}

TEST_CASE("schedule files round-trip") {
    const auto s = make_schedule(40, 6, 0.6, 77);
    std::stringstream io;
    write_schedule(io, s);
    CHECK(read_schedule(io) == s);

    const auto path = std::filesystem::temp_directory_path() / "auxnet_schedule_roundtrip.txt";
    save_schedule(path, s);
    CHECK(load_schedule(path) == s);
    std::filesystem::remove(path);

    std::istringstream no_header("0 1\n");
    CHECK_THROWS_AS(read_schedule(no_header), DataError);
    std::istringstream bad_row("# p=0.5 seed=1 A=2\n0 2\n");
    CHECK_THROWS_AS(read_schedule(bad_row), DataError);
    std::istringstream short_row("# p=0.5 seed=1 A=2\n0\n");
    CHECK_THROWS_AS(read_schedule(short_row), DataError);
}

TEST_CASE("split_stream") {
    const auto ds = toy_dataset(30, 24);
    SUBCASE("invariants") {
        const auto sched = make_schedule(ds.size(), 12, 0.5, 5);
        const auto stream = split_stream(ds, 12, sched);
        REQUIRE(stream.size() == ds.size());
        for (std::size_t t = 0; t < stream.size(); ++t) {
            const auto& s = stream[t];
            CHECK(s.t == t);
            CHECK(s.label == ds.instances[t].label);
            CHECK(s.x_base.size() == 12);
            CHECK(s.x_aux.size() == sched.available_at(t));
            CHECK(s.dimension() == 12 + sched.available_at(t));
            for (const auto& [a, v] : s.x_aux) {
                CHECK(sched.masks[t][a]);
                CHECK(v == ds.instances[t].features[12 + a]);
            }
        }
    }
    SUBCASE("extreme base sizes") {
        const auto one_aux = split_stream(ds, 23, make_schedule(ds.size(), 1, 1.0, 0));
        CHECK(one_aux[0].x_aux.size() == 1);
        CHECK(one_aux[0].x_aux.at(0) == ds.instances[0].features[23]);
        const auto one_base = split_stream(ds, 1, make_schedule(ds.size(), 23, 1.0, 0));
        CHECK(one_base[4].x_base == Vector{ds.instances[4].features[0]});
    }
    SUBCASE("contract violations") {
        CHECK_THROWS_AS(split_stream(ds, 24, make_schedule(ds.size(), 0, 1.0, 0)), ContractError);
        CHECK_THROWS_AS(split_stream(ds, 0, make_schedule(ds.size(), 24, 1.0, 0)), ContractError);
        CHECK_THROWS_AS(split_stream(ds, 12, make_schedule(ds.size(), 11, 1.0, 0)), ContractError);
        CHECK_THROWS_AS(split_stream(ds, 12, make_schedule(ds.size() - 1, 12, 1.0, 0)), ContractError);
    }
    SUBCASE("base_only_stream") {
        const auto full = base_only_stream(ds, 24);
        CHECK(full[3].x_base == ds.instances[3].features);
        CHECK(full[3].x_aux.empty());
        CHECK(base_only_stream(ds, 12)[0].x_base.size() == 12);
        CHECK_THROWS_AS(base_only_stream(ds, 25), ContractError);
    }
}

}
