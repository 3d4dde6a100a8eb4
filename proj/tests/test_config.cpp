#include "tsgc/config.hpp"
#include "tsgc/errors.hpp"

#include <doctest.h>

using namespace tsgc;

TEST_SUITE("config") {

TEST_CASE("defaults") {
    const Config cfg = parse_config("", "<empty>");
    CHECK(cfg.seed == 42);
    CHECK(cfg.epsilon_steps == 300);
    CHECK(cfg.tau_count == 7);
    CHECK(cfg.takens_m == 3);
    CHECK(cfg.epochs == 10);
    CHECK(cfg.kfold == 10);
    CHECK(cfg.batch_size == 16);
    CHECK(cfg.lr == doctest::Approx(1e-3));
    CHECK(cfg.chunk_lens == std::vector<int>{200, 300, 400, 500, 600});
    CHECK(cfg.min_resolution == 100);
    CHECK(cfg.simplex_cap == 50000000u);
}

TEST_CASE("key parsing with comments and whitespace") {
    const Config cfg = parse_config(
        "# experiment setup\n"
        "seed = 7\n"
        "  epsilon_steps=120   # trailing comment\n"
        "\n"
        "features = raw , betti\n"
        "chunk_lens = 300\n"
        "tau_list = 0, 0.5, 1.0, 1.5, 2\n",
        "<test>");
    CHECK(cfg.seed == 7);
    CHECK(cfg.epsilon_steps == 120);
    CHECK(cfg.features == std::vector<std::string>{"raw", "betti"});
    CHECK(cfg.chunk_lens == std::vector<int>{300});
    CHECK(cfg.tau_list.size() == 5);
}

TEST_CASE("unknown key rejected by name") {
    try {
        parse_config("lr_scheduel = 0.1\n", "<test>");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("lr_scheduel") != std::string::npos);
    }
}

TEST_CASE("value validation") {
    CHECK_THROWS_AS(parse_config("seed = banana\n", "<t>"), config_error);
    CHECK_THROWS_AS(parse_config("timing = cpu\n", "<t>"), config_error);
    CHECK_THROWS_AS(parse_config("methods = dropout,avg\n", "<t>"), config_error);
    CHECK_THROWS_AS(parse_config("epsilon_steps = 1\n", "<t>"), config_error);
    CHECK_THROWS_AS(parse_config("tau_list = 0,2.5\n", "<t>"), config_error);
    CHECK_THROWS_AS(parse_config("tau_list = 0,1\n", "<t>"), config_error);
    CHECK_THROWS_AS(parse_config("data_kind = bonn\n", "<t>"), config_error); // no data_dir
    CHECK_THROWS_AS(parse_config("just a line\n", "<t>"), config_error);
}

TEST_CASE("class_map and set_map") {
    const Config cfg = parse_config("class_map = C=0, E=1\nset_map = sz=A, xx=E\n", "<t>");
    CHECK(cfg.class_map.size() == 2);
    CHECK(cfg.class_map.at('C') == 0);
    CHECK(cfg.class_map.at('E') == 1);
    CHECK(cfg.set_map.at("sz") == 'A');
    CHECK(cfg.set_map.at("xx") == 'E');
    CHECK_THROWS_AS(parse_config("class_map = AB=0\n", "<t>"), config_error);
    CHECK_THROWS_AS(parse_config("class_map = A=2\n", "<t>"), config_error);
}

} // TEST_SUITE
