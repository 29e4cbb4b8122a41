#include <string>

#include "doctest.h"
#include "sparselab/experiments.hpp"

using namespace sparselab;

TEST_CASE("config validation") {
    CHECK(check_config(R"({"experiment":"vdc"})").exit_code == 0);
    CHECK(check_config(R"({"experiment":"unknown"})").exit_code == 2);
    CHECK(check_config("not json").exit_code == 2);
    CHECK(check_config(R"({"experiment":"czd","grid":{"s0":5,"cells":1000}})")
              .exit_code == 2);  // cells not divisible by 3*2^s0
    CHECK(check_config(R"({"experiment":"czd","grid":{"s0":5,"cells":1536}})")
              .exit_code == 0);
}

TEST_CASE("unknown experiments produce no partial output") {
    RunResult r = run_experiment(R"({"experiment":"unknown"})");
    CHECK(r.exit_code == 2);
    CHECK(r.csv.empty());
    CHECK(r.summary_json.empty());
}

TEST_CASE("runs are deterministic for a fixed config") {
    const std::string cfg =
        R"({"experiment":"rm","seed":42,"families":20,"max_members":16})";
    RunResult a = run_experiment(cfg, 1);
    RunResult b = run_experiment(cfg, 2);
    CHECK(a.exit_code == 0);
    CHECK(a.csv == b.csv);
    CHECK(a.summary_json == b.summary_json);

    RunResult c = run_experiment(
        R"({"experiment":"rm","seed":43,"families":20,"max_members":16})", 1);
    CHECK(c.csv != a.csv);
}

TEST_CASE("summaries carry hash, version and invariant flags") {
    RunResult r = run_experiment(
        R"({"experiment":"vdc","degrees":[2],"lambda_count":12})");
    CHECK(r.exit_code == 0);
    CHECK(r.summary_json.find("config_hash") != std::string::npos);
    CHECK(r.summary_json.find(kVersion) != std::string::npos);
    CHECK(r.summary_json.find("vdc_slope_d2") != std::string::npos);
    CHECK(r.csv.rfind("degree,lambda,modulus", 0) == 0);
}

TEST_CASE("config hash is stable and content-sensitive") {
    const auto h1 = config_hash(R"({"experiment":"vdc"})");
    const auto h2 = config_hash(R"({"experiment":"vdc"})");
    const auto h3 = config_hash(R"({"experiment":"rm"})");
    CHECK(h1 == h2);
    CHECK(h1 != h3);
}
