#include <doctest.h>

#include <nlohmann/json.hpp>

#include "whyprov/harness.hpp"

using namespace whyprov;

TEST_CASE("differential sweep against the exhaustive oracle passes") {
    SweepReport report = sweep_unwhy({"tiny-linear", "tiny-nonlinear"}, 30, 1234);
    CHECK(report.passed());
    CHECK(report.instances == 30);
    CHECK(report.comparisons > 0);
}

TEST_CASE("reduction sweep passes, including the pinned endpoints") {
    SweepReport report = sweep_reduction(10, 99);
    CHECK(report.passed());
    CHECK(report.comparisons >= 10);
}

TEST_CASE("sweep reports serialize to the documented JSON shape") {
    SweepReport report = sweep_unwhy({"tiny-linear"}, 3, 7);
    nlohmann::json j = nlohmann::json::parse(report.to_json());
    CHECK(j.contains("instances"));
    CHECK(j.contains("comparisons"));
    CHECK(j.contains("skipped"));
    CHECK(j.contains("mismatches"));
    CHECK(j.contains("total_seconds"));
    CHECK(j.contains("passed"));
    CHECK(j["instances"].get<std::size_t>() == 3);
    CHECK(j["passed"].get<bool>());
}

TEST_CASE("sweeps are deterministic per seed") {
    SweepReport a = sweep_unwhy({"tiny-linear"}, 5, 2024);
    SweepReport b = sweep_unwhy({"tiny-linear"}, 5, 2024);
    CHECK(a.instances == b.instances);
    CHECK(a.comparisons == b.comparisons);
    CHECK(a.skipped == b.skipped);
    CHECK(a.passed() == b.passed());
}
