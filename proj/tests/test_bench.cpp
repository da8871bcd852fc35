#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cde/bench.hpp"
#include "cde/errors.hpp"

using namespace cde;
using namespace cde::bench;

TEST_CASE("one record for a single client count and repetition") {
    BenchConfig cfg;
    cfg.min_clients = cfg.max_clients = 5;
    cfg.reps = 1;
    const auto recs = run_bench(cfg);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].clients == 5);
    CHECK(recs[0].packets == 50);
    CHECK(recs[0].gamma_count > 0);
    CHECK(recs[0].alpha_star >= recs[0].lower_bound);
}

TEST_CASE("records come in client-count then repetition order, whatever the worker count") {
    BenchConfig cfg;
    cfg.packets = 20;
    cfg.min_clients = 3;
    cfg.max_clients = 12;
    cfg.reps = 3;
    cfg.timing = false;
    const auto one = run_bench(cfg);
    cfg.jobs = 4;
    const auto four = run_bench(cfg);
    REQUIRE(one.size() == 30);
    CHECK(to_csv(one) == to_csv(four));
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].clients == 3 + static_cast<int>(i / 3));
        CHECK(one[i].rep == static_cast<int>(i % 3));
        CHECK(one[i].wall_ns == 0);
    }
}

TEST_CASE("csv layout") {
    BenchConfig cfg;
    cfg.packets = 10;
    cfg.min_clients = 4;
    cfg.max_clients = 5;
    cfg.reps = 2;
    cfg.timing = false;
    const auto csv = to_csv(run_bench(cfg));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "K,L,rep,seed,alpha_star,gamma_count,wall_ns");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 6);
    }
    CHECK(rows == 4);
}

TEST_CASE("seeds differ across cells") {
    CHECK(instance_seed(1, 5, 0) != instance_seed(1, 5, 1));
    CHECK(instance_seed(1, 5, 0) != instance_seed(1, 6, 0));
    CHECK(instance_seed(1, 5, 0) != instance_seed(2, 5, 0));
}

TEST_CASE("slope fit recovers a power law") {
    std::map<int, double> m;
    for (int k = 5; k <= 60; ++k) m[k] = 3.0 * std::pow(k, 2.5);
    const auto fit = loglog_slope(m);
    CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK_THROWS_AS(loglog_slope({{5, 1.0}}), InvalidArgument);
}

TEST_CASE("bad ranges are rejected") {
    BenchConfig cfg;
    cfg.min_clients = 1;
    CHECK_THROWS_AS(run_bench(cfg), InvalidArgument);
    cfg.min_clients = 10;
    cfg.max_clients = 9;
    CHECK_THROWS_AS(run_bench(cfg), InvalidArgument);
}
