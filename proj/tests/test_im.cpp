#include "doctest.h"

#include "cde/im.hpp"
#include "cde/oracle.hpp"
#include "cde/sumrate.hpp"
#include "fixtures.hpp"

using namespace cde;
using fixtures::co;

TEST_CASE("merge candidate on the eight-packet example") {
    const auto inst = fixtures::eight_packet();
    EvalContext ctx;
    const auto w = Partition::singletons(4);
    const auto cand = im::find_merge_cand(ctx, inst, w, 6);
    REQUIRE(cand);
    CHECK(cand->blocks == std::vector<Coalition>{co({1}), co({3})});
    CHECK(cand->x_value == -3);

    // all 2-subsets: only {1,2}, {1,3}, {2,3} are beneficial
    std::map<std::string, std::int64_t> xs;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            const std::vector<Coalition> y{Coalition{a}, Coalition{b}};
            xs[Coalition{a, b}.str()] = sumrate::x_value(ctx, inst, 6, y);
        }
    CHECK(xs["{1,2}"] == -1);
    CHECK(xs["{1,3}"] == -3);
    CHECK(xs["{2,3}"] == -1);
    CHECK(xs["{1,4}"] >= 0);
    CHECK(xs["{2,4}"] >= 0);
    CHECK(xs["{3,4}"] >= 0);
}

TEST_CASE("merge candidate on the four-client example needs three blocks") {
    const auto inst = fixtures::four_client();
    EvalContext ctx;
    const auto cand = im::find_merge_cand(ctx, inst, Partition::singletons(4), 5);
    REQUIRE(cand);
    CHECK(cand->blocks.size() == 3);
    CHECK(cand->blocks == std::vector<Coalition>{co({1}), co({2}), co({3})});
    CHECK(cand->x_value == -1);

    // the four 3-subsets tie; the lexicographic rule decides
    for (int skip = 0; skip < 4; ++skip) {
        std::vector<Coalition> y;
        for (int j = 0; j < 4; ++j)
            if (j != skip) y.push_back(Coalition{j});
        CHECK(sumrate::x_value(ctx, inst, 5, y) == -1);
    }
}

TEST_CASE("no merge candidate") {
    EvalContext ctx;
    const Instance disjoint(3, {{1}, {2}, {3}});
    CHECK_FALSE(im::find_merge_cand(ctx, disjoint, Partition::singletons(3), 3));
    CHECK_FALSE(im::find_merge_cand(ctx, fixtures::four_client(), Partition{co({1, 2, 3}), co({4})}, 5));
}

TEST_CASE("rate updates on the eight-packet example") {
    const auto inst = fixtures::eight_packet();
    EvalContext ctx;
    const im::TieBreakConfig cfg;
    const auto first = im::update_rates(ctx, inst, {0, 0, 0, 0}, {co({1}), co({3})}, cfg);
    CHECK(first.rates == RateVector{0, 0, 1, 0});
    CHECK(first.alpha_tilde == 1);
    CHECK(first.delta_alpha == 0);

    const auto second = im::update_rates(ctx, inst, first.rates, {co({1, 3}), co({2})}, cfg);
    CHECK(second.rates == RateVector{2, 1, 1, 0});
    REQUIRE(second.updates.size() == 2);
    CHECK(second.updates[0].increment == 2);
    CHECK(second.updates[0].client == 0);
}

TEST_CASE("rate update with every target already met leaves rates alone") {
    const auto inst = fixtures::four_client();
    EvalContext ctx;
    const auto up = im::update_rates(ctx, inst, {3, 2, 0, 0}, {co({1, 2, 3}), co({4})}, {});
    CHECK(up.rates == RateVector{3, 2, 0, 0});
    for (const auto& u : up.updates) CHECK(u.increment == 0);
}

TEST_CASE("solve on the four-client example") {
    const auto inst = fixtures::four_client();
    for (std::int64_t a0 : {0, 4, 5}) {
        const auto res = im::solve(inst, a0);
        CHECK(res.alpha == 5);
        CHECK(rate_sum(res.rates) == 5);
        EvalContext ctx;
        CHECK(oracle::is_feasible(ctx, inst, res.rates).feasible);
    }
    CHECK(im::solve(inst, 0).rates == RateVector{3, 2, 0, 0});
    CHECK(im::solve(inst, 0, im::TieBreakConfig::worked_example()).rates == RateVector{3, 2, 0, 0});
}

TEST_CASE("a starting alpha below the lower bound is raised on the singleton partition") {
    const auto res = im::solve(fixtures::four_client(), 4);
    const auto& init = std::get<im::AlphaInitialized>(res.trace.entries.front().event);
    CHECK(init.requested == 4);
    CHECK(init.lower_bound == 5);
    CHECK(init.alpha == 5);

    std::vector<im::AlphaRaised> raised;
    for (const auto& e : res.trace.entries)
        if (const auto* r = std::get_if<im::AlphaRaised>(&e.event)) raised.push_back(*r);
    REQUIRE(raised.size() == 1);
    CHECK(raised[0].from == 4);
    CHECK(raised[0].to == 5);
    CHECK(raised[0].partition == Partition::singletons(4));
    CHECK(raised[0].budget == 3);
    CHECK(raised[0].lifted);
    CHECK(res.restarts == 0);
    CHECK(res.trace.to_text().find("alpha_raised 4->5 partition={{1},{2},{3},{4}} budget=3") != std::string::npos);

    // the split {4} | {1,2,3} is what lifts 5 to 6 on the eight-packet example
    const auto eight_packet = im::solve(fixtures::eight_packet(), 5);
    const auto& lift = std::get<im::AlphaRaised>(eight_packet.trace.entries.at(1).event);
    CHECK(lift.partition.str() == "{{1,2,3},{4}}");
    CHECK(lift.budget == 4);

    // alpha0 = 0 means no request: the bound applies silently
    for (const auto& e : im::solve(fixtures::four_client(), 0).trace.entries)
        CHECK_FALSE(std::holds_alternative<im::AlphaRaised>(e.event));
}

TEST_CASE("solve on the eight-packet example") {
    const auto inst = fixtures::eight_packet();
    const auto def = im::solve(inst, 6);
    CHECK(def.alpha == 6);
    CHECK(def.rates == RateVector{3, 1, 1, 1});
    EvalContext ctx;
    CHECK(oracle::is_feasible(ctx, inst, def.rates).feasible);

    const auto worked = im::solve(inst, 6, im::TieBreakConfig::worked_example());
    CHECK(worked.rates == RateVector{2, 2, 1, 1});
}

TEST_CASE("merge sequence on the five-client example") {
    const auto res = im::solve(fixtures::five_client(), 0);
    std::vector<std::string> merges;
    for (const auto& e : res.trace.entries)
        if (const auto* m = std::get_if<im::Merged>(&e.event)) merges.push_back(m->after.str());
    REQUIRE(merges.size() >= 2);
    CHECK(merges[0] == "{{1},{2},{3,4},{5}}");
    CHECK(merges[1] == "{{1},{2,3,4},{5}}");
    CHECK(res.alpha == 7);
}

TEST_CASE("traces replay to the returned rates and record the configuration") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto inst = random_instance(3 + static_cast<int>(seed % 5), 10, 0.5, seed);
        for (const auto& cfg : {im::TieBreakConfig{}, im::TieBreakConfig::worked_example()}) {
            const auto res = im::solve(inst, 0, cfg);
            REQUIRE(res.trace.replay(inst.num_clients()) == res.rates);
            REQUIRE(res.trace.config.str() == cfg.str());
        }
    }
    const auto text = im::solve(fixtures::four_client(), 0).trace.to_text();
    CHECK(text.rfind("config ", 0) == 0);
    CHECK(text.find("k_cap=none") != std::string::npos);
}

TEST_CASE("solve is deterministic including evaluation counts") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = random_instance(6, 12, 0.5, seed);
        const auto a = im::solve(inst, 0);
        const auto b = im::solve(inst, 0);
        REQUIRE(a.rates == b.rates);
        REQUIRE(a.gamma == b.gamma);
        REQUIRE(a.trace.to_text() == b.trace.to_text());
    }
}

TEST_CASE("merges are beneficial and restarts raise alpha one step at a time") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const auto inst = random_instance(3 + static_cast<int>(seed % 5), 4 + static_cast<int>(seed % 9), 0.5, seed);
        EvalContext oc;
        const auto star = oracle::min_sum_rate(oc, inst);
        const auto res = im::solve(inst, 0);
        CAPTURE(seed);
        for (const auto& e : res.trace.entries) {
            if (const auto* m = std::get_if<im::Merged>(&e.event)) {
                REQUIRE(m->candidate.x_value < 0);
                REQUIRE(m->alpha <= star);
            }
            if (const auto* r = std::get_if<im::AlphaRaised>(&e.event)) {
                REQUIRE(r->to == r->from + 1);
                REQUIRE(r->budget < r->from);
                REQUIRE(r->to <= star);
            }
        }
        REQUIRE(res.alpha == star);
    }
}

TEST_CASE("seeded random client choice stays optimal and reproducible") {
    im::TieBreakConfig cfg;
    cfg.client_in_block = im::ClientRule::seeded_random;
    cfg.seed = 17;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto inst = random_instance(5, 9, 0.5, seed);
        const auto a = im::solve(inst, 0, cfg);
        const auto b = im::solve(inst, 0, cfg);
        REQUIRE(a.rates == b.rates);
        EvalContext ctx;
        REQUIRE(oracle::verify_optimal(ctx, inst, a.rates).optimal);
    }
}

TEST_CASE("a starting alpha above the optimum is kept") {
    const auto res = im::solve(fixtures::four_client(), 7);
    CHECK(res.alpha >= 7);
    EvalContext ctx;
    CHECK(oracle::is_feasible(ctx, fixtures::four_client(), res.rates).feasible);
}

TEST_CASE("json trace export") {
    const auto json = im::solve(fixtures::four_client(), 4).trace.to_json();
    CHECK(json.find("\"init\"") != std::string::npos);
    CHECK(json.find("\"lower_bound\"") != std::string::npos);
    CHECK(json.find("\"merged\"") != std::string::npos);
}
