#include "doctest.h"

#include "cde/errors.hpp"
#include "cde/oracle.hpp"
#include "cde/sumrate.hpp"
#include "fixtures.hpp"

using namespace cde;
using namespace cde::sumrate;
using fixtures::co;

TEST_CASE("v values") {
    const auto inst = fixtures::eight_packet();
    EvalContext ctx;
    CHECK(v_value(ctx, inst, 6, co({1, 3})) == 4);
    CHECK(ctx.gamma() == 1);
    CHECK(v_value(ctx, inst, 6, co({1, 3})) + v_value(ctx, inst, 6, co({2})) + v_value(ctx, inst, 6, co({4})) == 7);
    CHECK(v_value(ctx, inst, 8, inst.clients()) == 8);
}

TEST_CASE("x values") {
    const auto inst = fixtures::eight_packet();
    EvalContext ctx;
    const std::vector<Coalition> y12{co({1}), co({2})};
    const std::vector<Coalition> y13{co({1}), co({3})};
    CHECK(x_value(ctx, inst, 6, y12) == -1);
    CHECK(x_value(ctx, inst, 6, y13) == -3);

    const Instance disjoint(4, {{1, 2}, {3}, {4}});
    const std::vector<Coalition> y{co({1}), co({2})};
    CHECK(x_value(ctx, disjoint, 4, y) == 0);

    const std::vector<Coalition> overlap{co({1, 2}), co({2})};
    CHECK_THROWS_AS(x_value(ctx, inst, 6, overlap), InvalidArgument);
    const std::vector<Coalition> lone{co({1})};
    CHECK_THROWS_AS(x_value(ctx, inst, 6, lone), InvalidArgument);
}

TEST_CASE("local recovery on the worked examples") {
    EvalContext ctx;
    const auto four_client = fixtures::four_client();
    const auto s123 = local_recovery(ctx, four_client, co({1, 2, 3}));
    CHECK(s123.alpha_star == 5);
    CHECK(s123.minimizer_partition.str() == "{{1},{2},{3}}");
    CHECK(s123.delta_alpha == 1);

    const auto all = local_recovery(ctx, four_client, four_client.clients());
    CHECK(all.alpha_star == 5);
    CHECK(all.alpha_frac == Rational(13, 3));
    REQUIRE(all.argmax_partitions.size() == 1);
    CHECK(all.argmax_partitions.front().str() == "{{1},{2},{3},{4}}");

    const auto pair13 = local_recovery(ctx, fixtures::eight_packet(), co({1, 3}));
    CHECK(pair13.alpha_star == 1);
    CHECK(pair13.alpha_frac == Rational(1));

    CHECK_THROWS_AS(local_recovery(ctx, four_client, co({2})), InvalidArgument);
}

TEST_CASE("per-block allocation") {
    EvalContext ctx;
    const auto four_client = fixtures::four_client();
    const auto s = co({1, 2, 3});
    const auto res = local_recovery(ctx, four_client, s);

    using Alloc = std::vector<std::pair<Coalition, std::int64_t>>;
    CHECK(prop1_allocate(ctx, four_client, s, res, co({3})) == Alloc{{co({1}), 3}, {co({2}), 2}, {co({3}), 0}});
    CHECK(prop1_allocate(ctx, four_client, s, res, co({1})) == Alloc{{co({1}), 2}, {co({2}), 2}, {co({3}), 1}});
    CHECK_THROWS_AS(prop1_allocate(ctx, four_client, s, res, co({4})), InvalidArgument);

    const auto eight_packet = fixtures::eight_packet();
    const auto r13 = local_recovery(ctx, eight_packet, co({1, 3}));
    for (const auto& pick : {co({1}), co({3})})
        CHECK(prop1_allocate(ctx, eight_packet, co({1, 3}), r13, pick) == Alloc{{co({1}), 0}, {co({3}), 1}});

    // disjoint singletons: every partition's budget is exactly alpha*
    const Instance tight(3, {{1}, {2}, {3}});
    const auto rt = local_recovery(ctx, tight, Coalition::all(3));
    CHECK(rt.delta_alpha == 0);
}

TEST_CASE("lower bound") {
    EvalContext ctx;
    CHECK(lower_bound(ctx, fixtures::four_client()) == 5);
    CHECK(lower_bound(ctx, fixtures::eight_packet()) == 6);
    CHECK(lower_bound(ctx, Instance(2, {{1}, {2}})) == 2);
    CHECK(two_partition_bound(ctx, fixtures::eight_packet()) == 6);
}

namespace {

// Every sub-family of the allocation's blocks must receive what it misses from the rest of S.
bool allocation_feasible(EvalContext& ctx, const Instance& inst, const Coalition& s,
                         const std::vector<std::pair<Coalition, std::int64_t>>& alloc) {
    const auto n = alloc.size();
    const int hs = union_size(ctx, inst, s);
    for (std::uint32_t mask = 1; mask + 1 < (1U << n); ++mask) {
        Coalition x, rest;
        std::int64_t rx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto& side = (mask >> i & 1U) ? x : rest;
            side = side.empty() ? alloc[i].first : side.united(alloc[i].first);
            if (mask >> i & 1U) rx += alloc[i].second;
        }
        if (rx < hs - union_size(ctx, inst, rest)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("local recovery properties on random instances") {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        const int k = 3 + static_cast<int>(seed % 5);
        const auto inst = random_instance(k, 4 + static_cast<int>(seed % 9), 0.5, seed + 77);
        EvalContext ctx;
        const auto all = local_recovery(ctx, inst, inst.clients());
        CAPTURE(seed);

        REQUIRE(all.alpha_star == all.alpha_frac.ceil());
        REQUIRE(all.delta_alpha >= 0);
        REQUIRE(lower_bound(ctx, inst) <= all.alpha_star);
        REQUIRE(two_partition_bound(ctx, inst) <= all.alpha_star);

        // alpha* is the least integer meeting every partition's budget
        bool tight = false;
        for (const auto& w : oracle::partitions(inst.clients(), 2, static_cast<std::size_t>(k))) {
            std::int64_t sum_h = 0;
            for (const auto& x : w) sum_h += union_size(ctx, inst, x);
            const auto blocks = static_cast<std::int64_t>(w.size());
            REQUIRE(all.alpha_star <= blocks * (all.alpha_star - inst.num_packets()) + sum_h);
            tight = tight || all.alpha_star - 1 > blocks * (all.alpha_star - 1 - inst.num_packets()) + sum_h;
        }
        REQUIRE(tight);

        // any block that can absorb the excess yields a feasible allocation summing to alpha*
        for (const auto& x : all.minimizer_partition) {
            std::vector<std::pair<Coalition, std::int64_t>> alloc;
            try {
                alloc = prop1_allocate(ctx, inst, inst.clients(), all, x);
            } catch (const InvalidArgument&) {
                continue;
            }
            std::int64_t sum = 0;
            for (const auto& [b, r] : alloc) sum += r;
            REQUIRE(sum == all.alpha_star);
            REQUIRE(allocation_feasible(ctx, inst, inst.clients(), alloc));
        }
    }
}

TEST_CASE("evaluation counts are reproducible") {
    const auto inst = random_instance(6, 15, 0.5, 4242);
    EvalContext a, b;
    local_recovery(a, inst, inst.clients());
    local_recovery(b, inst, inst.clients());
    CHECK(a.gamma() == b.gamma());
    CHECK(a.gamma() > 0);
}
