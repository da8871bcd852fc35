#include "cde/oracle.hpp"

#include <limits>

#include "cde/errors.hpp"
#include "cde/sumrate.hpp"

namespace cde::oracle {

namespace {

void check_rates(const Instance& instance, const RateVector& rates) {
    if (rates.size() != static_cast<std::size_t>(instance.num_clients()))
        throw InvalidArgument("rate vector has " + std::to_string(rates.size()) + " entries, instance has " +
                              std::to_string(instance.num_clients()) + " clients");
    for (auto r : rates)
        if (r < 0) throw InvalidArgument("negative rate");
}

void check_cut_limit(const Instance& instance, int max_clients) {
    if (instance.num_clients() > max_clients)
        throw LimitExceeded("cut check enumerates 2^K sets and is limited to K <= " + std::to_string(max_clients) +
                            "; use the random coding simulator for larger instances");
}

Coalition from_mask(std::uint32_t mask, int k) {
    std::vector<ClientId> m;
    for (int j = 0; j < k; ++j)
        if ((mask >> j) & 1U) m.push_back(j);
    return Coalition(std::move(m));
}

}  // namespace

FeasibilityReport is_feasible(EvalContext& ctx, const Instance& instance, const RateVector& rates,
                              int max_clients) {
    check_rates(instance, rates);
    check_cut_limit(instance, max_clients);
    const int k = instance.num_clients();
    const std::int64_t l = instance.num_packets();
    const std::uint32_t full = (1U << k) - 1U;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        const Coalition x = from_mask(mask, k);
        const Coalition rest = from_mask(full & ~mask, k);
        const std::int64_t required = l - union_size(ctx, instance, rest);
        const std::int64_t actual = rate_of(rates, x);
        if (actual < required) return {false, CutViolation{x, required, actual}};
    }
    return {};
}

FeasibilityReport is_feasible_budget_form(EvalContext& ctx, const Instance& instance, const RateVector& rates,
                                          int max_clients) {
    check_rates(instance, rates);
    check_cut_limit(instance, max_clients);
    const int k = instance.num_clients();
    const std::int64_t l = instance.num_packets();
    const std::int64_t alpha = rate_sum(rates);
    const std::uint32_t full = (1U << k) - 1U;
    // Walk complements so the first reported cut matches is_feasible's order.
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        const Coalition y = from_mask(full & ~mask, k);
        const std::int64_t budget = alpha - l + union_size(ctx, instance, y);
        const std::int64_t used = rate_of(rates, y);
        if (used > budget) {
            const Coalition x = from_mask(mask, k);
            return {false, CutViolation{x, alpha - budget, alpha - used}};
        }
    }
    return {};
}

std::int64_t min_sum_rate(EvalContext& ctx, const Instance& instance, int max_clients) {
    if (instance.num_clients() > max_clients)
        throw LimitExceeded("exhaustive minimum sum-rate is limited to K <= " + std::to_string(max_clients));
    return sumrate::local_recovery(ctx, instance, instance.clients()).alpha_star;
}

OptimalityReport verify_optimal(EvalContext& ctx, const Instance& instance, const RateVector& rates) {
    OptimalityReport rep;
    rep.alpha_star = min_sum_rate(ctx, instance);
    const auto f = is_feasible(ctx, instance, rates);
    rep.feasible = f.feasible;
    rep.violated = f.violated;
    rep.sum = rate_sum(rates);
    rep.optimal = rep.feasible && rep.sum == rep.alpha_star;
    return rep;
}

std::int64_t closure_cost(EvalContext& ctx, const Instance& instance, const Coalition& m, ClientId u) {
    return union_size(ctx, instance, m.united(Coalition{u})) - union_size(ctx, instance, Coalition{u});
}

std::vector<ClosureStep> queyranne_closure(EvalContext& ctx, const Instance& instance, const Coalition& m0,
                                           ClosureTieBreak tie_break) {
    const Coalition all = instance.clients();
    if (m0.empty()) throw InvalidArgument("closure needs a nonempty start set");
    for (ClientId j : m0)
        if (j >= instance.num_clients()) throw InvalidInstance("closure start set names an unknown client");
    if (m0 == all) throw InvalidArgument("closure start set must be a proper subset of the clients");

    std::vector<ClosureStep> steps;
    Coalition m = m0;
    while (m != all) {
        std::optional<ClientId> best;
        std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
        for (ClientId u : all.minus(m)) {
            const auto c = closure_cost(ctx, instance, m, u);
            const bool better = c < best_cost || (c == best_cost && tie_break == ClosureTieBreak::highest_id);
            if (!best || better) {
                best = u;
                best_cost = c;
            }
        }
        m = m.united(Coalition{*best});
        steps.push_back({*best, best_cost, m});
    }
    return steps;
}

MinimalityReport partition_minimality_check(EvalContext& ctx, const Instance& instance, const Partition& w,
                                            std::int64_t alpha) {
    const Coalition all = instance.clients();
    if (!w.covers(all)) throw InvalidArgument("partition " + w.str() + " does not cover the client set");
    if (instance.num_clients() > kMaxEnumerationClients)
        throw LimitExceeded("partition minimality check is limited to K <= " +
                            std::to_string(kMaxEnumerationClients));

    MinimalityReport rep;
    for (const auto& x : w) rep.value += sumrate::v_value(ctx, instance, alpha, x);

    PartitionStream stream(all, w.size(), w.size());
    while (stream.next()) {
        std::int64_t value = 0;
        for (const auto& x : stream.blocks()) value += sumrate::v_value(ctx, instance, alpha, x);
        if (value < rep.value && (!rep.witness || value < rep.witness_value)) {
            rep.minimal = false;
            rep.witness = stream.partition();
            rep.witness_value = value;
        }
    }
    return rep;
}

}  // namespace cde::oracle
