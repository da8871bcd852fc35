#include "cde/im.hpp"

#include <algorithm>
#include <numeric>

#include "cde/oracle.hpp"
#include "cde/rational.hpp"
#include "cde/sumrate.hpp"

namespace cde::im {

TieBreakConfig TieBreakConfig::worked_example() {
    TieBreakConfig cfg;
    cfg.excess_block = ExcessBlockRule::highest_min_index_with_slack;
    cfg.client_in_block = ClientRule::least_loaded;
    return cfg;
}

std::string TieBreakConfig::str() const {
    std::string s = "candidates=lexicographic excess=";
    s += excess_block == ExcessBlockRule::lowest_index ? "lowest-index" : "highest-min-index-with-slack";
    s += " client=";
    switch (client_in_block) {
        case ClientRule::lowest_index: s += "lowest-index"; break;
        case ClientRule::seeded_random: s += "seeded-random"; break;
        case ClientRule::least_loaded: s += "least-loaded"; break;
    }
    s += " k_cap=" + (k_cap ? std::to_string(*k_cap) : std::string("none"));
    s += " seed=" + std::to_string(seed);
    return s;
}

// ---------------------------------------------------------------- FindMergeCand

std::optional<MergeCandidate> find_merge_cand(EvalContext& ctx, const Instance& instance, const Partition& w,
                                              std::int64_t alpha, std::optional<std::size_t> k_cap) {
    const std::size_t n = w.size();
    if (n <= 2) return std::nullopt;

    std::vector<PacketSet> sets;
    std::vector<std::int64_t> sizes;
    sets.reserve(n);
    for (const auto& x : w) {
        sets.push_back(union_of(instance, x));
        const PacketSet* p = &sets.back();
        sizes.push_back(union_size(ctx, std::span<const PacketSet* const>(&p, 1)));
    }

    const std::int64_t gap = instance.num_packets() - alpha;  // L - alpha
    std::size_t k_max = n - 1;
    if (k_cap) k_max = std::min(k_max, *k_cap);

    std::vector<std::size_t> idx;
    std::vector<const PacketSet*> ptrs;
    for (std::size_t k = 2; k <= k_max; ++k) {
        idx.resize(k);
        ptrs.resize(k);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::optional<MergeCandidate> best;
        for (;;) {
            std::int64_t parts = 0;
            for (std::size_t t = 0; t < k; ++t) {
                ptrs[t] = &sets[idx[t]];
                parts += sizes[idx[t]];
            }
            // X(Y) = v(Y~) - sum v(X) = (k-1)(L-alpha) + |H_Y~| - sum |H_X|
            const std::int64_t x =
                static_cast<std::int64_t>(k - 1) * gap + union_size(ctx, ptrs) - parts;
            if (x < 0 && (!best || x < best->x_value)) {
                if (!best) best.emplace();
                best->block_indices = idx;
                best->x_value = x;
            }
            // next k-combination in lexicographic order
            std::size_t t = k;
            while (t > 0 && idx[t - 1] == n - k + (t - 1)) --t;
            if (t == 0) break;
            ++idx[t - 1];
            for (std::size_t u = t; u < k; ++u) idx[u] = idx[u - 1] + 1;
        }
        if (best) {
            for (auto i : best->block_indices) best->blocks.push_back(w[i]);
            return best;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- UpdateRates

namespace {

ClientId pick_client(const Coalition& block, const RateVector& rates, ClientRule rule, std::mt19937_64* rng,
                     std::uint64_t seed) {
    switch (rule) {
        case ClientRule::lowest_index: return block.min();
        case ClientRule::least_loaded: {
            ClientId best = block.min();
            for (ClientId j : block)
                if (rates[static_cast<std::size_t>(j)] < rates[static_cast<std::size_t>(best)]) best = j;
            return best;
        }
        case ClientRule::seeded_random: {
            std::mt19937_64 local(seed);
            auto& gen = rng ? *rng : local;
            std::uniform_int_distribution<std::size_t> d(0, block.size() - 1);
            return block.members()[d(gen)];
        }
    }
    return block.min();
}

}  // namespace

RateUpdate update_rates(EvalContext& ctx, const Instance& instance, const RateVector& rates,
                        const std::vector<Coalition>& blocks, const TieBreakConfig& cfg, std::mt19937_64* rng) {
    if (blocks.size() < 2) throw InvalidArgument("update_rates needs at least two blocks");
    if (rates.size() != static_cast<std::size_t>(instance.num_clients()))
        throw InvalidArgument("rate vector length does not match the instance");
    Coalition joined = blocks.front();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t k = i + 1; k < blocks.size(); ++k)
            if (blocks[i].intersects(blocks[k])) throw InvalidArgument("update_rates blocks overlap");
        joined = joined.united(blocks[i]);
    }

    const std::int64_t n = static_cast<std::int64_t>(blocks.size());
    const std::int64_t hy = union_size(ctx, instance, joined);
    std::vector<std::int64_t> hx;
    std::int64_t missing = 0;
    for (const auto& b : blocks) {
        hx.push_back(union_size(ctx, instance, b));
        missing += hy - hx.back();
    }

    RateUpdate out;
    out.blocks = blocks;
    out.alpha_tilde = Rational(missing, n - 1).ceil();

    std::vector<std::int64_t> target(blocks.size());
    std::vector<std::int64_t> current(blocks.size());
    std::int64_t budget = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        target[i] = out.alpha_tilde - hy + hx[i];
        current[i] = rate_of(rates, blocks[i]);
        budget += target[i];
    }
    out.delta_alpha = budget - out.alpha_tilde;
    out.rates = rates;

    if (out.delta_alpha > 0) {
        std::optional<std::size_t> chosen;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (target[i] - out.delta_alpha < current[i]) continue;
            if (!chosen) {
                chosen = i;
            } else if (cfg.excess_block == ExcessBlockRule::highest_min_index_with_slack &&
                       blocks[i].min() > blocks[*chosen].min()) {
                chosen = i;
            }
        }
        if (!chosen) {
            throw UpdateRatesError("no block of " + joined.str() + " can absorb the excess of " +
                                       std::to_string(out.delta_alpha) + " (alpha~=" +
                                       std::to_string(out.alpha_tilde) + ")",
                                   out);
        }
        target[*chosen] -= out.delta_alpha;
        out.excess_block = blocks[*chosen];
    }

    for (std::size_t i = 0; i < blocks.size(); ++i) {
        BlockUpdate u;
        u.block = blocks[i];
        u.target = target[i];
        u.rate_before = current[i];
        u.increment = std::max<std::int64_t>(target[i] - current[i], 0);
        u.client = pick_client(blocks[i], out.rates, cfg.client_in_block, rng, cfg.seed);
        out.rates[static_cast<std::size_t>(u.client)] += u.increment;
        out.updates.push_back(std::move(u));
    }
    return out;
}

// ---------------------------------------------------------------- solve

namespace {

std::int64_t partition_budget(EvalContext& ctx, const Instance& instance, const Partition& w, std::int64_t alpha) {
    std::int64_t s = 0;
    for (const auto& x : w) s += sumrate::v_value(ctx, instance, alpha, x);
    return s;
}

}  // namespace

SolveResult solve(const Instance& instance, std::int64_t alpha0, const TieBreakConfig& cfg) {
    EvalContext ctx(cfg.seed);
    return solve(ctx, instance, alpha0, cfg);
}

SolveResult solve(EvalContext& ctx, const Instance& instance, std::int64_t alpha0, const TieBreakConfig& cfg) {
    if (alpha0 < 0) throw InvalidArgument("initial alpha must be nonnegative");
    const int k = instance.num_clients();
    const std::int64_t l = instance.num_packets();
    std::mt19937_64 rng(cfg.seed);

    SolveResult res;
    res.trace.config = cfg;
    auto record = [&](TraceEvent e) { res.trace.entries.push_back({std::move(e), ctx.gamma()}); };

    const auto lbt = sumrate::lower_bound_terms(ctx, instance);
    const std::int64_t lb = lbt.value;
    std::int64_t alpha = std::max(alpha0, lb);
    record(AlphaInitialized{alpha0, lb, alpha});
    // A requested alpha below the bound is lifted one unit at a time, each
    // step naming a partition whose budget falls short. No new evaluations.
    if (alpha0 > 0) {
        for (std::int64_t a = alpha0; a < lb; ++a) {
            if (static_cast<std::int64_t>(k - 1) * a < lbt.missing) {
                record(AlphaRaised{a, a + 1, Partition::singletons(k), k * a - lbt.missing, true});
                continue;
            }
            ClientId j = 0;
            while (lbt.singleton_split[static_cast<std::size_t>(j)] <= a) ++j;
            const Coalition single{j};
            record(AlphaRaised{a, a + 1, Partition{single, instance.clients().minus(single)},
                               2 * a - lbt.singleton_split[static_cast<std::size_t>(j)], true});
        }
    }
    // alpha never needs to exceed the sum of everything each client misses
    const std::int64_t alpha_cap = std::max<std::int64_t>(alpha, static_cast<std::int64_t>(k) * l);

    Partition w;
    RateVector r;
    for (;;) {
        w = Partition::singletons(k);
        r.assign(static_cast<std::size_t>(k), 0);
        bool restart = false;
        do {
            auto cand = find_merge_cand(ctx, instance, w, alpha, cfg.k_cap);
            if (cand) {
                auto upd = update_rates(ctx, instance, r, cand->blocks, cfg, &rng);
                r = upd.rates;
                record(RatesUpdated{false, std::move(upd)});
                w = w.merged(cand->block_indices);
                const auto size = cand->blocks.size();
                record(Merged{alpha, size, std::move(*cand), w});
            }
            const std::int64_t budget = partition_budget(ctx, instance, w, alpha);
            if (alpha > budget) {
                record(AlphaRaised{alpha, alpha + 1, w, budget});
                ++alpha;
                ++res.restarts;
                restart = true;
                break;
            }
            if (!cand) break;
        } while (w.size() > 2);
        if (!restart) break;
        if (alpha > alpha_cap) throw InvariantBreach("sum-rate estimate grew past K*L; solver is not converging");
    }

    {
        auto upd = update_rates(ctx, instance, r, w.blocks(), cfg, &rng);
        r = upd.rates;
        record(RatesUpdated{true, std::move(upd)});
    }

    const std::int64_t excess = std::max<std::int64_t>(rate_sum(r) - alpha, 0);
    if (excess > 0) {
        const Coalition all = instance.clients();
        std::vector<std::int64_t> slack(static_cast<std::size_t>(k));
        for (ClientId j = 0; j < k; ++j)
            slack[static_cast<std::size_t>(j)] =
                r[static_cast<std::size_t>(j)] - (l - union_size(ctx, instance, all.minus(Coalition{j})));

        FinalReduction fr;
        fr.excess = excess;
        auto single = std::find_if(slack.begin(), slack.end(), [&](std::int64_t s) { return s >= excess; });
        if (single != slack.end()) {
            const auto j = static_cast<ClientId>(single - slack.begin());
            r[static_cast<std::size_t>(j)] -= excess;
            fr.reductions.emplace_back(j, excess);
        } else {
            fr.greedy = true;
            std::int64_t left = excess;
            for (ClientId j = 0; j < k && left > 0; ++j) {
                const auto take = std::min(left, std::max<std::int64_t>(slack[static_cast<std::size_t>(j)], 0));
                if (take == 0) continue;
                r[static_cast<std::size_t>(j)] -= take;
                left -= take;
                fr.reductions.emplace_back(j, take);
            }
            if (left > 0)
                throw InvariantBreach("final reduction: clients lack slack to remove " + std::to_string(left) +
                                      " excess transmissions");
            if (k > oracle::kMaxCutClients)
                throw InvariantBreach("final reduction needed several clients and K is too large to verify");
            EvalContext check;
            const auto rep = oracle::is_feasible(check, instance, r);
            if (!rep.feasible)
                throw InvariantBreach("final reduction produced an infeasible strategy (cut " +
                                      rep.violated->x.str() + ")");
        }
        record(std::move(fr));
    }

    res.alpha = alpha;
    res.rates = std::move(r);
    res.gamma = ctx.gamma();
    return res;
}

}  // namespace cde::im
