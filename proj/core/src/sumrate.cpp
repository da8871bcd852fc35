#include "cde/sumrate.hpp"

#include <algorithm>
#include <limits>

#include "cde/errors.hpp"
#include "cde/partitions.hpp"

namespace cde::sumrate {

std::int64_t v_value(EvalContext& ctx, const Instance& instance, std::int64_t alpha, const Coalition& x) {
    return alpha - instance.num_packets() + union_size(ctx, instance, x);
}

std::int64_t x_value(EvalContext& ctx, const Instance& instance, std::int64_t alpha,
                     std::span<const Coalition> blocks) {
    if (blocks.size() < 2) throw InvalidArgument("x_value needs at least two blocks");
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (std::size_t k = i + 1; k < blocks.size(); ++k)
            if (blocks[i].intersects(blocks[k]))
                throw InvalidArgument("x_value blocks overlap: " + blocks[i].str() + " and " + blocks[k].str());

    Coalition joined = blocks.front();
    std::int64_t parts = 0;
    for (const auto& b : blocks) {
        joined = joined.united(b);
        parts += v_value(ctx, instance, alpha, b);
    }
    return v_value(ctx, instance, alpha, joined) - parts;
}

namespace {

struct PartitionRecord {
    std::vector<std::uint8_t> labels;
    std::int64_t blocks = 0;
    std::int64_t sum_union = 0;  // sum over blocks of |H_X|
};

}  // namespace

LocalRecoveryResult local_recovery(EvalContext& ctx, const Instance& instance, const Coalition& s) {
    if (s.size() < 2) throw InvalidArgument("local recovery needs a coalition of at least two clients");
    if (s.size() > kMaxEnumerationSize)
        throw LimitExceeded("local recovery enumeration is limited to " + std::to_string(kMaxEnumerationSize) +
                            " clients");

    LocalRecoveryResult res;
    res.union_size = union_size(ctx, instance, s);
    const std::int64_t hs = res.union_size;

    std::vector<PartitionRecord> records;
    oracle::PartitionStream stream(s, 2, s.size());
    bool have_best = false;
    while (stream.next()) {
        PartitionRecord rec;
        rec.labels = stream.labels();
        rec.blocks = static_cast<std::int64_t>(stream.block_count());
        for (const auto& b : stream.blocks()) rec.sum_union += union_size(ctx, instance, b);
        const Rational value(rec.blocks * hs - rec.sum_union, rec.blocks - 1);
        if (!have_best || value > res.alpha_frac) {
            res.alpha_frac = value;
            res.argmax_partitions.clear();
            have_best = true;
        }
        if (value == res.alpha_frac) res.argmax_partitions.push_back(oracle::partition_from_labels(s, rec.labels));
        records.push_back(std::move(rec));
    }
    res.alpha_star = res.alpha_frac.ceil();

    const PartitionRecord* best = nullptr;
    std::int64_t best_budget = std::numeric_limits<std::int64_t>::max();
    for (const auto& rec : records) {
        const std::int64_t budget = rec.blocks * (res.alpha_star - hs) + rec.sum_union;
        if (budget < best_budget || (budget == best_budget && rec.blocks > best->blocks)) {
            best_budget = budget;
            best = &rec;
        }
    }
    res.minimizer_partition = oracle::partition_from_labels(s, best->labels);
    res.delta_alpha = best_budget - res.alpha_star;
    if (res.delta_alpha < 0)
        throw InvariantBreach("local recovery: minimum partition budget below alpha* for " + s.str());
    return res;
}

std::vector<std::pair<Coalition, std::int64_t>> prop1_allocate(EvalContext& ctx, const Instance& instance,
                                                               const Coalition& s,
                                                               const LocalRecoveryResult& result,
                                                               const Coalition& excess_block) {
    const auto& w = result.minimizer_partition;
    if (!w.index_of(excess_block))
        throw InvalidArgument("excess block " + excess_block.str() + " is not in the minimizer partition " +
                              w.str());
    const std::int64_t hs = union_size(ctx, instance, s);
    std::vector<std::pair<Coalition, std::int64_t>> out;
    for (const auto& x : w) {
        std::int64_t r = result.alpha_star - hs + union_size(ctx, instance, x);
        if (x == excess_block) {
            r -= result.delta_alpha;
            if (r < 0)
                throw InvalidArgument("block " + x.str() + " cannot absorb the excess of " +
                                      std::to_string(result.delta_alpha) + "; choose another block");
        }
        out.emplace_back(x, r);
    }
    return out;
}

LowerBoundTerms lower_bound_terms(EvalContext& ctx, const Instance& instance) {
    const std::int64_t k = instance.num_clients();
    const std::int64_t l = instance.num_packets();
    const Coalition all = instance.clients();
    LowerBoundTerms t;
    for (ClientId j = 0; j < k; ++j) {
        const Coalition single{j};
        const std::int64_t hj = union_size(ctx, instance, single);
        const std::int64_t rest = union_size(ctx, instance, all.minus(single));
        t.missing += l - hj;
        t.singleton_split.push_back(2 * l - hj - rest);
    }
    t.value = std::max(Rational(t.missing, k - 1).ceil(),
                       *std::max_element(t.singleton_split.begin(), t.singleton_split.end()));
    return t;
}

std::int64_t lower_bound(EvalContext& ctx, const Instance& instance) { return lower_bound_terms(ctx, instance).value; }

std::int64_t two_partition_bound(EvalContext& ctx, const Instance& instance) {
    const int k = instance.num_clients();
    if (k > 20) throw LimitExceeded("two_partition_bound is limited to K <= 20");
    const std::int64_t l = instance.num_packets();
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    // Client 0 always sits in A, so each split is visited once.
    const std::uint32_t full = (1U << k) - 1U;
    for (std::uint32_t mask = 1; mask < full; mask += 2) {
        std::vector<ClientId> a, b;
        for (int j = 0; j < k; ++j) ((mask >> j) & 1U ? a : b).push_back(j);
        const auto ha = union_size(ctx, instance, Coalition(a));
        const auto hb = union_size(ctx, instance, Coalition(b));
        best = std::max(best, 2 * l - ha - hb);
    }
    return best;
}

}  // namespace cde::sumrate
