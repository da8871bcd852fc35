#include "cde/dv.hpp"

#include <algorithm>
#include <sstream>

#include "cde/errors.hpp"
#include "cde/partitions.hpp"
#include "cde/sumrate.hpp"

namespace cde::dv {

MacResult mac(EvalContext& ctx, const Instance& instance, const Coalition& s) {
    if (s.size() < 2) throw InvalidArgument("MAC needs a coalition of at least two clients");
    if (s.size() > sumrate::kMaxEnumerationSize)
        throw LimitExceeded("MAC enumeration is limited to " + std::to_string(sumrate::kMaxEnumerationSize) +
                            " clients");

    // Every block is a subset of S; evaluate each subset at most once, keyed
    // by its bitmask over the positions of S.
    const auto n = s.size();
    std::vector<int> subset_size(std::size_t{1} << n, -1);
    auto size_of = [&](const std::vector<std::uint8_t>& labels, std::uint8_t block) {
        std::uint32_t mask = 0;
        std::vector<ClientId> members;
        for (std::size_t i = 0; i < n; ++i)
            if (labels[i] == block) {
                mask |= 1U << i;
                members.push_back(s.members()[i]);
            }
        auto& slot = subset_size[mask];
        if (slot < 0) slot = union_size(ctx, instance, Coalition(std::move(members)));
        return static_cast<std::int64_t>(slot);
    };

    const std::int64_t hs = union_size(ctx, instance, s);
    std::optional<MacResult> best;
    oracle::PartitionStream stream(s, 2, n);
    while (stream.next()) {
        const auto k = static_cast<std::int64_t>(stream.block_count());
        std::int64_t missing = 0;
        for (std::int64_t b = 0; b < k; ++b) missing += hs - size_of(stream.labels(), static_cast<std::uint8_t>(b));
        const Rational value(missing, k - 1);
        if (!best || value > best->alpha_frac) best = MacResult{value, stream.partition()};
    }
    return *best;
}

namespace {

struct Divider {
    EvalContext& ctx;
    const Instance& instance;
    ExcessRule rule;
    std::vector<Rational>& rates;

    CallNode run(const Coalition& s, std::optional<Rational> budget) {
        CallNode node;
        node.s = s;
        node.budget = budget;
        auto m = mac(ctx, instance, s);
        node.alpha_frac = m.alpha_frac;
        node.argmax = m.argmax;
        if (budget) {
            node.surplus = *budget - m.alpha_frac;
            if (node.surplus < Rational(0))
                throw InvariantBreach("divide-and-conquer: budget " + budget->str() + " of " + s.str() +
                                      " is below its fractional optimum " + m.alpha_frac.str());
        }

        const std::int64_t hs = union_size(ctx, instance, s);
        for (const auto& x : node.argmax)
            node.block_budgets.push_back(m.alpha_frac - Rational(hs) + Rational(union_size(ctx, instance, x)));

        std::size_t chosen = 0;
        if (rule == ExcessRule::smallest_budget) {
            for (std::size_t i = 1; i < node.block_budgets.size(); ++i)
                if (node.block_budgets[i] < node.block_budgets[chosen]) chosen = i;
        }
        if (node.surplus != Rational(0)) {
            node.block_budgets[chosen] += node.surplus;
            node.absorbed_by = node.argmax[chosen];
        }

        for (std::size_t i = 0; i < node.argmax.size(); ++i) {
            const auto& x = node.argmax[i];
            if (x.size() == 1) {
                rates[static_cast<std::size_t>(x.min())] = node.block_budgets[i];
            } else {
                node.children.push_back(run(x, node.block_budgets[i]));
            }
        }
        return node;
    }
};

void print_node(std::ostream& os, const CallNode& n, int depth) {
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "S=" << n.s.str();
    if (n.budget) os << " R=" << n.budget->str();
    os << " alpha_frac=" << n.alpha_frac.str() << " W=" << n.argmax.str() << " surplus=" << n.surplus.str();
    if (n.absorbed_by) os << " absorbed_by=" << n.absorbed_by->str();
    os << " budgets=";
    for (std::size_t i = 0; i < n.block_budgets.size(); ++i) os << (i ? "," : "") << n.block_budgets[i].str();
    os << '\n';
    for (const auto& c : n.children) print_node(os, c, depth + 1);
}

}  // namespace

std::string DvResult::tree_text() const {
    std::ostringstream os;
    print_node(os, call_tree, 0);
    return os.str();
}

DvResult dv_solve(const Instance& instance, ExcessRule rule) {
    EvalContext ctx;
    return dv_solve(ctx, instance, rule);
}

DvResult dv_solve(EvalContext& ctx, const Instance& instance, ExcessRule rule) {
    DvResult res;
    res.rates.assign(static_cast<std::size_t>(instance.num_clients()), Rational(0));
    Divider d{ctx, instance, rule, res.rates};
    res.call_tree = d.run(instance.clients(), std::nullopt);
    res.alpha_frac = res.call_tree.alpha_frac;
    res.integral = std::all_of(res.rates.begin(), res.rates.end(), [](const Rational& r) { return r.is_integer(); });

    Rational total(0);
    for (const auto& r : res.rates) total += r;
    if (total != res.alpha_frac)
        throw InvariantBreach("divide-and-conquer rates sum to " + total.str() + ", expected " + res.alpha_frac.str());
    return res;
}

}  // namespace cde::dv
