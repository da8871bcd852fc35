#pragma once

// Divide-and-conquer comparator. Splits the client set along a maximizer of
// the fractional sum-rate bound and recurses into every non-singleton block,
// handing each block its budget. Exact rationals throughout; the result is
// optimal when packets may be split and is generally not integral.

#include <optional>
#include <string>
#include <vector>

#include "cde/model.hpp"
#include "cde/rational.hpp"

namespace cde::dv {

struct MacResult {
    Rational alpha_frac;
    Partition argmax;  // first maximizer in restricted-growth order
};

/// Maximum over partitions W of S (2 <= |W| <= |S|) of
/// sum_{X in W} (|H_S| - |H_X|) / (|W| - 1), with a maximizer.
MacResult mac(EvalContext& ctx, const Instance& instance, const Coalition& s);

/// Which block of a split receives the budget surplus.
enum class ExcessRule {
    lowest_block_index,
    smallest_budget,  // smallest block budget, then lowest index; reproduces the worked example
};

struct CallNode {
    Coalition s;
    std::optional<Rational> budget;  // R_S handed down by the parent; absent at the root
    Rational alpha_frac;
    Partition argmax;
    Rational surplus;  // R_S - alpha_frac (zero at the root)
    std::optional<Coalition> absorbed_by;
    std::vector<Rational> block_budgets;  // R_X per block of argmax, after the surplus
    std::vector<CallNode> children;
};

struct DvResult {
    std::vector<Rational> rates;
    Rational alpha_frac;  // of the root call
    bool integral = false;
    CallNode call_tree;

    [[nodiscard]] std::string tree_text() const;
};

DvResult dv_solve(const Instance& instance, ExcessRule rule = ExcessRule::lowest_block_index);
DvResult dv_solve(EvalContext& ctx, const Instance& instance, ExcessRule rule = ExcessRule::lowest_block_index);

}  // namespace cde::dv
