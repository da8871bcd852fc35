#pragma once

// Independent ground truth for the solvers: cut-condition feasibility of a
// rate vector, optimality certification against exhaustive enumeration, the
// greedy (Queyranne-style) closure, and minimality of a partition's total
// v-budget at fixed block count.

#include <cstdint>
#include <optional>
#include <vector>

#include "cde/model.hpp"
#include "cde/partitions.hpp"

namespace cde::oracle {

inline constexpr int kMaxCutClients = 20;
inline constexpr int kMaxEnumerationClients = 10;

struct CutViolation {
    Coalition x;
    std::int64_t required = 0;
    std::int64_t actual = 0;
};

struct FeasibilityReport {
    bool feasible = true;
    std::optional<CutViolation> violated;
};

/// Universal recovery check: r_X >= L - |H_{C\X}| for every nonempty proper
/// X. Reports the first violated X in increasing bitmask order.
FeasibilityReport is_feasible(EvalContext& ctx, const Instance& instance, const RateVector& rates,
                              int max_clients = kMaxCutClients);

/// Same check in budget form: with alpha = sum(rates), r_X <= alpha - L + |H_X|
/// for every nonempty proper X. The reported X is the complement of the set
/// whose budget is exceeded, so both forms name the same cut.
FeasibilityReport is_feasible_budget_form(EvalContext& ctx, const Instance& instance, const RateVector& rates,
                                          int max_clients = kMaxCutClients);

/// Minimum integer sum-rate for universal recovery by exhaustive enumeration.
std::int64_t min_sum_rate(EvalContext& ctx, const Instance& instance,
                          int max_clients = kMaxEnumerationClients);

struct OptimalityReport {
    bool optimal = false;
    bool feasible = false;
    std::int64_t alpha_star = 0;
    std::int64_t sum = 0;
    std::optional<CutViolation> violated;
};

OptimalityReport verify_optimal(EvalContext& ctx, const Instance& instance, const RateVector& rates);

struct ClosureStep {
    ClientId added = 0;
    std::int64_t cost = 0;  // |H_M| - |H_M ∩ H_u| for the chosen u
    Coalition after;
};

enum class ClosureTieBreak { lowest_id, highest_id };

/// Greedy growth from m0: repeatedly add u minimizing v(M+u) - v(u), which is
/// |H_{M+u}| - |H_u| and does not depend on alpha.
std::vector<ClosureStep> queyranne_closure(EvalContext& ctx, const Instance& instance, const Coalition& m0,
                                           ClosureTieBreak tie_break = ClosureTieBreak::lowest_id);

/// Step cost of adding u to M: |H_{M+u}| - |H_u|.
std::int64_t closure_cost(EvalContext& ctx, const Instance& instance, const Coalition& m, ClientId u);

struct MinimalityReport {
    bool minimal = true;
    std::int64_t value = 0;  // sum of v over W
    std::optional<Partition> witness;
    std::int64_t witness_value = 0;
};

/// W minimizes sum_{X in W} v_alpha(X) among all partitions of C with |W| blocks.
MinimalityReport partition_minimality_check(EvalContext& ctx, const Instance& instance, const Partition& w,
                                            std::int64_t alpha);

}  // namespace cde::oracle
