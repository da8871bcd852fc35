#pragma once

// Closed-form sum-rate quantities: the v and X values that drive merging,
// exhaustive evaluation of the local-recovery minimum sum-rate (integer and
// fractional), the per-block allocation that achieves it, and the lower bound
// used to seed the iterative merging solver.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cde/model.hpp"
#include "cde/rational.hpp"

namespace cde::sumrate {

/// Largest coalition for which local_recovery enumerates partitions.
inline constexpr std::size_t kMaxEnumerationSize = 12;

/// v_alpha(X) = alpha - L + |H_X|: the rate budget coalition X may keep
/// under sum-rate alpha. One union evaluation.
std::int64_t v_value(EvalContext& ctx, const Instance& instance, std::int64_t alpha, const Coalition& x);

/// X_alpha(Y) = v(union of Y) - sum over blocks of v(block). Negative exactly
/// when merging the blocks is beneficial. Throws on overlap or < 2 blocks.
std::int64_t x_value(EvalContext& ctx, const Instance& instance, std::int64_t alpha,
                     std::span<const Coalition> blocks);

struct LocalRecoveryResult {
    std::int64_t alpha_star = 0;        // minimum integer sum-rate
    Rational alpha_frac;                // fractional (packet-splitting) optimum
    std::vector<Partition> argmax_partitions;
    Partition minimizer_partition;      // minimum sum-rate partition
    std::int64_t delta_alpha = 0;       // excess of the minimizer's budget over alpha_star
    std::int64_t union_size = 0;        // |H_S|
};

/// Exhaustive local-recovery evaluation over every partition of S with at
/// least two blocks. Ties: the minimizer is the one with the most blocks,
/// then the first in restricted-growth order.
LocalRecoveryResult local_recovery(EvalContext& ctx, const Instance& instance, const Coalition& s);

/// Rates per block of result.minimizer_partition: each block gets
/// alpha* - |H_S| + |H_X|, and `excess_block` additionally gives up delta_alpha.
/// Throws InvalidArgument when that would make the excess block negative.
std::vector<std::pair<Coalition, std::int64_t>> prop1_allocate(EvalContext& ctx, const Instance& instance,
                                                               const Coalition& s,
                                                               const LocalRecoveryResult& result,
                                                               const Coalition& excess_block);

/// The two families behind the lower bound: the K singletons, and each
/// singleton against the rest of the clients.
struct LowerBoundTerms {
    std::int64_t missing = 0;                   // sum_j (L - |H_j|)
    std::vector<std::int64_t> singleton_split;  // 2L - |H_j| - |H_{C\{j}}| per client
    std::int64_t value = 0;
};

/// 2K union evaluations.
LowerBoundTerms lower_bound_terms(EvalContext& ctx, const Instance& instance);

/// max{ ceil(sum_j (L-|H_j|)/(K-1)), max_j (2L - |H_j| - |H_{C\{j}}|) }.
std::int64_t lower_bound(EvalContext& ctx, const Instance& instance);

/// Largest bound from any 2-partition {A, C\A}: 2L - |H_A| - |H_{C\A}|.
/// Enumerates 2^(K-1)-1 splits; K <= 20.
std::int64_t two_partition_bound(EvalContext& ctx, const Instance& instance);

}  // namespace cde::sumrate
