#pragma once

// Iterative merging solver for the minimum integer sum-rate without packet
// splitting. Starting from singleton coalitions, the solver repeatedly merges
// the smallest group of coalitions whose merge is beneficial (negative X
// value), allocates rates for local recovery inside each merged coalition,
// and raises the sum-rate estimate by one whenever the current partition
// shows the estimate is too small.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "cde/errors.hpp"
#include "cde/model.hpp"

namespace cde::im {

enum class CandidateOrder { lexicographic };

/// Which block of a merge absorbs the integer excess.
enum class ExcessBlockRule {
    highest_min_index_with_slack,  // among blocks with slack, the one whose smallest client id is largest
    lowest_index,                  // among blocks with slack, the first one
};

/// Which client of a block receives a block's rate increment.
enum class ClientRule {
    lowest_index,
    seeded_random,
    least_loaded,  // smallest current rate, then lowest id
};

struct TieBreakConfig {
    CandidateOrder candidate_order = CandidateOrder::lexicographic;
    ExcessBlockRule excess_block = ExcessBlockRule::highest_min_index_with_slack;
    ClientRule client_in_block = ClientRule::lowest_index;
    /// Largest subset size examined when looking for a merge. Benchmarking only.
    std::optional<std::size_t> k_cap;
    std::uint64_t seed = 0;

    /// Choices that reproduce the worked examples step by step.
    static TieBreakConfig worked_example();
    [[nodiscard]] std::string str() const;
};

struct MergeCandidate {
    std::vector<std::size_t> block_indices;  // into the partition searched
    std::vector<Coalition> blocks;
    std::int64_t x_value = 0;
};

/// Smallest k in 2..|W|-1 for which some k-subset of W has a negative X
/// value; returns the subset with the smallest X value at that k (ties: the
/// lexicographically first index set). None for |W| <= 2.
std::optional<MergeCandidate> find_merge_cand(EvalContext& ctx, const Instance& instance, const Partition& w,
                                              std::int64_t alpha,
                                              std::optional<std::size_t> k_cap = std::nullopt);

struct BlockUpdate {
    Coalition block;
    std::int64_t target = 0;       // after the excess reduction, if this is the excess block
    std::int64_t rate_before = 0;  // accumulated rate of the block
    std::int64_t increment = 0;
    ClientId client = 0;           // receiver of the increment
};

struct RateUpdate {
    std::vector<Coalition> blocks;
    std::int64_t alpha_tilde = 0;  // local-recovery sum-rate of the merged coalition
    std::int64_t delta_alpha = 0;
    std::optional<Coalition> excess_block;
    std::vector<BlockUpdate> updates;
    RateVector rates;  // after the update
};

/// Raised when the integer excess cannot be absorbed by any block without
/// dropping that block's target below what it already transmits.
class UpdateRatesError : public InvariantBreach {
public:
    UpdateRatesError(const std::string& what, RateUpdate partial)
        : InvariantBreach(what), partial_(std::move(partial)) {}
    [[nodiscard]] const RateUpdate& partial() const noexcept { return partial_; }

private:
    RateUpdate partial_;
};

/// Allocates local-recovery rates inside the union of `blocks` on top of the
/// rates already accumulated. `rng` is used only by ClientRule::seeded_random.
RateUpdate update_rates(EvalContext& ctx, const Instance& instance, const RateVector& rates,
                        const std::vector<Coalition>& blocks, const TieBreakConfig& cfg,
                        std::mt19937_64* rng = nullptr);

// ---------------------------------------------------------------- trace

struct AlphaInitialized {
    std::int64_t requested = 0;
    std::int64_t lower_bound = 0;
    std::int64_t alpha = 0;
};

struct AlphaRaised {
    std::int64_t from = 0;
    std::int64_t to = 0;
    Partition partition;     // partition whose v-budget fell below alpha
    std::int64_t budget = 0; // sum of v over that partition at the old alpha
    bool lifted = false;     // raised by the lower bound before any merge, not a restart
};

struct Merged {
    std::int64_t alpha = 0;
    std::size_t k = 0;
    MergeCandidate candidate;
    Partition after;
};

struct RatesUpdated {
    bool final_call = false;  // the post-loop update over the whole partition
    RateUpdate update;
};

struct FinalReduction {
    std::int64_t excess = 0;
    std::vector<std::pair<ClientId, std::int64_t>> reductions;
    bool greedy = false;  // more than one client had to give up rate
};

using TraceEvent = std::variant<AlphaInitialized, AlphaRaised, Merged, RatesUpdated, FinalReduction>;

struct TraceEntry {
    TraceEvent event;
    std::uint64_t gamma = 0;  // cumulative count after the event
};

struct SolveTrace {
    TieBreakConfig config;
    std::vector<TraceEntry> entries;

    /// One line per event.
    [[nodiscard]] std::string to_text() const;
    /// Structured encoding (JSON text).
    [[nodiscard]] std::string to_json() const;
    /// Rebuilds the output rate vector from the recorded increments and reductions.
    [[nodiscard]] RateVector replay(int num_clients) const;
    /// Partitions visited after the last restart, starting with the singletons.
    [[nodiscard]] std::vector<Partition> final_partitions(int num_clients) const;
};

struct SolveResult {
    std::int64_t alpha = 0;
    RateVector rates;
    SolveTrace trace;
    std::uint64_t gamma = 0;
    std::size_t restarts = 0;
};

/// Runs the iterative merging solver. alpha0 may be 0: the lower bound is
/// applied first. Output alpha is the minimum sum-rate whenever alpha0 does
/// not exceed it.
SolveResult solve(const Instance& instance, std::int64_t alpha0, const TieBreakConfig& cfg = {});
SolveResult solve(EvalContext& ctx, const Instance& instance, std::int64_t alpha0, const TieBreakConfig& cfg = {});

}  // namespace cde::im
