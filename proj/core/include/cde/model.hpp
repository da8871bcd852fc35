#pragma once

// Problem representation for cooperative data exchange: packet sets, client
// coalitions, partitions of the client set, rate vectors, and the counted
// union-cardinality primitive that every solver goes through.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cde {

using ClientId = int;  // 0-based internally, printed 1-based
using PacketId = int;  // 0-based internally, 1-based in files and output

/// Fixed-width bit-vector over packet ids.
class PacketSet {
public:
    PacketSet() = default;
    explicit PacketSet(int num_packets);

    void insert(PacketId p);
    [[nodiscard]] bool contains(PacketId p) const;
    [[nodiscard]] int size() const noexcept;
    [[nodiscard]] int universe() const noexcept { return universe_; }
    [[nodiscard]] std::vector<PacketId> elements() const;
    [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

    PacketSet& operator|=(const PacketSet& o);
    PacketSet& operator&=(const PacketSet& o);
    friend bool operator==(const PacketSet&, const PacketSet&) = default;

private:
    std::vector<std::uint64_t> words_;
    int universe_ = 0;
};

/// Nonempty set of clients, stored sorted and duplicate-free.
class Coalition {
public:
    Coalition() = default;
    explicit Coalition(std::vector<ClientId> members);
    Coalition(std::initializer_list<ClientId> members);

    /// Builds from 1-based client ids, as written in the literature and files.
    static Coalition from_one_based(std::initializer_list<int> ids);
    static Coalition from_one_based(const std::vector<int>& ids);
    static Coalition all(int num_clients);

    [[nodiscard]] const std::vector<ClientId>& members() const noexcept { return members_; }
    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] bool empty() const noexcept { return members_.empty(); }
    [[nodiscard]] ClientId min() const { return members_.front(); }
    [[nodiscard]] bool contains(ClientId j) const;
    [[nodiscard]] bool intersects(const Coalition& o) const;

    [[nodiscard]] Coalition united(const Coalition& o) const;
    [[nodiscard]] Coalition minus(const Coalition& o) const;

    /// "{1,3}" with 1-based ids.
    [[nodiscard]] std::string str() const;

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    friend bool operator==(const Coalition&, const Coalition&) = default;
    friend auto operator<=>(const Coalition&, const Coalition&) = default;

private:
    std::vector<ClientId> members_;
};

/// Disjoint nonempty coalitions; blocks are kept ordered by smallest member.
class Partition {
public:
    Partition() = default;
    /// Throws InvalidArgument on empty or overlapping blocks.
    explicit Partition(std::vector<Coalition> blocks);
    Partition(std::initializer_list<Coalition> blocks);

    static Partition singletons(int num_clients);
    static Partition singletons(const Coalition& ground);

    [[nodiscard]] const std::vector<Coalition>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] std::size_t size() const noexcept { return blocks_.size(); }
    [[nodiscard]] const Coalition& operator[](std::size_t i) const { return blocks_[i]; }
    [[nodiscard]] Coalition ground() const;
    [[nodiscard]] bool covers(const Coalition& ground) const;

    /// Replaces the blocks at `indices` by their union.
    [[nodiscard]] Partition merged(std::span<const std::size_t> indices) const;
    [[nodiscard]] std::optional<std::size_t> index_of(const Coalition& block) const;

    /// "{{1,3},{2},{4}}" with 1-based ids.
    [[nodiscard]] std::string str() const;

    auto begin() const { return blocks_.begin(); }
    auto end() const { return blocks_.end(); }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<Coalition> blocks_;
};

/// Per-client transmission counts.
using RateVector = std::vector<std::int64_t>;

std::int64_t rate_sum(const RateVector& rates);
std::int64_t rate_of(const RateVector& rates, const Coalition& x);
std::string rates_str(const RateVector& rates);
RateVector parse_rates(const std::string& text);

/// Unvalidated input as read from a file: 1-based packet ids per client.
struct RawInstance {
    std::int64_t num_packets = 0;
    std::vector<std::vector<std::int64_t>> has_sets;
};

enum class Violation { none, too_few_clients, no_packets, packet_out_of_range, packet_uncovered };

struct ValidationReport {
    Violation violation = Violation::none;
    std::optional<int> client;          // 1-based
    std::optional<std::int64_t> packet; // 1-based
    std::string message;

    [[nodiscard]] bool ok() const noexcept { return violation == Violation::none; }
};

/// Validated, immutable problem instance.
class Instance {
public:
    /// Throws InvalidInstance carrying the validation message.
    explicit Instance(const RawInstance& raw);
    Instance(int num_packets, const std::vector<std::vector<int>>& one_based_has_sets);

    [[nodiscard]] int num_packets() const noexcept { return num_packets_; }
    [[nodiscard]] int num_clients() const noexcept { return static_cast<int>(has_sets_.size()); }
    [[nodiscard]] const PacketSet& has_set(ClientId j) const { return has_sets_.at(j); }
    [[nodiscard]] const std::vector<PacketSet>& has_sets() const noexcept { return has_sets_; }
    [[nodiscard]] Coalition clients() const { return Coalition::all(num_clients()); }

    [[nodiscard]] RawInstance raw() const;

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    int num_packets_ = 0;
    std::vector<PacketSet> has_sets_;
};

ValidationReport validate(const RawInstance& raw);
ValidationReport validate(const Instance& instance);

/// Mutable scope of one solve: counts union-cardinality evaluations (gamma).
class EvalContext {
public:
    explicit EvalContext(std::uint64_t seed = 0, bool cache = false)
        : seed_(seed), cache_enabled_(cache) {}

    [[nodiscard]] std::uint64_t gamma() const noexcept { return gamma_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] bool caching() const noexcept { return cache_enabled_; }

    /// Counts one evaluation. Only the union_size functions call this.
    void count_evaluation() noexcept { ++gamma_; }

    std::map<std::vector<ClientId>, int>& cache() { return cache_; }

private:
    std::uint64_t gamma_ = 0;
    std::uint64_t seed_ = 0;
    bool cache_enabled_ = false;
    std::map<std::vector<ClientId>, int> cache_;
};

/// |H_X|, the number of packets known to at least one member of `x`.
/// Increments the context's gamma by one (zero on a cache hit).
int union_size(EvalContext& ctx, const Instance& instance, const Coalition& x);

/// |union of the given packet sets| for callers that already hold the block
/// unions of a partition; counts as one evaluation.
int union_size(EvalContext& ctx, std::span<const PacketSet* const> sets);

/// Packet set H_X without counting; used to prepare block unions whose size
/// is then obtained through union_size.
PacketSet union_of(const Instance& instance, const Coalition& x);

/// Bernoulli(density) has-sets followed by coverage repair.
Instance random_instance(int num_clients, int num_packets, double density, std::uint64_t seed);

}  // namespace cde
