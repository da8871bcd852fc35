#include "cde/model.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <sstream>

#include "cde/errors.hpp"

namespace cde {

// ---------------------------------------------------------------- PacketSet

PacketSet::PacketSet(int num_packets)
    : words_(static_cast<std::size_t>((num_packets + 63) / 64), 0), universe_(num_packets) {}

void PacketSet::insert(PacketId p) {
    if (p < 0 || p >= universe_) throw InvalidArgument("packet id out of range");
    words_[static_cast<std::size_t>(p) / 64] |= std::uint64_t{1} << (p % 64);
}

bool PacketSet::contains(PacketId p) const {
    if (p < 0 || p >= universe_) return false;
    return (words_[static_cast<std::size_t>(p) / 64] >> (p % 64)) & 1U;
}

int PacketSet::size() const noexcept {
    int n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
}

std::vector<PacketId> PacketSet::elements() const {
    std::vector<PacketId> out;
    for (PacketId p = 0; p < universe_; ++p)
        if (contains(p)) out.push_back(p);
    return out;
}

PacketSet& PacketSet::operator|=(const PacketSet& o) {
    if (o.universe_ != universe_) throw InvalidArgument("packet sets over different universes");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

PacketSet& PacketSet::operator&=(const PacketSet& o) {
    if (o.universe_ != universe_) throw InvalidArgument("packet sets over different universes");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

// ---------------------------------------------------------------- Coalition

Coalition::Coalition(std::vector<ClientId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty()) throw InvalidArgument("empty coalition");
    if (members_.front() < 0) throw InvalidArgument("negative client id in coalition");
}

Coalition::Coalition(std::initializer_list<ClientId> members)
    : Coalition(std::vector<ClientId>(members)) {}

Coalition Coalition::from_one_based(std::initializer_list<int> ids) {
    return from_one_based(std::vector<int>(ids));
}

Coalition Coalition::from_one_based(const std::vector<int>& ids) {
    std::vector<ClientId> m;
    m.reserve(ids.size());
    for (int id : ids) {
        if (id < 1) throw InvalidArgument("client ids are 1-based");
        m.push_back(id - 1);
    }
    return Coalition(std::move(m));
}

Coalition Coalition::all(int num_clients) {
    std::vector<ClientId> m(static_cast<std::size_t>(num_clients));
    std::iota(m.begin(), m.end(), 0);
    return Coalition(std::move(m));
}

bool Coalition::contains(ClientId j) const {
    return std::binary_search(members_.begin(), members_.end(), j);
}

bool Coalition::intersects(const Coalition& o) const {
    auto a = members_.begin();
    auto b = o.members_.begin();
    while (a != members_.end() && b != o.members_.end()) {
        if (*a == *b) return true;
        if (*a < *b)
            ++a;
        else
            ++b;
    }
    return false;
}

Coalition Coalition::united(const Coalition& o) const {
    std::vector<ClientId> m;
    std::set_union(members_.begin(), members_.end(), o.members_.begin(), o.members_.end(),
                   std::back_inserter(m));
    return Coalition(std::move(m));
}

Coalition Coalition::minus(const Coalition& o) const {
    std::vector<ClientId> m;
    std::set_difference(members_.begin(), members_.end(), o.members_.begin(), o.members_.end(),
                        std::back_inserter(m));
    return Coalition(std::move(m));
}

std::string Coalition::str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(members_[i] + 1);
    }
    return s + "}";
}

// ---------------------------------------------------------------- Partition

Partition::Partition(std::vector<Coalition> blocks) : blocks_(std::move(blocks)) {
    for (const auto& b : blocks_)
        if (b.empty()) throw InvalidArgument("partition with an empty block");
    std::sort(blocks_.begin(), blocks_.end(),
              [](const Coalition& a, const Coalition& b) { return a.min() < b.min(); });
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        for (std::size_t k = i + 1; k < blocks_.size(); ++k)
            if (blocks_[i].intersects(blocks_[k]))
                throw InvalidArgument("partition blocks overlap: " + blocks_[i].str() + " and " +
                                      blocks_[k].str());
}

Partition::Partition(std::initializer_list<Coalition> blocks)
    : Partition(std::vector<Coalition>(blocks)) {}

Partition Partition::singletons(int num_clients) { return singletons(Coalition::all(num_clients)); }

Partition Partition::singletons(const Coalition& ground) {
    std::vector<Coalition> b;
    for (ClientId j : ground) b.push_back(Coalition{j});
    return Partition(std::move(b));
}

Coalition Partition::ground() const {
    std::vector<ClientId> m;
    for (const auto& b : blocks_) m.insert(m.end(), b.begin(), b.end());
    return Coalition(std::move(m));
}

bool Partition::covers(const Coalition& ground_set) const {
    return !blocks_.empty() && ground() == ground_set;
}

Partition Partition::merged(std::span<const std::size_t> indices) const {
    std::vector<bool> take(blocks_.size(), false);
    std::vector<ClientId> joined;
    for (auto i : indices) {
        if (i >= blocks_.size() || take[i]) throw InvalidArgument("bad block index for merge");
        take[i] = true;
        joined.insert(joined.end(), blocks_[i].begin(), blocks_[i].end());
    }
    std::vector<Coalition> out;
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        if (!take[i]) out.push_back(blocks_[i]);
    out.emplace_back(std::move(joined));
    return Partition(std::move(out));
}

std::optional<std::size_t> Partition::index_of(const Coalition& block) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        if (blocks_[i] == block) return i;
    return std::nullopt;
}

std::string Partition::str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (i) s += ',';
        s += blocks_[i].str();
    }
    return s + "}";
}

// ---------------------------------------------------------------- rates

std::int64_t rate_sum(const RateVector& rates) {
    return std::accumulate(rates.begin(), rates.end(), std::int64_t{0});
}

std::int64_t rate_of(const RateVector& rates, const Coalition& x) {
    std::int64_t s = 0;
    for (ClientId j : x) s += rates.at(static_cast<std::size_t>(j));
    return s;
}

std::string rates_str(const RateVector& rates) {
    std::string s;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(rates[i]);
    }
    return s;
}

RateVector parse_rates(const std::string& text) {
    RateVector out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoll(item, &used);
            if (used != item.size() || v < 0) throw InvalidArgument("bad rate: " + item);
            out.push_back(v);
        } catch (const std::logic_error&) {
            throw InvalidArgument("bad rate: " + item);
        }
    }
    if (out.empty()) throw InvalidArgument("empty rate list");
    return out;
}

// ---------------------------------------------------------------- Instance

ValidationReport validate(const RawInstance& raw) {
    ValidationReport r;
    const auto k = raw.has_sets.size();
    if (k < 2) {
        r.violation = Violation::too_few_clients;
        r.message = "need at least 2 clients, got " + std::to_string(k);
        return r;
    }
    if (raw.num_packets < 1) {
        r.violation = Violation::no_packets;
        r.message = "number of packets must be at least 1";
        return r;
    }
    std::vector<bool> seen(static_cast<std::size_t>(raw.num_packets), false);
    for (std::size_t j = 0; j < k; ++j) {
        for (auto p : raw.has_sets[j]) {
            if (p < 1 || p > raw.num_packets) {
                r.violation = Violation::packet_out_of_range;
                r.client = static_cast<int>(j) + 1;
                r.packet = p;
                r.message = "client " + std::to_string(j + 1) + " holds packet " + std::to_string(p) +
                            " outside 1.." + std::to_string(raw.num_packets);
                return r;
            }
            seen[static_cast<std::size_t>(p - 1)] = true;
        }
    }
    for (std::int64_t p = 0; p < raw.num_packets; ++p) {
        if (!seen[static_cast<std::size_t>(p)]) {
            r.violation = Violation::packet_uncovered;
            r.packet = p + 1;
            r.message = "packet " + std::to_string(p + 1) + " is held by no client";
            return r;
        }
    }
    return r;
}

ValidationReport validate(const Instance& instance) { return validate(instance.raw()); }

Instance::Instance(const RawInstance& raw) {
    const auto report = validate(raw);
    if (!report.ok()) throw InvalidInstance(report.message);
    num_packets_ = static_cast<int>(raw.num_packets);
    for (const auto& h : raw.has_sets) {
        PacketSet s(num_packets_);
        for (auto p : h) s.insert(static_cast<PacketId>(p - 1));
        has_sets_.push_back(std::move(s));
    }
}

namespace {
RawInstance to_raw(int num_packets, const std::vector<std::vector<int>>& sets) {
    RawInstance raw;
    raw.num_packets = num_packets;
    for (const auto& h : sets) raw.has_sets.emplace_back(h.begin(), h.end());
    return raw;
}
}  // namespace

Instance::Instance(int num_packets, const std::vector<std::vector<int>>& one_based_has_sets)
    : Instance(to_raw(num_packets, one_based_has_sets)) {}

RawInstance Instance::raw() const {
    RawInstance raw;
    raw.num_packets = num_packets_;
    for (const auto& h : has_sets_) {
        std::vector<std::int64_t> ids;
        for (auto p : h.elements()) ids.push_back(p + 1);
        raw.has_sets.push_back(std::move(ids));
    }
    return raw;
}

// ---------------------------------------------------------------- union size

PacketSet union_of(const Instance& instance, const Coalition& x) {
    PacketSet s(instance.num_packets());
    for (ClientId j : x) {
        if (j < 0 || j >= instance.num_clients())
            throw InvalidInstance("coalition " + x.str() + " names a client outside 1.." +
                                  std::to_string(instance.num_clients()));
        s |= instance.has_set(j);
    }
    return s;
}

int union_size(EvalContext& ctx, const Instance& instance, const Coalition& x) {
    if (x.empty()) throw InvalidInstance("empty coalition");
    if (ctx.caching()) {
        auto& cache = ctx.cache();
        if (auto it = cache.find(x.members()); it != cache.end()) return it->second;
        const int n = union_of(instance, x).size();
        ctx.count_evaluation();
        cache.emplace(x.members(), n);
        return n;
    }
    const int n = union_of(instance, x).size();
    ctx.count_evaluation();
    return n;
}

int union_size(EvalContext& ctx, std::span<const PacketSet* const> sets) {
    if (sets.empty()) throw InvalidArgument("union of no sets");
    const auto nwords = sets.front()->words().size();
    int n = 0;
    for (std::size_t w = 0; w < nwords; ++w) {
        std::uint64_t acc = 0;
        for (const auto* p : sets) acc |= p->words()[w];
        n += std::popcount(acc);
    }
    ctx.count_evaluation();
    return n;
}

// ---------------------------------------------------------------- generation

Instance random_instance(int num_clients, int num_packets, double density, std::uint64_t seed) {
    if (num_clients < 2) throw InvalidArgument("random_instance: need K >= 2");
    if (num_packets < 1) throw InvalidArgument("random_instance: need L >= 1");
    if (!(density > 0.0 && density < 1.0)) throw InvalidArgument("random_instance: density must be in (0,1)");

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(density);
    std::uniform_int_distribution<int> pick(0, num_clients - 1);

    std::vector<std::vector<int>> sets(static_cast<std::size_t>(num_clients));
    std::vector<bool> covered(static_cast<std::size_t>(num_packets), false);
    for (int j = 0; j < num_clients; ++j)
        for (int p = 0; p < num_packets; ++p)
            if (coin(rng)) {
                sets[static_cast<std::size_t>(j)].push_back(p + 1);
                covered[static_cast<std::size_t>(p)] = true;
            }
    for (int p = 0; p < num_packets; ++p)
        if (!covered[static_cast<std::size_t>(p)]) {
            auto& h = sets[static_cast<std::size_t>(pick(rng))];
            h.insert(std::lower_bound(h.begin(), h.end(), p + 1), p + 1);
        }
    return Instance(num_packets, sets);
}

}  // namespace cde
