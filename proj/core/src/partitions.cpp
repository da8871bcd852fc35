#include "cde/partitions.hpp"

#include <algorithm>

#include "cde/errors.hpp"

namespace cde::oracle {

PartitionStream::PartitionStream(Coalition ground, std::size_t min_blocks, std::size_t max_blocks)
    : ground_(std::move(ground)), min_blocks_(min_blocks), max_blocks_(max_blocks) {
    const auto n = ground_.size();
    if (n == 0) throw InvalidArgument("partitions of an empty ground set");
    if (n > 255) throw LimitExceeded("partition enumeration supports at most 255 elements");
    if (min_blocks < 1 || min_blocks > max_blocks || max_blocks > n)
        throw InvalidArgument("partition block bounds must satisfy 1 <= min <= max <= |ground|");
    labels_.assign(n, 0);
    prefix_max_.assign(n, 0);
}

bool PartitionStream::advance() {
    const auto n = labels_.size();
    if (!started_) {
        started_ = true;
        blocks_ = 1;
        return true;
    }
    // Rightmost position that can still grow: label <= max of the prefix before it.
    for (std::size_t i = n; i-- > 1;) {
        if (labels_[i] <= prefix_max_[i - 1]) {
            ++labels_[i];
            prefix_max_[i] = std::max(prefix_max_[i - 1], labels_[i]);
            for (std::size_t t = i + 1; t < n; ++t) {
                labels_[t] = 0;
                prefix_max_[t] = prefix_max_[i];
            }
            blocks_ = static_cast<std::size_t>(prefix_max_[n - 1]) + 1;
            return true;
        }
    }
    return false;
}

bool PartitionStream::next() {
    if (done_) return false;
    while (advance()) {
        if (blocks_ >= min_blocks_ && blocks_ <= max_blocks_) return true;
    }
    done_ = true;
    return false;
}

std::vector<Coalition> PartitionStream::blocks() const {
    std::vector<std::vector<ClientId>> members(blocks_);
    const auto& g = ground_.members();
    for (std::size_t i = 0; i < labels_.size(); ++i) members[labels_[i]].push_back(g[i]);
    std::vector<Coalition> out;
    out.reserve(blocks_);
    for (auto& m : members) out.emplace_back(std::move(m));
    return out;
}

Partition PartitionStream::partition() const { return Partition(blocks()); }

std::vector<Partition> partitions(const Coalition& ground, std::size_t min_blocks, std::size_t max_blocks) {
    std::vector<Partition> out;
    PartitionStream s(ground, min_blocks, max_blocks);
    while (s.next()) out.push_back(s.partition());
    return out;
}

Partition partition_from_labels(const Coalition& ground, const std::vector<std::uint8_t>& labels) {
    if (labels.size() != ground.size()) throw InvalidArgument("label string does not match ground set");
    std::size_t k = 0;
    for (auto l : labels) k = std::max<std::size_t>(k, l + 1U);
    std::vector<std::vector<ClientId>> members(k);
    for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(ground.members()[i]);
    std::vector<Coalition> blocks;
    for (auto& m : members) blocks.emplace_back(std::move(m));
    return Partition(std::move(blocks));
}

std::uint64_t bell_number(int n) {
    if (n < 0 || n > 25) throw InvalidArgument("bell_number supports 0..25");
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (int i = 0; i < n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (auto v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

}  // namespace cde::oracle
