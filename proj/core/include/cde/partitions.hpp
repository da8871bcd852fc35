#pragma once

#include <cstdint>
#include <vector>

#include "cde/model.hpp"

namespace cde::oracle {

/// Streams the set partitions of a ground coalition whose block count lies in
/// [min_blocks, max_blocks], in lexicographic order of restricted-growth
/// strings. Single consumer.
///
///     PartitionStream s(ground, 2, ground.size());
///     while (s.next()) use(s.partition());
class PartitionStream {
public:
    PartitionStream(Coalition ground, std::size_t min_blocks, std::size_t max_blocks);

    /// Advances to the next qualifying partition; false when exhausted.
    bool next();

    /// Restricted-growth string of the current partition: labels()[i] is the
    /// block of the i-th ground member.
    [[nodiscard]] const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
    [[nodiscard]] std::size_t block_count() const noexcept { return blocks_; }
    [[nodiscard]] Partition partition() const;
    /// Members of each block, in label order.
    [[nodiscard]] std::vector<Coalition> blocks() const;

private:
    bool advance();

    Coalition ground_;
    std::size_t min_blocks_;
    std::size_t max_blocks_;
    std::vector<std::uint8_t> labels_;
    std::vector<std::uint8_t> prefix_max_;
    std::size_t blocks_ = 0;
    bool started_ = false;
    bool done_ = false;
};

/// All qualifying partitions materialized.
std::vector<Partition> partitions(const Coalition& ground, std::size_t min_blocks, std::size_t max_blocks);

/// Builds a partition of `ground` from a restricted-growth string.
Partition partition_from_labels(const Coalition& ground, const std::vector<std::uint8_t>& labels);

/// Bell number B(n), for n <= 25.
std::uint64_t bell_number(int n);

}  // namespace cde::oracle
