#pragma once

// Random linear coding simulator used as an empirical check of universal
// recovery: every client broadcasts random combinations of the packets it
// initially holds, and a trial succeeds when every client's received row
// space has full rank over the prime field.

#include <cstdint>
#include <vector>

#include "cde/model.hpp"

namespace cde::rlnc {

inline constexpr std::uint32_t kDefaultModulus = 65537;

bool is_prime(std::uint64_t n);

struct FieldElement {
    std::uint32_t value = 0;
    friend bool operator==(FieldElement, FieldElement) = default;
};

/// Prime field F_q with q < 2^32.
class Field {
public:
    explicit Field(std::uint32_t q);

    [[nodiscard]] std::uint32_t modulus() const noexcept { return q_; }
    [[nodiscard]] FieldElement element(std::uint64_t v) const noexcept { return {static_cast<std::uint32_t>(v % q_)}; }
    [[nodiscard]] FieldElement add(FieldElement a, FieldElement b) const noexcept;
    [[nodiscard]] FieldElement sub(FieldElement a, FieldElement b) const noexcept;
    [[nodiscard]] FieldElement mul(FieldElement a, FieldElement b) const noexcept;
    /// Multiplicative inverse; throws InvalidArgument for zero.
    [[nodiscard]] FieldElement inv(FieldElement a) const;

private:
    std::uint32_t q_;
};

/// Coefficients of one coded packet over p_1..p_L.
using CodedRow = std::vector<FieldElement>;

/// Rank over F_q; 0 for no rows.
std::size_t rank(std::vector<CodedRow> rows, const Field& field);

struct SimReport {
    std::size_t trials = 0;
    std::size_t successes = 0;
    /// ranks[t][j]: final rank of client j in trial t.
    std::vector<std::vector<int>> ranks;

    /// Client (0-based) with the lowest rank in any trial, and that rank.
    [[nodiscard]] std::pair<ClientId, int> worst() const;
};

/// Deterministic given seed; trial t draws from its own generator seeded by (seed, t).
SimReport simulate(const Instance& instance, const RateVector& rates, std::uint32_t q, std::size_t trials,
                   std::uint64_t seed);

}  // namespace cde::rlnc
