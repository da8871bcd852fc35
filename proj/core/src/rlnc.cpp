#include "cde/rlnc.hpp"

#include <random>
#include <utility>

#include "cde/errors.hpp"

namespace cde::rlnc {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field::Field(std::uint32_t q) : q_(q) {
    if (!is_prime(q)) throw InvalidArgument("field modulus " + std::to_string(q) + " is not prime");
}

FieldElement Field::add(FieldElement a, FieldElement b) const noexcept {
    return element(std::uint64_t{a.value} + b.value);
}

FieldElement Field::sub(FieldElement a, FieldElement b) const noexcept {
    return element(std::uint64_t{a.value} + q_ - b.value);
}

FieldElement Field::mul(FieldElement a, FieldElement b) const noexcept {
    return element(std::uint64_t{a.value} * b.value);
}

FieldElement Field::inv(FieldElement a) const {
    if (a.value == 0) throw InvalidArgument("zero has no inverse");
    // a^(q-2)
    FieldElement result{1};
    FieldElement base = a;
    for (std::uint64_t e = q_ - 2; e > 0; e >>= 1) {
        if (e & 1U) result = mul(result, base);
        base = mul(base, base);
    }
    return result;
}

std::size_t rank(std::vector<CodedRow> rows, const Field& f) {
    if (rows.empty()) return 0;
    const std::size_t width = rows.front().size();
    for (const auto& row : rows)
        if (row.size() != width) throw InvalidArgument("coded rows of different lengths");

    std::size_t r = 0;
    for (std::size_t col = 0; col < width && r < rows.size(); ++col) {
        std::size_t pivot = r;
        while (pivot < rows.size() && rows[pivot][col].value == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        const FieldElement scale = f.inv(rows[r][col]);
        for (auto& c : rows[r]) c = f.mul(c, scale);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            const FieldElement factor = rows[i][col];
            if (factor.value == 0) continue;
            for (std::size_t c = col; c < width; ++c) rows[i][c] = f.sub(rows[i][c], f.mul(factor, rows[r][c]));
        }
        ++r;
    }
    return r;
}

std::pair<ClientId, int> SimReport::worst() const {
    std::pair<ClientId, int> w{0, -1};
    for (const auto& trial : ranks)
        for (std::size_t j = 0; j < trial.size(); ++j)
            if (w.second < 0 || trial[j] < w.second) w = {static_cast<ClientId>(j), trial[j]};
    return w;
}

SimReport simulate(const Instance& instance, const RateVector& rates, std::uint32_t q, std::size_t trials,
                   std::uint64_t seed) {
    const Field field(q);
    const int k = instance.num_clients();
    const int l = instance.num_packets();
    if (rates.size() != static_cast<std::size_t>(k))
        throw InvalidArgument("rate vector has " + std::to_string(rates.size()) + " entries, instance has " +
                              std::to_string(k) + " clients");
    if (trials == 0) throw InvalidArgument("simulate needs at least one trial");
    for (auto r : rates)
        if (r < 0) throw InvalidArgument("negative rate");

    SimReport rep;
    rep.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
        std::mt19937_64 gen(seq);
        std::uniform_int_distribution<std::uint32_t> coeff(0, q - 1);

        // Broadcasts: each row combines only the sender's initial packets.
        std::vector<std::pair<ClientId, CodedRow>> sent;
        for (ClientId j = 0; j < k; ++j) {
            const auto& h = instance.has_set(j);
            for (std::int64_t n = 0; n < rates[static_cast<std::size_t>(j)]; ++n) {
                CodedRow row(static_cast<std::size_t>(l));
                for (PacketId p = 0; p < l; ++p)
                    if (h.contains(p)) row[static_cast<std::size_t>(p)] = field.element(coeff(gen));
                sent.emplace_back(j, std::move(row));
            }
        }

        std::vector<int> ranks(static_cast<std::size_t>(k));
        bool all_full = true;
        for (ClientId j = 0; j < k; ++j) {
            std::vector<CodedRow> known;
            for (PacketId p : instance.has_set(j).elements()) {
                CodedRow unit(static_cast<std::size_t>(l));
                unit[static_cast<std::size_t>(p)] = FieldElement{1};
                known.push_back(std::move(unit));
            }
            for (const auto& [from, row] : sent)
                if (from != j) known.push_back(row);
            ranks[static_cast<std::size_t>(j)] = static_cast<int>(rank(std::move(known), field));
            all_full = all_full && ranks[static_cast<std::size_t>(j)] == l;
        }
        if (all_full) ++rep.successes;
        rep.ranks.push_back(std::move(ranks));
    }
    return rep;
}

}  // namespace cde::rlnc
