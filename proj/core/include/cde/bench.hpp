#pragma once

// Complexity experiment: random instances over a range of client counts,
// solved by iterative merging from the lower bound, with the number of
// union-cardinality evaluations recorded per run.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cde::bench {

struct BenchRecord {
    int clients = 0;
    int packets = 0;
    int rep = 0;
    std::uint64_t seed = 0;
    std::int64_t alpha_star = 0;
    std::int64_t lower_bound = 0;
    std::uint64_t gamma_count = 0;
    std::int64_t wall_ns = 0;
};

struct BenchConfig {
    int packets = 50;
    int min_clients = 5;
    int max_clients = 60;
    int reps = 20;
    double density = 0.5;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    bool timing = true;  // when false wall_ns is written as 0
    std::optional<std::size_t> k_cap;
};

/// Seed of the instance for (K, rep), derived from the base seed.
std::uint64_t instance_seed(std::uint64_t base, int clients, int rep);

/// Records in (K, rep) order regardless of how work was scheduled.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

/// Header `K,L,rep,seed,alpha_star,gamma_count,wall_ns` plus one line per record.
std::string to_csv(const std::vector<BenchRecord>& records);

std::map<int, double> mean_gamma(const std::vector<BenchRecord>& records);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares fit of log(mean gamma) against log(K).
SlopeFit loglog_slope(const std::map<int, double>& mean_by_clients);

}  // namespace cde::bench
