#include "cde/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "cde/errors.hpp"
#include "cde/im.hpp"
#include "cde/model.hpp"

namespace cde::bench {

std::uint64_t instance_seed(std::uint64_t base, int clients, int rep) {
    // splitmix64 over the packed (K, rep) pair
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(clients) << 32 |
                                                       static_cast<std::uint32_t>(rep));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

BenchRecord run_one(const BenchConfig& cfg, int clients, int rep) {
    BenchRecord rec;
    rec.clients = clients;
    rec.packets = cfg.packets;
    rec.rep = rep;
    rec.seed = instance_seed(cfg.seed, clients, rep);
    const Instance inst = random_instance(clients, cfg.packets, cfg.density, rec.seed);

    im::TieBreakConfig tb;
    tb.k_cap = cfg.k_cap;
    const auto start = std::chrono::steady_clock::now();
    EvalContext ctx(rec.seed);
    // alpha0 = 0: the solver starts from the lower bound and counts its cost
    const auto result = im::solve(ctx, inst, 0, tb);
    const auto stop = std::chrono::steady_clock::now();

    rec.lower_bound = std::get<im::AlphaInitialized>(result.trace.entries.front().event).lower_bound;

    rec.alpha_star = result.alpha;
    rec.gamma_count = ctx.gamma();
    rec.wall_ns = cfg.timing ? std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count() : 0;
    return rec;
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
    if (cfg.min_clients < 2 || cfg.max_clients < cfg.min_clients)
        throw InvalidArgument("bench client range must satisfy 2 <= min <= max");
    if (cfg.reps < 1) throw InvalidArgument("bench needs at least one repetition");
    if (cfg.packets < 1) throw InvalidArgument("bench needs at least one packet");

    struct Job {
        int clients;
        int rep;
    };
    std::vector<Job> jobs;
    for (int k = cfg.min_clients; k <= cfg.max_clients; ++k)
        for (int r = 0; r < cfg.reps; ++r) jobs.push_back({k, r});

    std::vector<BenchRecord> out(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) out[i] = run_one(cfg, jobs[i].clients, jobs[i].rep);
    };
    const unsigned n = std::max(1U, cfg.jobs);
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    return out;
}

std::string to_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream os;
    os << "K,L,rep,seed,alpha_star,gamma_count,wall_ns\n";
    for (const auto& r : records)
        os << r.clients << ',' << r.packets << ',' << r.rep << ',' << r.seed << ',' << r.alpha_star << ','
           << r.gamma_count << ',' << r.wall_ns << '\n';
    return os.str();
}

std::map<int, double> mean_gamma(const std::vector<BenchRecord>& records) {
    std::map<int, std::pair<double, int>> acc;
    for (const auto& r : records) {
        auto& [sum, n] = acc[r.clients];
        sum += static_cast<double>(r.gamma_count);
        ++n;
    }
    std::map<int, double> out;
    for (const auto& [k, v] : acc) out[k] = v.first / v.second;
    return out;
}

SlopeFit loglog_slope(const std::map<int, double>& mean_by_clients) {
    if (mean_by_clients.size() < 2) throw InvalidArgument("slope fit needs at least two client counts");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(mean_by_clients.size());
    for (const auto& [k, g] : mean_by_clients) {
        const double x = std::log(static_cast<double>(k));
        const double y = std::log(g);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    SlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

}  // namespace cde::bench
