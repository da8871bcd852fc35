#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cde/bench.hpp"
#include "cde/dv.hpp"
#include "cde/errors.hpp"
#include "cde/im.hpp"
#include "cde/instance_io.hpp"
#include "cde/oracle.hpp"
#include "cde/rlnc.hpp"
#include "cde/sumrate.hpp"

using json = nlohmann::json;
using namespace cde;

namespace {

// Exit codes
constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kCheckFailed = 2;
constexpr int kInvariant = 3;
constexpr int kUsage = 64;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CDE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("CDE_SEED is not an unsigned integer: ") + env);
        }
    }
    return 1;
}

std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const int v = std::stoi(text);
            return {v, v};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw InvalidArgument("bad range '" + text + "', expected A..B");
    }
}

json coalition_json(const Coalition& x) {
    json out = json::array();
    for (ClientId j : x) out.push_back(j + 1);
    return out;
}

json violation_json(const oracle::CutViolation& v) {
    return {{"x", coalition_json(v.x)}, {"required", v.required}, {"actual", v.actual}};
}

std::string violation_text(const oracle::CutViolation& v) {
    return "violated X=" + v.x.str() + " required " + std::to_string(v.required) + " actual " +
           std::to_string(v.actual);
}

im::TieBreakConfig tie_break(const std::string& name, std::uint64_t seed) {
    im::TieBreakConfig cfg;
    if (name == "paper-trace") cfg = im::TieBreakConfig::worked_example();
    if (name == "random") cfg.client_in_block = im::ClientRule::seeded_random;
    cfg.seed = seed;
    return cfg;
}

struct Checks {
    bool ran = false;
    bool passed = true;
    json report = json::object();
    std::string text;
};

// Cut feasibility (K <= 20) and optimality (K <= 10) of a rate vector.
Checks run_checks(const Instance& inst, const RateVector& rates, bool require_optimal) {
    Checks c;
    EvalContext ctx;
    const int k = inst.num_clients();
    if (k > oracle::kMaxCutClients) {
        c.passed = false;
        c.text = "verify: K=" + std::to_string(k) + " exceeds the cut-check limit of " +
                 std::to_string(oracle::kMaxCutClients) + "; use simulate instead";
        c.report["skipped"] = c.text;
        return c;
    }
    c.ran = true;
    const auto feas = oracle::is_feasible(ctx, inst, rates);
    c.report["feasible"] = feas.feasible;
    if (feas.feasible) {
        c.text = "feasible";
    } else {
        c.passed = false;
        c.report["violated"] = violation_json(*feas.violated);
        c.text = "infeasible: " + violation_text(*feas.violated);
    }
    if (k <= oracle::kMaxEnumerationClients) {
        const auto opt = oracle::verify_optimal(ctx, inst, rates);
        c.report["optimal"] = opt.optimal;
        c.report["alpha_star"] = opt.alpha_star;
        c.text += " optimal=" + std::string(opt.optimal ? "true" : "false") +
                  " alpha_star=" + std::to_string(opt.alpha_star);
        if (require_optimal && !opt.optimal) c.passed = false;
    } else if (require_optimal) {
        c.passed = false;
        c.text += " optimality not checked: K exceeds " + std::to_string(oracle::kMaxEnumerationClients);
    }
    return c;
}

void emit(bool as_json, const json& doc, const std::string& text) {
    if (as_json)
        std::cout << doc.dump() << '\n';
    else
        std::cout << text << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum sum-rate solver for cooperative data exchange"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    app.add_flag("--json", as_json, "Machine-readable output");

    // solve
    auto* solve = app.add_subcommand("solve", "Minimum sum-rate and a strategy by iterative merging");
    std::string solve_file, tie = "lex";
    std::int64_t alpha0 = 0;
    bool want_trace = false, want_verify = false;
    std::optional<std::size_t> k_cap;
    solve->add_option("file", solve_file, "Instance file")->required();
    solve->add_option("--alpha", alpha0, "Starting sum-rate (0: use the lower bound)")->check(CLI::NonNegativeNumber);
    solve->add_flag("--trace", want_trace, "Print the decision trace");
    solve->add_flag("--verify", want_verify, "Check the strategy with the oracles");
    solve->add_option("--tie-break", tie, "lex | paper-trace | random")
        ->check(CLI::IsMember({"lex", "paper-trace", "random"}));
    solve->add_option("--k-cap", k_cap, "Largest merge size examined");

    // verify
    auto* verify = app.add_subcommand("verify", "Check a rate vector for universal recovery");
    std::string verify_file, verify_rates;
    bool require_optimal = false;
    verify->add_option("file", verify_file, "Instance file")->required();
    verify->add_option("--rates", verify_rates, "Comma-separated rates, e.g. 3,2,0,0")->required();
    verify->add_flag("--optimal", require_optimal, "Also require the minimum sum-rate");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive reference computations");
    oracle_cmd->require_subcommand(1);
    auto* oracle_alpha = oracle_cmd->add_subcommand("alpha", "Minimum sum-rate by partition enumeration");
    std::string oracle_file;
    oracle_alpha->add_option("file", oracle_file, "Instance file")->required();
    auto* props = oracle_cmd->add_subcommand("props", "Cross-check the solvers on random instances");
    std::string seed_range, props_clients = "3..7", props_packets = "4..12";
    double props_density = 0.5;
    props->add_option("--seed-range", seed_range, "Instance seeds A..B")->required();
    props->add_option("--clients", props_clients, "Client counts A..B, cycled over seeds")->capture_default_str();
    props->add_option("--packets", props_packets, "Packet counts A..B, cycled over seeds")->capture_default_str();
    props->add_option("--density", props_density, "Has-set density")->check(CLI::Range(0.0, 1.0))->capture_default_str();

    // dv
    auto* dv_cmd = app.add_subcommand("dv", "Fractional divide-and-conquer rates");
    std::string dv_file, dv_tie = "lex";
    bool dv_trace = false;
    dv_cmd->add_option("file", dv_file, "Instance file")->required();
    dv_cmd->add_flag("--trace", dv_trace, "Print the call tree");
    dv_cmd->add_option("--tie-break", dv_tie, "lex | paper-trace")->check(CLI::IsMember({"lex", "paper-trace"}));

    // simulate
    auto* sim = app.add_subcommand("simulate", "Random linear coding trials for a rate vector");
    std::string sim_file, sim_rates;
    std::uint32_t q = rlnc::kDefaultModulus;
    std::size_t trials = 100;
    std::optional<std::uint64_t> sim_seed;
    sim->add_option("file", sim_file, "Instance file")->required();
    sim->add_option("--rates", sim_rates, "Comma-separated rates")->required();
    sim->add_option("--q", q, "Prime field size")->capture_default_str();
    sim->add_option("--trials", trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "Seed (default: CDE_SEED or 1)");

    // gen
    auto* gen = app.add_subcommand("gen", "Random instance");
    int gen_k = 4, gen_l = 7;
    double gen_density = 0.5;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_out;
    gen->add_option("--clients", gen_k, "Number of clients")->required();
    gen->add_option("--packets", gen_l, "Number of packets")->required();
    gen->add_option("--density", gen_density, "Probability a client holds a packet")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Seed (default: CDE_SEED or 1)");
    gen->add_option("--out", gen_out, "Write to this file instead of stdout");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Evaluation-count experiment over random instances");
    bench::BenchConfig bcfg;
    std::string bench_clients = "5..60", bench_out;
    std::optional<std::uint64_t> bench_seed;
    bool no_timing = false;
    bench_cmd->add_option("--packets", bcfg.packets, "Packets per instance")->capture_default_str();
    bench_cmd->add_option("--clients", bench_clients, "Client counts A..B")->capture_default_str();
    bench_cmd->add_option("--reps", bcfg.reps, "Instances per client count")->capture_default_str();
    bench_cmd->add_option("--density", bcfg.density, "Has-set density")->capture_default_str();
    bench_cmd->add_option("--seed", bench_seed, "Base seed (default: CDE_SEED or 1)");
    bench_cmd->add_option("--out", bench_out, "CSV output file (default: stdout)");
    bench_cmd->add_option("--jobs", bcfg.jobs, "Worker threads")->capture_default_str();
    bench_cmd->add_flag("--no-timing", no_timing, "Write wall_ns as 0 for byte-identical output");
    bench_cmd->add_option("--k-cap", bcfg.k_cap, "Largest merge size examined");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*solve) {
            const auto inst = load_instance(solve_file);
            auto cfg = tie_break(tie, default_seed());
            cfg.k_cap = k_cap;
            const auto res = im::solve(inst, alpha0, cfg);
            json doc{{"alpha", res.alpha}, {"rates", res.rates}, {"gamma", res.gamma}};
            std::ostringstream text;
            text << "alpha=" << res.alpha << " rates=" << rates_str(res.rates);
            int rc = kOk;
            if (want_verify) {
                const auto chk = run_checks(inst, res.rates, true);
                doc["verify"] = chk.report;
                text << "\nverify: " << chk.text;
                if (!chk.passed) rc = kCheckFailed;
            }
            if (want_trace) {
                doc["trace"] = json::parse(res.trace.to_json());
                text << '\n' << res.trace.to_text();
            }
            std::string t = text.str();
            if (!t.empty() && t.back() == '\n') t.pop_back();
            emit(as_json, doc, t);
            return rc;
        }

        if (*verify) {
            const auto inst = load_instance(verify_file);
            const auto chk = run_checks(inst, parse_rates(verify_rates), require_optimal);
            emit(as_json, chk.report, chk.text);
            return chk.passed ? kOk : kCheckFailed;
        }

        if (*oracle_alpha) {
            const auto inst = load_instance(oracle_file);
            EvalContext ctx;
            const auto lr = sumrate::local_recovery(ctx, inst, inst.clients());
            emit(as_json,
                 {{"alpha_star", lr.alpha_star}, {"alpha_frac", lr.alpha_frac.str()},
                  {"minimizer", lr.minimizer_partition.str()}},
                 "alpha_star=" + std::to_string(lr.alpha_star) + " alpha_frac=" + lr.alpha_frac.str());
            return kOk;
        }

        if (*props) {
            const auto [lo, hi] = parse_range(seed_range);
            const auto [kmin, kmax] = parse_range(props_clients);
            const auto [lmin, lmax] = parse_range(props_packets);
            if (lo > hi || kmin < 2 || kmax < kmin || lmin < 1 || lmax < lmin || lo < 0)
                throw InvalidArgument("props ranges must be nonempty with K >= 2, L >= 1 and seeds >= 0");
            json failures = json::array();
            int checked = 0;
            for (int s = lo; s <= hi; ++s) {
                const int k = kmin + s % (kmax - kmin + 1);
                const int l = lmin + s % (lmax - lmin + 1);
                const auto inst = random_instance(k, l, props_density, static_cast<std::uint64_t>(s));
                EvalContext ctx;
                const auto lr = sumrate::local_recovery(ctx, inst, inst.clients());
                std::vector<std::string> bad;
                const auto res = im::solve(inst, 0);
                if (res.alpha != lr.alpha_star) bad.push_back("solver alpha differs from enumeration");
                const auto feas = oracle::is_feasible(ctx, inst, res.rates);
                if (!feas.feasible || rate_sum(res.rates) != lr.alpha_star) bad.push_back("solver rates not optimal");
                if (feas.feasible != oracle::is_feasible_budget_form(ctx, inst, res.rates).feasible)
                    bad.push_back("cut forms disagree");
                if (sumrate::lower_bound(ctx, inst) > lr.alpha_star) bad.push_back("lower bound exceeds optimum");
                if (dv::dv_solve(inst).alpha_frac != lr.alpha_frac) bad.push_back("fractional optimum differs");
                ++checked;
                for (const auto& b : bad) {
                    failures.push_back({{"seed", s}, {"clients", k}, {"packets", l}, {"check", b}});
                    if (!as_json) std::cout << "seed=" << s << " K=" << k << " L=" << l << ": " << b << '\n';
                }
            }
            emit(as_json, {{"checked", checked}, {"failures", failures}},
                 "checked " + std::to_string(checked) + " instances, " + std::to_string(failures.size()) +
                     " failures");
            return failures.empty() ? kOk : kCheckFailed;
        }

        if (*dv_cmd) {
            const auto inst = load_instance(dv_file);
            const auto rule = dv_tie == "paper-trace" ? dv::ExcessRule::smallest_budget
                                                      : dv::ExcessRule::lowest_block_index;
            const auto res = dv::dv_solve(inst, rule);
            std::string rates;
            json jr = json::array();
            for (std::size_t i = 0; i < res.rates.size(); ++i) {
                rates += (i ? "," : "") + res.rates[i].str();
                jr.push_back(res.rates[i].str());
            }
            json doc{{"rates", jr}, {"alpha_frac", res.alpha_frac.str()}, {"integral", res.integral}};
            std::string text = "rates=" + rates + " integral=" + (res.integral ? "true" : "false");
            if (dv_trace) {
                doc["call_tree"] = res.tree_text();
                text += "\n" + res.tree_text();
                text.pop_back();
            }
            emit(as_json, doc, text);
            return kOk;
        }

        if (*sim) {
            const auto inst = load_instance(sim_file);
            const auto rep = rlnc::simulate(inst, parse_rates(sim_rates), q, trials, sim_seed.value_or(default_seed()));
            json doc{{"successes", rep.successes}, {"trials", rep.trials}};
            std::string text = "successes=" + std::to_string(rep.successes) + "/" + std::to_string(rep.trials);
            if (rep.successes < rep.trials) {
                const auto [client, rank] = rep.worst();
                doc["worst"] = {{"client", client + 1}, {"rank", rank}};
                text += " worst client=" + std::to_string(client + 1) + " rank=" + std::to_string(rank);
            }
            emit(as_json, doc, text);
            return kOk;
        }

        if (*gen) {
            const auto inst = random_instance(gen_k, gen_l, gen_density, gen_seed.value_or(default_seed()));
            const auto text = serialize_instance(inst);
            if (gen_out.empty()) {
                std::cout << text << '\n';
            } else {
                std::ofstream out(gen_out);
                if (!(out << text << '\n')) throw InvalidArgument("cannot write " + gen_out);
            }
            return kOk;
        }

        if (*bench_cmd) {
            std::tie(bcfg.min_clients, bcfg.max_clients) = parse_range(bench_clients);
            bcfg.seed = bench_seed.value_or(default_seed());
            bcfg.timing = !no_timing;
            std::ofstream file;
            if (!bench_out.empty()) {
                file.open(bench_out);
                if (!file) throw InvalidArgument("cannot write " + bench_out);
            }
            const auto records = bench::run_bench(bcfg);
            const auto means = bench::mean_gamma(records);
            json summary_doc{{"rows", records.size()}};
            std::string summary_text = "rows=" + std::to_string(records.size());
            if (means.size() < 2) {
                summary_doc["slope"] = nullptr;
                summary_text += " slope=n/a";
            } else {
                const auto fit = bench::loglog_slope(means);
                summary_doc["slope"] = fit.slope;
                summary_doc["intercept"] = fit.intercept;
                summary_text += " slope=" + std::to_string(fit.slope);
            }
            if (as_json && !file.is_open()) {
                // one document on stdout instead of CSV
                json rows = json::array();
                for (const auto& r : records)
                    rows.push_back({{"K", r.clients},
                                    {"L", r.packets},
                                    {"rep", r.rep},
                                    {"seed", r.seed},
                                    {"alpha_star", r.alpha_star},
                                    {"gamma_count", r.gamma_count},
                                    {"wall_ns", r.wall_ns}});
                json mean = json::object();
                for (const auto& [k, g] : means) mean[std::to_string(k)] = g;
                summary_doc["records"] = std::move(rows);
                summary_doc["mean_gamma"] = std::move(mean);
                std::cout << summary_doc.dump() << '\n';
                return kOk;
            }
            const auto csv = bench::to_csv(records);
            if (file.is_open()) {
                if (!(file << csv)) throw InvalidArgument("cannot write " + bench_out);
            } else {
                std::cout << csv;
            }
            // CSV may own stdout; the summary then goes to stderr
            std::ostream& summary = file.is_open() ? std::cout : std::cerr;
            summary << (as_json ? summary_doc.dump() : summary_text) << '\n';
            return kOk;
        }
    } catch (const InvariantBreach& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInvariant;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kUsage;
}
