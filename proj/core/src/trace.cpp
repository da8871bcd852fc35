#include <sstream>

#include <json.hpp>

#include "cde/im.hpp"

namespace cde::im {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string blocks_str(const std::vector<Coalition>& blocks) {
    std::string s;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) s += ',';
        s += blocks[i].str();
    }
    return s;
}

std::vector<std::vector<int>> blocks_json(const std::vector<Coalition>& blocks) {
    std::vector<std::vector<int>> out;
    for (const auto& b : blocks) {
        std::vector<int> ids;
        for (ClientId j : b) ids.push_back(j + 1);
        out.push_back(std::move(ids));
    }
    return out;
}

nlohmann::json update_json(const RateUpdate& u) {
    nlohmann::json j;
    j["blocks"] = blocks_json(u.blocks);
    j["alpha_tilde"] = u.alpha_tilde;
    j["delta_alpha"] = u.delta_alpha;
    j["excess_block"] = u.excess_block ? nlohmann::json(blocks_json({*u.excess_block}).front()) : nlohmann::json();
    j["updates"] = nlohmann::json::array();
    for (const auto& b : u.updates) {
        j["updates"].push_back({{"block", blocks_json({b.block}).front()},
                                {"target", b.target},
                                {"rate_before", b.rate_before},
                                {"increment", b.increment},
                                {"client", b.client + 1}});
    }
    j["rates"] = u.rates;
    return j;
}

}  // namespace

std::string SolveTrace::to_text() const {
    std::ostringstream os;
    os << "config " << config.str() << '\n';
    for (const auto& entry : entries) {
        std::visit(overloaded{
                       [&](const AlphaInitialized& e) {
                           os << "init requested=" << e.requested << " lower_bound=" << e.lower_bound
                              << " alpha=" << e.alpha;
                       },
                       [&](const AlphaRaised& e) {
                           os << "alpha_raised " << e.from << "->" << e.to << " partition=" << e.partition.str()
                              << " budget=" << e.budget << (e.lifted ? " source=lower_bound" : " source=restart");
                       },
                       [&](const Merged& e) {
                           os << "merged k=" << e.k << " x=" << e.candidate.x_value << " alpha=" << e.alpha
                              << " blocks=" << blocks_str(e.candidate.blocks) << " partition=" << e.after.str();
                       },
                       [&](const RatesUpdated& e) {
                           const auto& u = e.update;
                           os << (e.final_call ? "final_rates_updated" : "rates_updated")
                              << " blocks=" << blocks_str(u.blocks) << " alpha_tilde=" << u.alpha_tilde
                              << " delta_alpha=" << u.delta_alpha
                              << " excess=" << (u.excess_block ? u.excess_block->str() : std::string("none"));
                           for (const auto& b : u.updates)
                               os << ' ' << b.block.str() << ":target=" << b.target << ",had=" << b.rate_before
                                  << ",+" << b.increment << "@" << b.client + 1;
                           os << " rates=" << rates_str(u.rates);
                       },
                       [&](const FinalReduction& e) {
                           os << "final_reduction excess=" << e.excess << (e.greedy ? " greedy" : "");
                           for (const auto& [j, amount] : e.reductions) os << ' ' << j + 1 << ":-" << amount;
                       },
                   },
                   entry.event);
        os << " gamma=" << entry.gamma << '\n';
    }
    return os.str();
}

std::string SolveTrace::to_json() const {
    nlohmann::json doc;
    doc["config"] = config.str();
    doc["events"] = nlohmann::json::array();
    for (const auto& entry : entries) {
        nlohmann::json j = std::visit(
            overloaded{
                [](const AlphaInitialized& e) {
                    return nlohmann::json{{"type", "init"},
                                          {"requested", e.requested},
                                          {"lower_bound", e.lower_bound},
                                          {"alpha", e.alpha}};
                },
                [](const AlphaRaised& e) {
                    return nlohmann::json{{"type", "alpha_raised"},
                                          {"from", e.from},
                                          {"to", e.to},
                                          {"partition", blocks_json(e.partition.blocks())},
                                          {"budget", e.budget},
                                          {"source", e.lifted ? "lower_bound" : "restart"}};
                },
                [](const Merged& e) {
                    return nlohmann::json{{"type", "merged"},
                                          {"k", e.k},
                                          {"alpha", e.alpha},
                                          {"x_value", e.candidate.x_value},
                                          {"blocks", blocks_json(e.candidate.blocks)},
                                          {"partition", blocks_json(e.after.blocks())}};
                },
                [](const RatesUpdated& e) {
                    auto j = update_json(e.update);
                    j["type"] = e.final_call ? "final_rates_updated" : "rates_updated";
                    return j;
                },
                [](const FinalReduction& e) {
                    nlohmann::json red = nlohmann::json::array();
                    for (const auto& [c, amount] : e.reductions) red.push_back({{"client", c + 1}, {"amount", amount}});
                    return nlohmann::json{
                        {"type", "final_reduction"}, {"excess", e.excess}, {"greedy", e.greedy}, {"reductions", red}};
                },
            },
            entry.event);
        j["gamma"] = entry.gamma;
        doc["events"].push_back(std::move(j));
    }
    return doc.dump();
}

RateVector SolveTrace::replay(int num_clients) const {
    RateVector r(static_cast<std::size_t>(num_clients), 0);
    for (const auto& entry : entries) {
        std::visit(overloaded{
                       [&](const AlphaRaised&) { std::fill(r.begin(), r.end(), 0); },
                       [&](const RatesUpdated& e) {
                           for (const auto& b : e.update.updates) r[static_cast<std::size_t>(b.client)] += b.increment;
                       },
                       [&](const FinalReduction& e) {
                           for (const auto& [j, amount] : e.reductions) r[static_cast<std::size_t>(j)] -= amount;
                       },
                       [](const auto&) {},
                   },
                   entry.event);
    }
    return r;
}

std::vector<Partition> SolveTrace::final_partitions(int num_clients) const {
    std::vector<Partition> out{Partition::singletons(num_clients)};
    for (const auto& entry : entries) {
        if (std::holds_alternative<AlphaRaised>(entry.event)) {
            out.assign(1, Partition::singletons(num_clients));
        } else if (const auto* m = std::get_if<Merged>(&entry.event)) {
            out.push_back(m->after);
        }
    }
    return out;
}

}  // namespace cde::im
