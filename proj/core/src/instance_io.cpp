#include "cde/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cde/errors.hpp"

namespace cde {

RawInstance parse_instance(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInstance(std::string("instance is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("L") || !doc.contains("has_sets"))
        throw InvalidInstance("instance must be an object with fields L and has_sets");
    if (!doc["L"].is_number_integer()) throw InvalidInstance("L must be an integer");
    if (!doc["has_sets"].is_array()) throw InvalidInstance("has_sets must be an array");

    RawInstance raw;
    raw.num_packets = doc["L"].get<std::int64_t>();
    for (const auto& h : doc["has_sets"]) {
        if (!h.is_array()) throw InvalidInstance("each has-set must be an array of packet ids");
        std::vector<std::int64_t> ids;
        for (const auto& p : h) {
            if (!p.is_number_integer()) throw InvalidInstance("packet ids must be integers");
            ids.push_back(p.get<std::int64_t>());
        }
        raw.has_sets.push_back(std::move(ids));
    }
    return raw;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInstance("cannot open instance file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return Instance(parse_instance(buf.str()));
}

std::string serialize_instance(const Instance& instance) {
    const auto raw = instance.raw();
    nlohmann::json doc;
    doc["L"] = raw.num_packets;
    doc["has_sets"] = raw.has_sets;
    return doc.dump();
}

}  // namespace cde
