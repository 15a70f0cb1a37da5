#pragma once

#include "error.hpp"
#include "interpretation.hpp"
#include "tbox.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ciforge {

/// Reads {"domain": [...], "concepts": {name: [ids]}, "roles": {name: [[s, t], ...]}}.
inline Interpretation parse_interpretation(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    InterpretationData d;
    try {
        if (!j.is_object())
            throw ValidationError("interpretation must be a JSON object");
        if (!j.contains("domain"))
            throw ValidationError("missing field 'domain'");
        d.domain = j.at("domain").get<std::vector<std::string>>();
        if (j.contains("concepts"))
            for (const auto& [name, ids] : j.at("concepts").items())
                d.concepts[name] = ids.get<std::vector<std::string>>();
        if (j.contains("roles"))
            for (const auto& [name, pairs] : j.at("roles").items()) {
                auto& v = d.roles[name];
                for (const auto& p : pairs) {
                    if (!p.is_array() || p.size() != 2)
                        throw ValidationError("role '" + name + "' needs [source, target] pairs");
                    v.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
                }
            }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed interpretation: ") + e.what());
    }
    return Interpretation(d);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Interpretation load_interpretation(const std::string& path) { return parse_interpretation(read_file(path)); }

inline std::string dump_interpretation(const Interpretation& i) {
    auto d = i.data();
    nlohmann::ordered_json j;
    j["domain"] = d.domain;
    j["concepts"] = nlohmann::ordered_json::object();
    for (const auto& [name, ids] : d.concepts)
        j["concepts"][name] = ids;
    j["roles"] = nlohmann::ordered_json::object();
    for (const auto& [name, pairs] : d.roles) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [s, t] : pairs)
            arr.push_back({s, t});
        j["roles"][name] = arr;
    }
    return j.dump(2) + "\n";
}

inline void save_interpretation(const Interpretation& i, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << dump_interpretation(i);
}

inline TBox load_tbox(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    return read_tbox(in);
}

namespace fixtures {

/// Two countries: x1 with government x3 and region x5 (capital x6), x2 with
/// government x4 and region x7 whose capital is x2 again.
inline Interpretation fig3() {
    InterpretationData d;
    d.domain = {"x1", "x2", "x3", "x4", "x5", "x6", "x7"};
    d.concepts = {{"City", {"x1", "x2"}},
                  {"Party", {"x3", "x4"}},
                  {"Liberal", {"x3"}},
                  {"Organization", {"x4"}},
                  {"Region", {"x5", "x7"}}};
    d.roles = {{"government", {{"x1", "x3"}, {"x2", "x4"}}},
               {"partof", {{"x1", "x5"}, {"x2", "x7"}}},
               {"capital", {{"x5", "x6"}, {"x7", "x2"}}}};
    return Interpretation(d);
}

inline Interpretation fig4i() {
    InterpretationData d;
    d.domain = {"v1", "v2"};
    d.concepts = {{"A", {"v1"}}};
    d.roles = {{"r", {{"v1", "v2"}, {"v2", "v2"}}}};
    return Interpretation(d);
}

inline Interpretation fig4ii() {
    InterpretationData d;
    d.domain = {"x1", "x2", "x3", "x4"};
    d.concepts = {{"A", {"x1"}}, {"B", {"x2"}}};
    d.roles = {{"r", {{"x2", "x2"}, {"x4", "x4"}, {"x3", "x2"}}}, {"s", {{"x1", "x2"}, {"x3", "x4"}}}};
    return Interpretation(d);
}

/// Hubs x1, x2, x3 (B) on r-cycles of length 2, 3, 5; the hub's predecessor
/// on each cycle is A. x4 is B with an r-loop, x5 is A and B with an r-loop.
inline Interpretation fig5() {
    InterpretationData d;
    auto& roles = d.roles["r"];
    std::vector<std::string> a_members;
    const int lengths[] = {2, 3, 5};
    for (int h = 0; h < 3; ++h) {
        std::string hub = "x" + std::to_string(h + 1);
        d.domain.push_back(hub);
        std::string prev = hub;
        for (int k = 1; k < lengths[h]; ++k) {
            std::string v = "c" + std::to_string(lengths[h]) + "_" + std::to_string(k);
            d.domain.push_back(v);
            roles.emplace_back(prev, v);
            prev = v;
        }
        roles.emplace_back(prev, hub);
        a_members.push_back(prev);
    }
    d.domain.push_back("x4");
    d.domain.push_back("x5");
    roles.emplace_back("x4", "x4");
    roles.emplace_back("x5", "x5");
    a_members.push_back("x5");
    d.concepts["A"] = a_members;
    d.concepts["B"] = {"x1", "x2", "x3", "x4", "x5"};
    return Interpretation(d);
}

inline Interpretation fig7() {
    InterpretationData d;
    d.domain = {"a", "b"};
    d.concepts = {{"City", {"a"}}, {"Region", {"b"}}};
    d.roles = {{"partof", {{"a", "b"}}}, {"capital", {{"b", "a"}}}};
    return Interpretation(d);
}

inline const std::vector<std::string>& names() {
    static const std::vector<std::string> n = {"fig3", "fig4i", "fig4ii", "fig5", "fig7"};
    return n;
}

} // namespace fixtures

inline Interpretation builtin_fixture(const std::string& name) {
    if (name == "fig3")
        return fixtures::fig3();
    if (name == "fig4i")
        return fixtures::fig4i();
    if (name == "fig4ii")
        return fixtures::fig4ii();
    if (name == "fig5")
        return fixtures::fig5();
    if (name == "fig7")
        return fixtures::fig7();
    throw ValidationError("unknown fixture '" + name + "'");
}

} // namespace ciforge
