#pragma once

#include <gappred/instance.hpp>

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace gappred {

/// Exact parse of a JSON value holding a rational: a string "p/q", "p" or
/// a decimal like "1.9", or a JSON integer. JSON floats are rejected so no
/// binary rounding can sneak in; decimals must be quoted.
inline Rational rational_from_json(const nlohmann::json& j, const std::string& where) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Rational(static_cast<std::int64_t>(j.get<std::uint64_t>()));
    if (j.is_number_float())
        raise(Errc::BadInput, where + ": quote decimal values (e.g. \"1.9\") so they stay exact");
    raise(Errc::BadInput, where + ": expected a rational as string or integer");
}

inline std::vector<Edge> edges_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) raise(Errc::BadInput, where + ": expected a list of [agent, resource] pairs");
    std::vector<Edge> out;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
            raise(Errc::BadInput, where + ": expected [agent, resource] integer pairs");
        out.push_back(Edge{pair[0].get<int>(), pair[1].get<int>()});
    }
    return out;
}

inline nlohmann::json edges_to_json(const std::vector<Edge>& edges) {
    nlohmann::json out = nlohmann::json::array();
    for (const Edge& e : edges) out.push_back({e.agent, e.resource});
    return out;
}

/// Instance file format: keys `agents`, `resources`, `values` (n x m),
/// `sizes` (omitted => all 1), `capacities` (omitted => all 1), `declared`,
/// `truth` (optional), `prediction`, `variant`, `consensus_perm` (optional).
inline Instance instance_from_json(const nlohmann::json& j) {
    Instance inst;
    if (!j.contains("agents") || !j.contains("resources"))
        raise(Errc::BadInput, "instance file needs 'agents' and 'resources'");
    inst.n = j.at("agents").get<int>();
    inst.m = j.at("resources").get<int>();
    if (inst.n < 1 || inst.m < 1) raise(Errc::BadInput, "instance needs agents >= 1 and resources >= 1");

    auto matrix = [&](const char* key, const Rational& fallback) {
        std::vector<std::vector<Rational>> mat(static_cast<std::size_t>(inst.n),
                                               std::vector<Rational>(static_cast<std::size_t>(inst.m), fallback));
        if (!j.contains(key)) return mat;
        const auto& rows = j.at(key);
        if (!rows.is_array() || static_cast<int>(rows.size()) != inst.n)
            raise(Errc::BadInput, std::string(key) + " must be an n x m array");
        for (int i = 0; i < inst.n; ++i) {
            if (!rows[static_cast<std::size_t>(i)].is_array() ||
                static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != inst.m)
                raise(Errc::BadInput, std::string(key) + " must be an n x m array");
            for (int jj = 0; jj < inst.m; ++jj)
                mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)] = rational_from_json(
                    rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)],
                    std::string(key) + "[" + std::to_string(i) + "][" + std::to_string(jj) + "]");
        }
        return mat;
    };

    if (!j.contains("values")) raise(Errc::BadInput, "instance file needs 'values'");
    inst.values = matrix("values", Rational(1));
    inst.sizes = matrix("sizes", Rational(1));

    inst.capacities.assign(static_cast<std::size_t>(inst.m), Rational(1));
    if (j.contains("capacities")) {
        const auto& caps = j.at("capacities");
        if (!caps.is_array() || static_cast<int>(caps.size()) != inst.m)
            raise(Errc::BadInput, "capacities must be a length-m array");
        for (int jj = 0; jj < inst.m; ++jj)
            inst.capacities[static_cast<std::size_t>(jj)] =
                rational_from_json(caps[static_cast<std::size_t>(jj)], "capacities[" + std::to_string(jj) + "]");
    }

    if (!j.contains("declared")) raise(Errc::BadInput, "instance file needs 'declared'");
    inst.declared = edges_from_json(j.at("declared"), "declared");
    if (j.contains("truth") && !j.at("truth").is_null()) inst.truth = edges_from_json(j.at("truth"), "truth");
    if (j.contains("prediction")) inst.prediction = Assignment(edges_from_json(j.at("prediction"), "prediction"));

    std::string variant = j.value("variant", std::string("GAP"));
    auto v = variant_from_name(variant);
    if (!v) raise(Errc::BadInput, "unknown variant '" + variant + "'");
    inst.variant = *v;

    if (j.contains("consensus_perm") && !j.at("consensus_perm").is_null()) {
        std::vector<int> order;
        for (const auto& x : j.at("consensus_perm")) order.push_back(x.get<int>());
        inst.consensus_order = std::move(order);
    }
    return validate(std::move(inst));
}

inline nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["agents"] = inst.n;
    j["resources"] = inst.m;
    auto matrix = [&](const std::vector<std::vector<Rational>>& mat) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : mat) {
            nlohmann::json r = nlohmann::json::array();
            for (const Rational& q : row) r.push_back(q.to_string());
            rows.push_back(std::move(r));
        }
        return rows;
    };
    j["values"] = matrix(inst.values);
    j["sizes"] = matrix(inst.sizes);
    nlohmann::json caps = nlohmann::json::array();
    for (const Rational& c : inst.capacities) caps.push_back(c.to_string());
    j["capacities"] = std::move(caps);
    j["declared"] = edges_to_json(inst.declared);
    if (inst.truth) j["truth"] = edges_to_json(*inst.truth);
    j["prediction"] = edges_to_json(inst.prediction.edges());
    j["variant"] = variant_name(inst.variant);
    if (inst.consensus_order) j["consensus_perm"] = *inst.consensus_order;
    return j;
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::BadInput, "cannot open instance file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::BadInput, "bad JSON in '" + path + "': " + e.what());
    }
    return instance_from_json(j);
}

inline void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(Errc::BadInput, "cannot write instance file '" + path + "'");
    out << instance_to_json(inst).dump(2) << "\n";
}

}  // namespace gappred
