#pragma once

#include <gappred/errors.hpp>
#include <gappred/rational.hpp>

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gappred {

/// Agent-resource pair. Agents and resources are dense indices
/// 0..n-1 and 0..m-1; external labels stop at the file-format boundary.
struct Edge {
    int agent = 0;
    int resource = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::string to_string(const Edge& e) {
    return "(" + std::to_string(e.agent) + "," + std::to_string(e.resource) + ")";
}

enum class Variant { UBMP, BMP, RMK, ERMK, VCGAP, AVGAP, RVGAP, ASGAP, RSGAP, GAP };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::UBMP: return "UBMP";
        case Variant::BMP: return "BMP";
        case Variant::RMK: return "RMK";
        case Variant::ERMK: return "ERMK";
        case Variant::VCGAP: return "VCGAP";
        case Variant::AVGAP: return "AVGAP";
        case Variant::RVGAP: return "RVGAP";
        case Variant::ASGAP: return "ASGAP";
        case Variant::RSGAP: return "RSGAP";
        case Variant::GAP: return "GAP";
    }
    return "?";
}

inline std::optional<Variant> variant_from_name(std::string_view s) {
    for (Variant v : {Variant::UBMP, Variant::BMP, Variant::RMK, Variant::ERMK, Variant::VCGAP,
                      Variant::AVGAP, Variant::RVGAP, Variant::ASGAP, Variant::RSGAP, Variant::GAP})
        if (s == variant_name(v)) return v;
    return std::nullopt;
}

/// Many-to-one assignment: a set of edges with at most one resource per
/// agent. Stored sorted by (agent, resource); equality is set equality.
class Assignment {
public:
    Assignment() = default;

    explicit Assignment(std::vector<Edge> edges) : edges_(std::move(edges)) {
        std::sort(edges_.begin(), edges_.end());
        for (std::size_t k = 1; k < edges_.size(); ++k)
            if (edges_[k].agent == edges_[k - 1].agent)
                raise(Errc::BadInput, "assignment gives agent " + std::to_string(edges_[k].agent) +
                                          " more than one resource");
    }

    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }

    bool contains(const Edge& e) const {
        return std::binary_search(edges_.begin(), edges_.end(), e);
    }

    /// Resource assigned to `agent`, if any.
    std::optional<int> resource_of(int agent) const {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{agent, 0},
                                   [](const Edge& a, const Edge& b) { return a.agent < b.agent; });
        if (it != edges_.end() && it->agent == agent) return it->resource;
        return std::nullopt;
    }

    std::vector<int> agents_of(int resource) const {
        std::vector<int> out;
        for (const Edge& e : edges_)
            if (e.resource == resource) out.push_back(e.agent);
        return out;
    }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::vector<Edge> edges_;
};

inline std::string to_string(const Assignment& m) {
    std::string out = "{";
    for (std::size_t k = 0; k < m.edges().size(); ++k) {
        if (k) out += ", ";
        out += to_string(m.edges()[k]);
    }
    return out + "}";
}

}  // namespace gappred
