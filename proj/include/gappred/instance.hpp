#pragma once

#include <gappred/errors.hpp>
#include <gappred/rational.hpp>
#include <gappred/types.hpp>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gappred {

/// A GAP instance with a prediction: declared compatibility graph D, value
/// and size matrices over the complete bipartite graph, capacities, the
/// predicted assignment, a variant tag, and (in test/simulation contexts)
/// the private graph E. Immutable after `validate`; every operation on it
/// is a pure function.
struct Instance {
    int n = 0;  // agents 0..n-1
    int m = 0;  // resources 0..m-1

    std::vector<std::vector<Rational>> values;  // n x m, all > 0
    std::vector<std::vector<Rational>> sizes;   // n x m, all > 0, s[i][j] <= C[j]
    std::vector<Rational> capacities;           // m, all > 0

    std::vector<Edge> declared;            // D, sorted
    std::optional<std::vector<Edge>> truth;  // E, sorted; absent outside simulation
    Assignment prediction;                 // may contain edges outside D

    Variant variant = Variant::GAP;
    /// For VCGAP: resource ids ordered from most to least sought, i.e. the
    /// consensus permutation sigma as the list (sigma(1), ..., sigma(m)).
    std::optional<std::vector<int>> consensus_order;

    bool in_bounds(const Edge& e) const {
        return e.agent >= 0 && e.agent < n && e.resource >= 0 && e.resource < m;
    }

    bool is_declared(const Edge& e) const {
        return std::binary_search(declared.begin(), declared.end(), e);
    }

    bool is_true_edge(const Edge& e) const {
        if (!truth) raise(Errc::TruthUnavailable, "instance carries no private graph");
        return std::binary_search(truth->begin(), truth->end(), e);
    }

    /// Declared edges of agent i, resources ascending.
    std::vector<int> declared_row(int agent) const {
        std::vector<int> out;
        for (const Edge& e : declared)
            if (e.agent == agent) out.push_back(e.resource);
        return out;
    }

    /// 1-based consensus rank of resource j (1 = most sought). VCGAP only.
    int consensus_rank(int resource) const {
        if (!consensus_order) raise(Errc::MissingConsensusPermutation, "instance has no consensus permutation");
        for (std::size_t k = 0; k < consensus_order->size(); ++k)
            if ((*consensus_order)[k] == resource) return static_cast<int>(k) + 1;
        raise(Errc::BadInput, "resource " + std::to_string(resource) + " missing from consensus permutation");
    }

    /// Copy with agent i's declared row replaced (used by the deviation
    /// tester). Declarations do not participate in validation invariants
    /// beyond bounds, so no re-validation is needed.
    Instance with_declared_row(int agent, const std::vector<int>& resources) const {
        Instance out = *this;
        out.declared.clear();
        for (const Edge& e : declared)
            if (e.agent != agent) out.declared.push_back(e);
        for (int j : resources) {
            Edge e{agent, j};
            if (!in_bounds(e)) raise(Errc::BadInput, "declared edge out of bounds");
            out.declared.push_back(e);
        }
        std::sort(out.declared.begin(), out.declared.end());
        return out;
    }

    Instance with_declared(std::vector<Edge> edges) const {
        Instance out = *this;
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (const Edge& e : edges)
            if (!in_bounds(e)) raise(Errc::BadInput, "declared edge out of bounds");
        out.declared = std::move(edges);
        return out;
    }

    Instance with_prediction(Assignment pred) const {
        Instance out = *this;
        out.prediction = std::move(pred);
        return out;
    }
};

/// Total value of an assignment, Sum of v_ij over its edges; v(empty) = 0.
inline Rational assignment_value(const Instance& inst, const Assignment& m) {
    Rational total(0);
    for (const Edge& e : m.edges()) {
        if (!inst.in_bounds(e)) raise(Errc::BadInput, "assignment edge " + to_string(e) + " out of bounds");
        total += inst.values[e.agent][e.resource];
    }
    return total;
}

/// Feasibility of a raw edge set: edges lie in D, no agent appears twice,
/// and every resource's capacity holds.
inline bool is_feasible(const Instance& inst, std::span<const Edge> edges) {
    std::vector<bool> seen(static_cast<std::size_t>(inst.n), false);
    std::vector<Rational> load(static_cast<std::size_t>(inst.m), Rational(0));
    for (const Edge& e : edges) {
        if (!inst.in_bounds(e) || !inst.is_declared(e)) return false;
        if (seen[static_cast<std::size_t>(e.agent)]) return false;
        seen[static_cast<std::size_t>(e.agent)] = true;
        load[static_cast<std::size_t>(e.resource)] += inst.sizes[e.agent][e.resource];
        if (load[static_cast<std::size_t>(e.resource)] > inst.capacities[static_cast<std::size_t>(e.resource)])
            return false;
    }
    return true;
}

inline bool is_feasible(const Instance& inst, const Assignment& m) {
    return is_feasible(inst, std::span<const Edge>(m.edges()));
}

/// Per-agent utilities under the private graph E: u_i = v_ij when agent i
/// is assigned a truly compatible resource j, and 0 otherwise (unassigned,
/// or assigned through an edge the agent is not actually compatible with).
inline std::vector<Rational> agent_utilities(const Instance& inst, const Assignment& m) {
    if (!inst.truth) raise(Errc::TruthUnavailable, "agent_utilities needs the private graph E");
    std::vector<Rational> u(static_cast<std::size_t>(inst.n), Rational(0));
    for (const Edge& e : m.edges())
        if (inst.in_bounds(e) && inst.is_true_edge(e)) u[static_cast<std::size_t>(e.agent)] = inst.values[e.agent][e.resource];
    return u;
}

/// Value of the prediction restricted to the declared graph, v(M-hat ∩ D).
inline Rational predicted_value_in_declared(const Instance& inst) {
    Rational total(0);
    for (const Edge& e : inst.prediction.edges())
        if (inst.in_bounds(e) && inst.is_declared(e)) total += inst.values[e.agent][e.resource];
    return total;
}

/// Prediction error eta = 1 - v(M-hat ∩ D) / v(M*_D), in [0, 1].
/// `optimal_value` is v(M*_D), normally supplied by the oracle.
inline Rational prediction_error(const Instance& inst, const Rational& optimal_value) {
    if (optimal_value.sign() <= 0)
        raise(Errc::ZeroOptimum, "prediction error undefined when v(M*_D) = 0");
    return Rational(1) - predicted_value_in_declared(inst) / optimal_value;
}

namespace detail {

inline void check_prediction_capacity(const Instance& inst) {
    std::vector<Rational> load(static_cast<std::size_t>(inst.m), Rational(0));
    for (const Edge& e : inst.prediction.edges()) {
        if (!inst.in_bounds(e)) raise(Errc::InfeasiblePrediction, "predicted edge " + to_string(e) + " out of bounds");
        auto j = static_cast<std::size_t>(e.resource);
        load[j] += inst.sizes[e.agent][e.resource];
        if (load[j] > inst.capacities[j])
            raise(Errc::InfeasiblePrediction,
                  "prediction overloads resource " + std::to_string(e.resource));
    }
}

inline void check_variant(const Instance& inst) {
    auto mismatch = [&](const std::string& why) {
        raise(Errc::VariantMismatch, std::string(variant_name(inst.variant)) + " instance " + why);
    };
    const Rational one(1);
    auto unit_sizes_caps = [&] {
        for (int i = 0; i < inst.n; ++i)
            for (int j = 0; j < inst.m; ++j)
                if (inst.sizes[i][j] != one) mismatch("requires unit sizes");
        for (int j = 0; j < inst.m; ++j)
            if (inst.capacities[static_cast<std::size_t>(j)] != one) mismatch("requires unit capacities");
    };
    auto rows_constant = [&](const std::vector<std::vector<Rational>>& mat, const std::string& what) {
        for (int i = 0; i < inst.n; ++i)
            for (int j = 1; j < inst.m; ++j)
                if (mat[i][j] != mat[i][0]) mismatch("requires agent-uniform " + what);
    };
    auto cols_constant = [&](const std::vector<std::vector<Rational>>& mat, const std::string& what) {
        for (int j = 0; j < inst.m; ++j)
            for (int i = 1; i < inst.n; ++i)
                if (mat[i][j] != mat[0][j]) mismatch("requires resource-uniform " + what);
    };

    switch (inst.variant) {
        case Variant::UBMP:
            for (int i = 0; i < inst.n; ++i)
                for (int j = 0; j < inst.m; ++j)
                    if (inst.values[i][j] != one) mismatch("requires unit values");
            unit_sizes_caps();
            break;
        case Variant::BMP:
            unit_sizes_caps();
            break;
        case Variant::RMK:
            rows_constant(inst.values, "values");
            rows_constant(inst.sizes, "sizes");
            break;
        case Variant::ERMK:
            rows_constant(inst.values, "values");
            for (int i = 0; i < inst.n; ++i)
                for (int j = 0; j < inst.m; ++j)
                    if (inst.sizes[i][j] != inst.values[i][0]) mismatch("requires v_i = s_i");
            break;
        case Variant::VCGAP: {
            if (!inst.consensus_order)
                raise(Errc::MissingConsensusPermutation, "VCGAP instance needs a consensus permutation");
            const auto& order = *inst.consensus_order;
            if (static_cast<int>(order.size()) != inst.m)
                raise(Errc::BadInput, "consensus permutation has wrong length");
            std::vector<bool> seen(static_cast<std::size_t>(inst.m), false);
            for (int j : order) {
                if (j < 0 || j >= inst.m || seen[static_cast<std::size_t>(j)])
                    raise(Errc::BadInput, "consensus permutation is not a permutation of resources");
                seen[static_cast<std::size_t>(j)] = true;
            }
            for (int i = 0; i < inst.n; ++i)
                for (std::size_t k = 1; k < order.size(); ++k)
                    if (inst.values[i][order[k - 1]] < inst.values[i][order[k]])
                        mismatch("violates the consensus value order for agent " + std::to_string(i));
            break;
        }
        case Variant::AVGAP:
            rows_constant(inst.values, "values");
            break;
        case Variant::RVGAP:
            cols_constant(inst.values, "values");
            break;
        case Variant::ASGAP:
            rows_constant(inst.sizes, "sizes");
            break;
        case Variant::RSGAP:
            cols_constant(inst.sizes, "sizes");
            break;
        case Variant::GAP:
            break;
    }
}

}  // namespace detail

/// Checks every instance invariant and returns the canonicalized instance
/// (edge lists sorted and deduplicated). The variant tag is verified against
/// the data, never inferred: some data satisfies several variants at once.
inline Instance validate(Instance inst) {
    if (inst.n < 1 || inst.m < 1) raise(Errc::BadInput, "instance needs at least one agent and one resource");
    if (static_cast<int>(inst.values.size()) != inst.n || static_cast<int>(inst.sizes.size()) != inst.n ||
        static_cast<int>(inst.capacities.size()) != inst.m)
        raise(Errc::BadInput, "matrix dimensions disagree with n, m");
    for (int i = 0; i < inst.n; ++i)
        if (static_cast<int>(inst.values[i].size()) != inst.m || static_cast<int>(inst.sizes[i].size()) != inst.m)
            raise(Errc::BadInput, "matrix dimensions disagree with n, m");

    for (int j = 0; j < inst.m; ++j)
        if (inst.capacities[static_cast<std::size_t>(j)].sign() <= 0)
            raise(Errc::NonPositiveValue, "capacity of resource " + std::to_string(j) + " must be positive");
    for (int i = 0; i < inst.n; ++i) {
        for (int j = 0; j < inst.m; ++j) {
            if (inst.values[i][j].sign() <= 0)
                raise(Errc::NonPositiveValue, "value v[" + std::to_string(i) + "][" + std::to_string(j) + "] must be positive");
            if (inst.sizes[i][j].sign() <= 0)
                raise(Errc::NonPositiveValue, "size s[" + std::to_string(i) + "][" + std::to_string(j) + "] must be positive");
            if (inst.sizes[i][j] > inst.capacities[static_cast<std::size_t>(j)])
                raise(Errc::SizeExceedsCapacity,
                      "s[" + std::to_string(i) + "][" + std::to_string(j) + "] exceeds capacity of resource " + std::to_string(j));
        }
    }

    auto canon = [&](std::vector<Edge>& edges, const char* what) {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (const Edge& e : edges)
            if (!inst.in_bounds(e)) raise(Errc::BadInput, std::string(what) + " edge " + to_string(e) + " out of bounds");
    };
    canon(inst.declared, "declared");
    if (inst.truth) canon(*inst.truth, "truth");
    for (const Edge& e : inst.prediction.edges())
        if (!inst.in_bounds(e)) raise(Errc::BadInput, "predicted edge " + to_string(e) + " out of bounds");

    detail::check_variant(inst);
    detail::check_prediction_capacity(inst);
    return inst;
}

}  // namespace gappred
