#pragma once

#include <gappred/errors.hpp>
#include <gappred/instance.hpp>

#include <cstdint>
#include <vector>

namespace gappred {

struct OracleResult {
    Assignment assignment;
    Rational value;
    std::uint64_t nodes_explored = 0;

    friend bool operator==(const OracleResult&, const OracleResult&) = default;
};

inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

namespace detail {

struct BruteForceState {
    const Instance* inst;
    std::vector<std::vector<int>> rows;     // declared resources per agent, ascending
    std::vector<Rational> suffix_best;      // sum over agents >= i of their best edge value
    std::vector<Rational> load;
    std::vector<Edge> current;
    std::vector<Edge> best_edges;
    Rational current_value{0};
    Rational best_value{0};
    std::uint64_t nodes = 0;
    std::uint64_t budget = 0;

    // Branch order: resources ascending, then "leave unassigned" last. That
    // makes the DFS visit complete assignments in ascending lexicographic
    // order of their sorted edge sets, so keeping the first strictly-better
    // solution yields the lexicographically smallest optimum.
    void dfs(int agent) {
        if (++nodes > budget)
            raise(Errc::BudgetExceeded, "oracle exceeded " + std::to_string(budget) + " branch nodes");
        const int n = inst->n;
        if (agent == n) {
            if (current_value > best_value) {
                best_value = current_value;
                best_edges = current;
            }
            return;
        }
        if (current_value + suffix_best[static_cast<std::size_t>(agent)] <= best_value) return;
        for (int j : rows[static_cast<std::size_t>(agent)]) {
            const Rational& s = inst->sizes[agent][j];
            auto ju = static_cast<std::size_t>(j);
            if (load[ju] + s <= inst->capacities[ju]) {
                load[ju] += s;
                current.push_back(Edge{agent, j});
                current_value += inst->values[agent][j];
                dfs(agent + 1);
                current_value -= inst->values[agent][j];
                current.pop_back();
                load[ju] -= s;
            }
        }
        dfs(agent + 1);
    }
};

}  // namespace detail

/// Exhaustive branch-and-bound for v(M*_D): branches on agents in index
/// order, prunes with the sum of the remaining agents' best edge values.
/// Among equal-value optima, returns the one whose edge set is smallest in
/// lexicographic (agent, resource) order. Deterministic, bit-for-bit.
inline OracleResult optimal_bruteforce(const Instance& inst, std::uint64_t budget = kDefaultOracleBudget) {
    detail::BruteForceState st;
    st.inst = &inst;
    st.budget = budget;
    st.rows.resize(static_cast<std::size_t>(inst.n));
    for (const Edge& e : inst.declared) st.rows[static_cast<std::size_t>(e.agent)].push_back(e.resource);
    st.suffix_best.assign(static_cast<std::size_t>(inst.n) + 1, Rational(0));
    for (int i = inst.n - 1; i >= 0; --i) {
        Rational best(0);
        for (int j : st.rows[static_cast<std::size_t>(i)])
            if (inst.values[i][j] > best) best = inst.values[i][j];
        st.suffix_best[static_cast<std::size_t>(i)] = st.suffix_best[static_cast<std::size_t>(i) + 1] + best;
    }
    st.load.assign(static_cast<std::size_t>(inst.m), Rational(0));
    st.dfs(0);
    return OracleResult{Assignment(std::move(st.best_edges)), std::move(st.best_value), st.nodes};
}

/// Maximum-weight bipartite matching for BMP-shaped instances (unit sizes
/// and capacities), so acceptance sweeps can scale past brute force.
/// Hungarian algorithm over exact rationals on the square padded matrix;
/// non-declared pads carry weight zero and are dropped from the result.
inline OracleResult optimal_matching_bmp(const Instance& inst) {
    if (inst.variant != Variant::UBMP && inst.variant != Variant::BMP)
        raise(Errc::VariantMismatch, "optimal_matching_bmp needs a UBMP or BMP instance");

    const int N = std::max(inst.n, inst.m);
    std::vector<std::vector<Rational>> cost(static_cast<std::size_t>(N) + 1,
                                            std::vector<Rational>(static_cast<std::size_t>(N) + 1, Rational(0)));
    Rational inf(1);
    for (const Edge& e : inst.declared) {
        cost[static_cast<std::size_t>(e.agent) + 1][static_cast<std::size_t>(e.resource) + 1] =
            -inst.values[e.agent][e.resource];
        inf += inst.values[e.agent][e.resource];
    }

    std::vector<Rational> u(static_cast<std::size_t>(N) + 1, Rational(0));
    std::vector<Rational> v(static_cast<std::size_t>(N) + 1, Rational(0));
    std::vector<int> p(static_cast<std::size_t>(N) + 1, 0), way(static_cast<std::size_t>(N) + 1, 0);
    std::uint64_t rounds = 0;

    for (int i = 1; i <= N; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<Rational> minv(static_cast<std::size_t>(N) + 1, inf);
        std::vector<bool> used(static_cast<std::size_t>(N) + 1, false);
        do {
            ++rounds;
            used[static_cast<std::size_t>(j0)] = true;
            int i0 = p[static_cast<std::size_t>(j0)], j1 = 0;
            Rational delta = inf;
            for (int j = 1; j <= N; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                Rational cur = cost[static_cast<std::size_t>(i0)][static_cast<std::size_t>(j)] -
                               u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= N; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<Edge> edges;
    Rational total(0);
    for (int j = 1; j <= N; ++j) {
        int i = p[static_cast<std::size_t>(j)];
        if (i == 0 || i > inst.n || j > inst.m) continue;
        Edge e{i - 1, j - 1};
        if (inst.is_declared(e)) {
            edges.push_back(e);
            total += inst.values[e.agent][e.resource];
        }
    }
    return OracleResult{Assignment(std::move(edges)), std::move(total), rounds};
}

}  // namespace gappred
