#pragma once

#include <gappred/errors.hpp>
#include <gappred/instance.hpp>
#include <gappred/surd.hpp>
#include <gappred/trace.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gappred {

/// The boosted offer an agent makes along an edge: the plain value for
/// non-predicted edges, the gamma-scaled value for predicted ones.
struct Offer {
    Edge edge;
    Surd theta;
};

inline void require_gamma(const Surd& gamma) {
    if ((gamma - Surd(Rational(1))).sign() < 0)
        raise(Errc::GammaBelowOne, "confidence parameter must be >= 1, got " + gamma.to_string());
}

inline Offer offer(const Instance& inst, Edge e, const Surd& gamma) {
    require_gamma(gamma);
    Surd v = Rational(inst.values[e.agent][e.resource]);
    return Offer{e, inst.prediction.contains(e) ? gamma * v : v};
}

/// Mechanism that simply follows the prediction: returns M-hat ∩ D.
inline Assignment trust(const Instance& inst) {
    std::vector<Edge> edges;
    for (const Edge& e : inst.prediction.edges())
        if (inst.in_bounds(e) && inst.is_declared(e)) edges.push_back(e);
    return Assignment(std::move(edges));
}

/// How the next proposing agent is picked among the active ones. Any rule
/// yields the same matching (agent-proposing deferred acceptance is
/// selection-independent); the knob exists so tests can demonstrate that.
enum class ActiveSelection { LowestIndex, LargestNextOffer };

struct BoostOptions {
    ActiveSelection selection = ActiveSelection::LowestIndex;
};

struct MechanismRun {
    Assignment assignment;
    Trace trace;
};

namespace detail {

inline bool unit_sizes_and_capacities(const Instance& inst) {
    const Rational one(1);
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.m; ++j)
            if (inst.sizes[i][j] != one) return false;
    for (const Rational& c : inst.capacities)
        if (c != one) return false;
    return true;
}

// Resource-side preference: offers descending, ties to the lower agent
// index (tie rule tau_j, fixed before execution and independent of the
// declarations).
inline bool resource_prefers(const Surd& theta_new, int agent_new, const Surd& theta_cur, int agent_cur) {
    int cmp = (theta_new - theta_cur).sign();
    if (cmp != 0) return cmp > 0;
    return agent_new < agent_cur;
}

}  // namespace detail

/// Agent-proposing deferred acceptance with boosted offers, run with
/// one-to-one semantics on (G[D], v, M-hat). Sizes, capacities and the
/// variant tag of `inst` are ignored here; the prediction may be
/// many-to-one (it only enters through the offers). This is the core that
/// both the BMP mechanism and the randomized GAP mechanism build on.
inline MechanismRun boost_one_to_one(const Instance& inst, const Surd& gamma,
                                     const BoostOptions& opts = {}) {
    require_gamma(gamma);

    // Proposal order per agent: values descending, ties to the lower
    // resource index (tie rule tau_i).
    std::vector<std::vector<int>> proposals(static_cast<std::size_t>(inst.n));
    for (const Edge& e : inst.declared) proposals[static_cast<std::size_t>(e.agent)].push_back(e.resource);
    for (int i = 0; i < inst.n; ++i) {
        auto& row = proposals[static_cast<std::size_t>(i)];
        std::stable_sort(row.begin(), row.end(), [&](int a, int b) {
            const Rational &va = inst.values[i][a], &vb = inst.values[i][b];
            if (va != vb) return va > vb;
            return a < b;
        });
    }

    auto theta = [&](int i, int j) { return offer(inst, Edge{i, j}, gamma).theta; };

    std::vector<std::size_t> next(static_cast<std::size_t>(inst.n), 0);
    std::vector<int> mate_of_agent(static_cast<std::size_t>(inst.n), -1);
    std::vector<int> mate_of_resource(static_cast<std::size_t>(inst.m), -1);
    std::vector<bool> active(static_cast<std::size_t>(inst.n), false);
    int active_count = 0;
    for (int i = 0; i < inst.n; ++i)
        if (!proposals[static_cast<std::size_t>(i)].empty()) {
            active[static_cast<std::size_t>(i)] = true;
            ++active_count;
        }

    auto pick_active = [&]() -> int {
        if (opts.selection == ActiveSelection::LowestIndex) {
            for (int i = 0; i < inst.n; ++i)
                if (active[static_cast<std::size_t>(i)]) return i;
        } else {
            int best = -1;
            Surd best_theta = Rational(0);
            for (int i = 0; i < inst.n; ++i) {
                if (!active[static_cast<std::size_t>(i)]) continue;
                Surd t = theta(i, proposals[static_cast<std::size_t>(i)][next[static_cast<std::size_t>(i)]]);
                if (best == -1 || (t - best_theta).sign() > 0) {
                    best = i;
                    best_theta = t;
                }
            }
            return best;
        }
        return -1;
    };

    Trace trace;
    while (active_count > 0) {
        int i = pick_active();
        auto iu = static_cast<std::size_t>(i);
        int j = proposals[iu][next[iu]++];
        auto ju = static_cast<std::size_t>(j);
        Surd t = theta(i, j);
        trace.emit(TraceEvent::Kind::Propose, Edge{i, j}, {t});

        int cur = mate_of_resource[ju];
        bool accepted = (cur == -1) || detail::resource_prefers(t, i, theta(cur, j), cur);
        if (accepted) {
            if (cur != -1) {
                trace.emit(TraceEvent::Kind::Reject, Edge{cur, j}, {theta(cur, j)});
                mate_of_agent[static_cast<std::size_t>(cur)] = -1;
                if (next[static_cast<std::size_t>(cur)] < proposals[static_cast<std::size_t>(cur)].size()) {
                    active[static_cast<std::size_t>(cur)] = true;
                    ++active_count;
                }
            }
            trace.emit(TraceEvent::Kind::Accept, Edge{i, j}, {t});
            mate_of_resource[ju] = i;
            mate_of_agent[iu] = j;
            active[iu] = false;
            --active_count;
        } else {
            trace.emit(TraceEvent::Kind::Reject, Edge{i, j}, {t});
            if (next[iu] >= proposals[iu].size()) {
                active[iu] = false;
                --active_count;
            }
        }
    }

    std::vector<Edge> edges;
    for (int i = 0; i < inst.n; ++i)
        if (mate_of_agent[static_cast<std::size_t>(i)] != -1)
            edges.push_back(Edge{i, mate_of_agent[static_cast<std::size_t>(i)]});
    return MechanismRun{Assignment(std::move(edges)), std::move(trace)};
}

/// The BMP mechanism: deferred acceptance where predicted edges propose
/// boosted offers. Requires a BMP-shaped instance (unit sizes and
/// capacities); the prediction may be many-to-one.
inline MechanismRun boost_run(const Instance& inst, const Surd& gamma, const BoostOptions& opts = {}) {
    if (!detail::unit_sizes_and_capacities(inst))
        raise(Errc::VariantMismatch, "boost needs unit sizes and unit capacities");
    return boost_one_to_one(inst, gamma, opts);
}

inline Assignment boost_matching(const Instance& inst, const Surd& gamma, const BoostOptions& opts = {}) {
    return boost_run(inst, gamma, opts).assignment;
}

/// Capacitated variant: unit sizes, integer capacities; each resource
/// tentatively holds its up to C_j best offers and rejects the rest.
inline MechanismRun boost_capacitated_run(const Instance& inst, const Surd& gamma,
                                          const BoostOptions& opts = {}) {
    require_gamma(gamma);
    const Rational one(1);
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.m; ++j)
            if (inst.sizes[i][j] != one)
                raise(Errc::VariantMismatch, "boost_capacitated needs unit sizes");
    std::vector<long long> caps;
    caps.reserve(static_cast<std::size_t>(inst.m));
    for (const Rational& c : inst.capacities) {
        if (!c.is_integer())
            raise(Errc::NonIntegerCapacity, "boost_capacitated needs integer capacities, got " + c.to_string());
        caps.push_back(static_cast<long long>(c.num()));
    }

    std::vector<std::vector<int>> proposals(static_cast<std::size_t>(inst.n));
    for (const Edge& e : inst.declared) proposals[static_cast<std::size_t>(e.agent)].push_back(e.resource);
    for (int i = 0; i < inst.n; ++i) {
        auto& row = proposals[static_cast<std::size_t>(i)];
        std::stable_sort(row.begin(), row.end(), [&](int a, int b) {
            const Rational &va = inst.values[i][a], &vb = inst.values[i][b];
            if (va != vb) return va > vb;
            return a < b;
        });
    }

    auto theta = [&](int i, int j) { return offer(inst, Edge{i, j}, gamma).theta; };

    std::vector<std::size_t> next(static_cast<std::size_t>(inst.n), 0);
    std::vector<std::vector<int>> held(static_cast<std::size_t>(inst.m));
    std::vector<int> mate_of_agent(static_cast<std::size_t>(inst.n), -1);
    std::vector<bool> active(static_cast<std::size_t>(inst.n), false);
    int active_count = 0;
    for (int i = 0; i < inst.n; ++i)
        if (!proposals[static_cast<std::size_t>(i)].empty()) {
            active[static_cast<std::size_t>(i)] = true;
            ++active_count;
        }

    auto pick_active = [&]() -> int {
        if (opts.selection == ActiveSelection::LowestIndex) {
            for (int i = 0; i < inst.n; ++i)
                if (active[static_cast<std::size_t>(i)]) return i;
        } else {
            int best = -1;
            Surd best_theta = Rational(0);
            for (int i = 0; i < inst.n; ++i) {
                if (!active[static_cast<std::size_t>(i)]) continue;
                Surd t = theta(i, proposals[static_cast<std::size_t>(i)][next[static_cast<std::size_t>(i)]]);
                if (best == -1 || (t - best_theta).sign() > 0) {
                    best = i;
                    best_theta = t;
                }
            }
            return best;
        }
        return -1;
    };

    Trace trace;
    while (active_count > 0) {
        int i = pick_active();
        auto iu = static_cast<std::size_t>(i);
        int j = proposals[iu][next[iu]++];
        auto ju = static_cast<std::size_t>(j);
        Surd t = theta(i, j);
        trace.emit(TraceEvent::Kind::Propose, Edge{i, j}, {t});

        bool accepted;
        int displaced = -1;
        if (static_cast<long long>(held[ju].size()) < caps[ju]) {
            accepted = true;
        } else {
            int worst = held[ju][0];
            for (int k : held[ju])
                if (detail::resource_prefers(theta(worst, j), worst, theta(k, j), k)) worst = k;
            accepted = detail::resource_prefers(t, i, theta(worst, j), worst);
            if (accepted) displaced = worst;
        }

        if (accepted) {
            if (displaced != -1) {
                trace.emit(TraceEvent::Kind::Reject, Edge{displaced, j}, {theta(displaced, j)});
                held[ju].erase(std::find(held[ju].begin(), held[ju].end(), displaced));
                mate_of_agent[static_cast<std::size_t>(displaced)] = -1;
                if (next[static_cast<std::size_t>(displaced)] < proposals[static_cast<std::size_t>(displaced)].size()) {
                    active[static_cast<std::size_t>(displaced)] = true;
                    ++active_count;
                }
            }
            trace.emit(TraceEvent::Kind::Accept, Edge{i, j}, {t});
            held[ju].push_back(i);
            mate_of_agent[iu] = j;
            active[iu] = false;
            --active_count;
        } else {
            trace.emit(TraceEvent::Kind::Reject, Edge{i, j}, {t});
            if (next[iu] >= proposals[iu].size()) {
                active[iu] = false;
                --active_count;
            }
        }
    }

    std::vector<Edge> edges;
    for (int i = 0; i < inst.n; ++i)
        if (mate_of_agent[static_cast<std::size_t>(i)] != -1)
            edges.push_back(Edge{i, mate_of_agent[static_cast<std::size_t>(i)]});
    return MechanismRun{Assignment(std::move(edges)), std::move(trace)};
}

inline Assignment boost_capacitated(const Instance& inst, const Surd& gamma, const BoostOptions& opts = {}) {
    return boost_capacitated_run(inst, gamma, opts).assignment;
}

/// Reduction from RSGAP to BMP: resource j becomes floor(C_j / s_j) unit
/// copies, each inheriting j's declared edges and values; predicted edges
/// of j land one per copy, agents in ascending index order.
struct RsgapReduction {
    Instance bmp;
    std::vector<int> copy_to_original;  // new resource index -> original resource

    Assignment translate(const Assignment& matching) const {
        std::vector<Edge> edges;
        for (const Edge& e : matching.edges())
            edges.push_back(Edge{e.agent, copy_to_original[static_cast<std::size_t>(e.resource)]});
        return Assignment(std::move(edges));
    }
};

inline RsgapReduction rsgap_reduce(const Instance& inst) {
    if (inst.variant != Variant::RSGAP)
        raise(Errc::VariantMismatch, "rsgap_reduce needs an RSGAP instance");

    std::vector<int> first_copy(static_cast<std::size_t>(inst.m), 0);
    std::vector<int> copy_to_original;
    for (int j = 0; j < inst.m; ++j) {
        first_copy[static_cast<std::size_t>(j)] = static_cast<int>(copy_to_original.size());
        // s_ij = s_j for all i; row 0 is as good as any.
        BigInt copies = floor(inst.capacities[static_cast<std::size_t>(j)] / inst.sizes[0][j]);
        for (BigInt c = 0; c < copies; ++c) copy_to_original.push_back(j);
    }
    const int mm = static_cast<int>(copy_to_original.size());

    Instance out;
    out.n = inst.n;
    out.m = mm;
    out.values.assign(static_cast<std::size_t>(inst.n), std::vector<Rational>(static_cast<std::size_t>(mm), Rational(1)));
    out.sizes.assign(static_cast<std::size_t>(inst.n), std::vector<Rational>(static_cast<std::size_t>(mm), Rational(1)));
    out.capacities.assign(static_cast<std::size_t>(mm), Rational(1));
    for (int i = 0; i < inst.n; ++i)
        for (int jj = 0; jj < mm; ++jj)
            out.values[i][jj] = inst.values[i][copy_to_original[static_cast<std::size_t>(jj)]];

    for (const Edge& e : inst.declared) {
        int base = first_copy[static_cast<std::size_t>(e.resource)];
        int count = (e.resource + 1 < inst.m ? first_copy[static_cast<std::size_t>(e.resource) + 1]
                                             : mm) - base;
        for (int c = 0; c < count; ++c) out.declared.push_back(Edge{e.agent, base + c});
    }
    if (inst.truth) {
        out.truth.emplace();
        for (const Edge& e : *inst.truth) {
            int base = first_copy[static_cast<std::size_t>(e.resource)];
            int count = (e.resource + 1 < inst.m ? first_copy[static_cast<std::size_t>(e.resource) + 1]
                                                 : mm) - base;
            for (int c = 0; c < count; ++c) out.truth->push_back(Edge{e.agent, base + c});
        }
    }

    std::vector<Edge> pred;
    for (int j = 0; j < inst.m; ++j) {
        std::vector<int> predicted = inst.prediction.agents_of(j);  // ascending
        int base = first_copy[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k < predicted.size(); ++k)
            pred.push_back(Edge{predicted[k], base + static_cast<int>(k)});
    }
    out.prediction = Assignment(std::move(pred));
    out.variant = Variant::BMP;

    return RsgapReduction{validate(std::move(out)), std::move(copy_to_original)};
}

// ---------------------------------------------------------------------------
// Greedy template and its ranking functions
// ---------------------------------------------------------------------------

/// A ranking function z: L x R -> R^k. Keys compare lexicographically
/// descending; every ranking shipped here is strict and total over L x R.
struct Ranking {
    std::string id;
    int k = 0;
    std::function<std::vector<Surd>(Edge)> key;
};

/// Lexicographic comparison: positive if a > b, negative if a < b.
inline int compare_keys(const std::vector<Surd>& a, const std::vector<Surd>& b) {
    for (std::size_t t = 0; t < a.size() && t < b.size(); ++t) {
        int s = (a[t] - b[t]).sign();
        if (s != 0) return s;
    }
    return 0;
}

/// z((i,j)) = (theta_ij(gamma, M-hat), 1 if (i,j) in M-hat else 0, -i, -j).
/// Predicted edges win ties against non-predicted edges of equal offer,
/// which matters exactly when gamma = 1.
inline Ranking ranking_theta(const Instance& inst, const Surd& gamma) {
    require_gamma(gamma);
    const Instance* p = &inst;
    Surd g = gamma;
    return Ranking{"theta", 4, [p, g](Edge e) {
                       Surd th = offer(*p, e, g).theta;
                       Rational indicator(p->prediction.contains(e) ? 1 : 0);
                       return std::vector<Surd>{th, Surd(indicator), Surd(Rational(-e.agent)),
                                                Surd(Rational(-e.resource))};
                   }};
}

/// z((i,j)) = (-sigma(j), v_ij / s_ij, -i): most sought resources first,
/// then best value-per-size ratio, then the lower agent index.
inline Ranking ranking_vcgap(const Instance& inst) {
    if (!inst.consensus_order)
        raise(Errc::MissingConsensusPermutation, "ranking_vcgap needs a consensus permutation");
    const Instance* p = &inst;
    return Ranking{"vcgap", 3, [p](Edge e) {
                       Rational ratio = p->values[e.agent][e.resource] / p->sizes[e.agent][e.resource];
                       return std::vector<Surd>{Surd(Rational(-p->consensus_rank(e.resource))), Surd(ratio),
                                                Surd(Rational(-e.agent))};
                   }};
}

/// z((i,j)) = (v_ij / s_ij, -i, -j): best value-per-size ratio first.
inline Ranking ranking_asgap(const Instance& inst) {
    const Instance* p = &inst;
    return Ranking{"asgap", 3, [p](Edge e) {
                       Rational ratio = p->values[e.agent][e.resource] / p->sizes[e.agent][e.resource];
                       return std::vector<Surd>{Surd(ratio), Surd(Rational(-e.agent)),
                                                Surd(Rational(-e.resource))};
                   }};
}

/// The greedy template: sorts D by descending ranking key and adds each
/// edge whose resource still has room; adding an edge retires the agent's
/// remaining edges.
inline MechanismRun greedy_run(const Instance& inst, const Ranking& ranking) {
    std::vector<std::pair<std::vector<Surd>, Edge>> order;
    order.reserve(inst.declared.size());
    for (const Edge& e : inst.declared) order.emplace_back(ranking.key(e), e);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return compare_keys(a.first, b.first) > 0; });
    for (std::size_t t = 1; t < order.size(); ++t)
        if (compare_keys(order[t - 1].first, order[t].first) == 0)
            raise(Errc::RankingNotTotal, "ranking '" + ranking.id + "' gives " + to_string(order[t - 1].second) +
                                             " and " + to_string(order[t].second) + " the same key");

    Trace trace;
    std::vector<bool> assigned(static_cast<std::size_t>(inst.n), false);
    std::vector<Rational> load(static_cast<std::size_t>(inst.m), Rational(0));
    std::vector<Edge> edges;
    for (auto& [key, e] : order) {
        if (assigned[static_cast<std::size_t>(e.agent)]) continue;  // edge already removed from the list
        trace.emit(TraceEvent::Kind::GreedyConsider, e, key);
        auto ju = static_cast<std::size_t>(e.resource);
        if (load[ju] + inst.sizes[e.agent][e.resource] <= inst.capacities[ju]) {
            load[ju] += inst.sizes[e.agent][e.resource];
            assigned[static_cast<std::size_t>(e.agent)] = true;
            edges.push_back(e);
            trace.emit(TraceEvent::Kind::GreedyAdd, e, key);
        } else {
            trace.emit(TraceEvent::Kind::GreedySkip, e, key);
        }
    }
    return MechanismRun{Assignment(std::move(edges)), std::move(trace)};
}

inline Assignment greedy(const Instance& inst, const Ranking& ranking) {
    return greedy_run(inst, ranking).assignment;
}

// ---------------------------------------------------------------------------
// Checkers
// ---------------------------------------------------------------------------

/// Result of the truth-inducing test on a ranking function.
struct TruthInducingReport {
    enum class Failure { None, DuplicateKey, ValueOrder };

    bool truth_inducing = true;
    Failure failure = Failure::None;
    std::optional<std::pair<Edge, Edge>> witness;  // (higher-ranked, lower-ranked)
};

/// A ranking is truth-inducing when (1) its keys are pairwise distinct over
/// all of L x R, and (2) within each agent's edges, a higher key never comes
/// with a smaller value.
inline TruthInducingReport check_truth_inducing(const Instance& inst, const Ranking& ranking) {
    std::vector<std::pair<std::vector<Surd>, Edge>> all;
    all.reserve(static_cast<std::size_t>(inst.n) * static_cast<std::size_t>(inst.m));
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.m; ++j) all.emplace_back(ranking.key(Edge{i, j}), Edge{i, j});
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& a, const auto& b) { return compare_keys(a.first, b.first) > 0; });
    for (std::size_t t = 1; t < all.size(); ++t)
        if (compare_keys(all[t - 1].first, all[t].first) == 0)
            return TruthInducingReport{false, TruthInducingReport::Failure::DuplicateKey,
                                       std::make_pair(all[t - 1].second, all[t].second)};

    // Keys are strict, so scanning each agent's edges in descending key
    // order must see non-increasing values.
    for (int i = 0; i < inst.n; ++i) {
        std::vector<std::pair<std::vector<Surd>, Edge>> row;
        for (int j = 0; j < inst.m; ++j) row.emplace_back(ranking.key(Edge{i, j}), Edge{i, j});
        std::stable_sort(row.begin(), row.end(),
                         [](const auto& a, const auto& b) { return compare_keys(a.first, b.first) > 0; });
        for (std::size_t t = 1; t < row.size(); ++t) {
            const Edge hi = row[t - 1].second, lo = row[t].second;
            if (inst.values[hi.agent][hi.resource] < inst.values[lo.agent][lo.resource])
                return TruthInducingReport{false, TruthInducingReport::Failure::ValueOrder,
                                           std::make_pair(hi, lo)};
        }
    }
    return TruthInducingReport{};
}

struct StabilityReport {
    bool stable = true;
    std::optional<Edge> blocking;
};

/// Stability of a matching under the deferred-acceptance preferences: no
/// declared edge (i,j) may exist where i prefers j to their mate (values
/// descending, tau_i) and j prefers i to its mate (offers descending,
/// tau_j). Unmatched sides count as value/offer zero.
inline StabilityReport check_stability(const Instance& inst, const Surd& gamma, const Assignment& matching) {
    if (!detail::unit_sizes_and_capacities(inst))
        raise(Errc::VariantMismatch, "check_stability needs unit sizes and unit capacities");
    require_gamma(gamma);

    std::vector<int> mate_of_agent(static_cast<std::size_t>(inst.n), -1);
    std::vector<int> mate_of_resource(static_cast<std::size_t>(inst.m), -1);
    for (const Edge& e : matching.edges()) {
        if (!inst.in_bounds(e)) raise(Errc::BadInput, "matching edge out of bounds");
        if (mate_of_resource[static_cast<std::size_t>(e.resource)] != -1)
            raise(Errc::BadInput, "check_stability needs a one-to-one matching");
        mate_of_agent[static_cast<std::size_t>(e.agent)] = e.resource;
        mate_of_resource[static_cast<std::size_t>(e.resource)] = e.agent;
    }

    auto theta = [&](int i, int j) { return offer(inst, Edge{i, j}, gamma).theta; };

    for (const Edge& e : inst.declared) {
        const auto [i, j] = e;
        int mi = mate_of_agent[static_cast<std::size_t>(i)];
        bool agent_prefers;
        if (mi == -1) {
            agent_prefers = true;  // any declared edge beats being unmatched
        } else if (mi == j) {
            agent_prefers = false;
        } else {
            const Rational &vj = inst.values[i][j], &vm = inst.values[i][mi];
            agent_prefers = vj > vm || (vj == vm && j < mi);
        }
        if (!agent_prefers) continue;

        int mj = mate_of_resource[static_cast<std::size_t>(j)];
        bool resource_prefers = (mj == -1) || (mj != i && detail::resource_prefers(theta(i, j), i, theta(mj, j), mj));
        if (resource_prefers) return StabilityReport{false, e};
    }
    return StabilityReport{};
}

}  // namespace gappred
