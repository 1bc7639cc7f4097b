#pragma once

#include <gappred/instance.hpp>
#include <gappred/oracle.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gappred {

/// Deterministic random source. The engine and every derived draw are
/// pinned here ("mt19937_64/v1" in output metadata): bounded integers come
/// from rejection sampling on the raw 64-bit stream, so instances replay
/// across platforms for a given seed. Cross-implementation comparisons
/// should exchange serialized instances, not seeds.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr const char* kAlgorithmId = "mt19937_64/v1";

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) raise(Errc::BadInput, "uniform_int: empty range");
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next());  // full 64-bit range
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span + 1) % span;
        std::uint64_t draw;
        do {
            draw = next();
        } while (draw > limit);
        return lo + static_cast<std::int64_t>(draw % span);
    }

    /// Exact Bernoulli with rational success probability p = a/b.
    bool bernoulli(const Rational& p) {
        if (p.sign() <= 0) return false;
        if (p >= Rational(1)) return true;
        BigInt b = p.den(), a = p.num();
        // b fits desk-scale denominators; draw r uniform in [0, b).
        std::int64_t bl = static_cast<std::int64_t>(b);
        return uniform_int(0, bl - 1) < static_cast<std::int64_t>(a);
    }

    /// Uniform rational in [lo, hi] among fractions with denominator at
    /// most max_den: picks a denominator with a nonempty lattice, then a
    /// numerator inside the range.
    Rational uniform_rational(const Rational& lo, const Rational& hi, int max_den) {
        if (lo > hi) raise(Errc::BadInput, "uniform_rational: empty range");
        if (lo == hi) return lo;
        std::vector<std::pair<std::int64_t, std::pair<BigInt, BigInt>>> candidates;
        for (std::int64_t d = 1; d <= max_den; ++d) {
            BigInt kl = -floor_div(-(lo.num() * d), lo.den());  // ceil(lo * d)
            BigInt kh = floor_div(hi.num() * d, hi.den());      // floor(hi * d)
            if (kl <= kh) candidates.emplace_back(d, std::make_pair(kl, kh));
        }
        if (candidates.empty())
            raise(Errc::UnsatisfiableSpec, "no rational with denominator <= " + std::to_string(max_den) +
                                               " lies in [" + lo.to_string() + ", " + hi.to_string() + "]");
        auto& [d, bounds] = candidates[static_cast<std::size_t>(
            uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1))];
        std::int64_t kl = static_cast<std::int64_t>(bounds.first);
        std::int64_t kh = static_cast<std::int64_t>(bounds.second);
        return Rational(uniform_int(kl, kh), d);
    }

    std::vector<int> permutation(int m) {
        std::vector<int> out(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) out[static_cast<std::size_t>(k)] = k;
        for (int k = m - 1; k > 0; --k)
            std::swap(out[static_cast<std::size_t>(k)],
                      out[static_cast<std::size_t>(uniform_int(0, k))]);
        return out;
    }

private:
    std::mt19937_64 engine_;
};

struct GenSpec {
    Variant variant = Variant::BMP;
    int n = 3;
    int m = 3;
    Rational value_lo{1}, value_hi{100};
    Rational size_lo{1}, size_hi{10};
    Rational cap_lo{1}, cap_hi{20};
    Rational density{1};  // edge probability, in (0, 1]
    std::uint64_t seed = 0;
    std::optional<Rational> target_eta;
    Rational eta_tolerance{1, 20};
    /// Denominator bound for drawn numbers; 1 makes every draw an integer.
    int max_denominator = 8;
};

struct PredictionSearch {
    Assignment prediction;
    Rational achieved_eta;
    bool within_tolerance = false;
};

/// Degrades the oracle-optimal assignment until the prediction error lands
/// near the target. Each step drops or reroutes one predicted edge, always
/// strictly decreasing v(M-hat ∩ D), and keeps M-hat capacity-feasible; the
/// candidate whose resulting eta is closest to the target is taken, which
/// prefers large drops while far from the target and small ones near it.
inline PredictionSearch find_prediction_with_error(const Instance& inst, const Rational& target,
                                                   const Rational& tolerance,
                                                   std::uint64_t oracle_budget = kDefaultOracleBudget) {
    if (target.sign() < 0 || target > Rational(1))
        raise(Errc::BadInput, "target prediction error must lie in [0, 1]");
    OracleResult opt = optimal_bruteforce(inst, oracle_budget);
    if (opt.value.sign() <= 0)
        raise(Errc::ZeroOptimum, "prediction error is undefined on an instance with v(M*_D) = 0");

    std::vector<Edge> current = opt.assignment.edges();
    auto eta_of = [&](const std::vector<Edge>& edges) {
        Rational covered(0);
        for (const Edge& e : edges)
            if (inst.is_declared(e)) covered += inst.values[e.agent][e.resource];
        return Rational(1) - covered / opt.value;
    };

    Rational eta = eta_of(current);
    std::vector<Edge> best = current;
    Rational best_dist = abs(eta - target);

    auto within = [&](const Rational& e) { return abs(e - target) <= tolerance; };

    while (!within(eta) && eta < target) {
        std::optional<std::vector<Edge>> pick;
        Rational pick_dist(0);
        auto consider = [&](std::vector<Edge> cand) {
            Rational d = abs(eta_of(cand) - target);
            if (!pick || d < pick_dist) {
                pick = std::move(cand);
                pick_dist = d;
            }
        };

        std::vector<Rational> load(static_cast<std::size_t>(inst.m), Rational(0));
        for (const Edge& e : current) load[static_cast<std::size_t>(e.resource)] += inst.sizes[e.agent][e.resource];

        for (std::size_t k = 0; k < current.size(); ++k) {
            const Edge e = current[k];
            if (!inst.is_declared(e)) continue;  // contributes nothing; changing it cannot move eta
            {
                std::vector<Edge> cand = current;
                cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(k));
                consider(std::move(cand));
            }
            for (int j = 0; j < inst.m; ++j) {
                if (j == e.resource) continue;
                Edge moved{e.agent, j};
                bool lowers = !inst.is_declared(moved) ||
                              inst.values[moved.agent][j] < inst.values[e.agent][e.resource];
                if (!lowers) continue;
                if (load[static_cast<std::size_t>(j)] + inst.sizes[e.agent][j] >
                    inst.capacities[static_cast<std::size_t>(j)])
                    continue;
                std::vector<Edge> cand = current;
                cand[k] = moved;
                consider(std::move(cand));
            }
        }
        if (!pick) break;  // nothing left to degrade
        current = std::move(*pick);
        eta = eta_of(current);
        if (abs(eta - target) < best_dist) {
            best = current;
            best_dist = abs(eta - target);
        }
    }

    Rational achieved = eta_of(best);
    return PredictionSearch{Assignment(std::move(best)), achieved, abs(achieved - target) <= tolerance};
}

/// Raising variant: TargetUnreachable (reporting the closest achievable
/// error) when no reachable prediction lands within tolerance.
inline PredictionSearch gen_prediction_with_error(const Instance& inst, const Rational& target,
                                                  const Rational& tolerance,
                                                  std::uint64_t oracle_budget = kDefaultOracleBudget) {
    PredictionSearch found = find_prediction_with_error(inst, target, tolerance, oracle_budget);
    if (!found.within_tolerance)
        raise(Errc::TargetUnreachable, "no prediction with error within " + tolerance.to_string() +
                                           " of " + target.to_string() + "; closest achievable is " +
                                           found.achieved_eta.to_string());
    return found;
}

namespace detail {

inline Rational draw_in(Rng& rng, const GenSpec& spec, const Rational& lo, const Rational& hi) {
    if (lo > hi)
        raise(Errc::UnsatisfiableSpec, "empty draw range [" + lo.to_string() + ", " + hi.to_string() + "]");
    return rng.uniform_rational(lo, hi, spec.max_denominator);
}

}  // namespace detail

/// Seeded random instance of the requested variant. Variant restrictions
/// hold by construction; E = D; the prediction is the oracle optimum unless
/// a target error is requested, in which case it is degraded to match.
/// At least one edge is always declared, so the prediction error is defined.
inline Instance gen_instance(const GenSpec& spec, std::uint64_t oracle_budget = kDefaultOracleBudget) {
    if (spec.n < 1 || spec.m < 1) raise(Errc::UnsatisfiableSpec, "need n >= 1 and m >= 1");
    if (spec.density.sign() <= 0 || spec.density > Rational(1))
        raise(Errc::UnsatisfiableSpec, "edge density must lie in (0, 1]");
    if (spec.max_denominator < 1) raise(Errc::UnsatisfiableSpec, "max_denominator must be >= 1");
    if (spec.value_lo.sign() <= 0 || spec.size_lo.sign() <= 0 || spec.cap_lo.sign() <= 0)
        raise(Errc::UnsatisfiableSpec, "value, size and capacity ranges must be positive");
    if (spec.target_eta && (spec.target_eta->sign() < 0 || *spec.target_eta > Rational(1)))
        raise(Errc::UnsatisfiableSpec, "target_eta must lie in [0, 1]");

    Rng rng(spec.seed);
    Instance inst;
    inst.n = spec.n;
    inst.m = spec.m;
    inst.variant = spec.variant;
    inst.values.assign(static_cast<std::size_t>(spec.n),
                       std::vector<Rational>(static_cast<std::size_t>(spec.m), Rational(1)));
    inst.sizes.assign(static_cast<std::size_t>(spec.n),
                      std::vector<Rational>(static_cast<std::size_t>(spec.m), Rational(1)));
    inst.capacities.assign(static_cast<std::size_t>(spec.m), Rational(1));

    auto draw_caps = [&] {
        for (int j = 0; j < spec.m; ++j)
            inst.capacities[static_cast<std::size_t>(j)] = detail::draw_in(rng, spec, spec.cap_lo, spec.cap_hi);
    };
    auto min_cap = [&] {
        Rational mc = inst.capacities[0];
        for (const Rational& c : inst.capacities)
            if (c < mc) mc = c;
        return mc;
    };

    switch (spec.variant) {
        case Variant::UBMP:
            break;  // everything is 1
        case Variant::BMP:
            for (int i = 0; i < spec.n; ++i)
                for (int j = 0; j < spec.m; ++j)
                    inst.values[i][j] = detail::draw_in(rng, spec, spec.value_lo, spec.value_hi);
            break;
        case Variant::RMK: {
            draw_caps();
            Rational shi = std::min(spec.size_hi, min_cap());
            for (int i = 0; i < spec.n; ++i) {
                Rational v = detail::draw_in(rng, spec, spec.value_lo, spec.value_hi);
                Rational s = detail::draw_in(rng, spec, spec.size_lo, shi);
                for (int j = 0; j < spec.m; ++j) {
                    inst.values[i][j] = v;
                    inst.sizes[i][j] = s;
                }
            }
            break;
        }
        case Variant::ERMK: {
            draw_caps();
            Rational vhi = std::min(spec.value_hi, min_cap());
            for (int i = 0; i < spec.n; ++i) {
                Rational v = detail::draw_in(rng, spec, spec.value_lo, vhi);
                for (int j = 0; j < spec.m; ++j) {
                    inst.values[i][j] = v;
                    inst.sizes[i][j] = v;
                }
            }
            break;
        }
        case Variant::VCGAP: {
            draw_caps();
            std::vector<int> order = rng.permutation(spec.m);
            inst.consensus_order = order;
            for (int i = 0; i < spec.n; ++i) {
                std::vector<Rational> vals;
                for (int j = 0; j < spec.m; ++j)
                    vals.push_back(detail::draw_in(rng, spec, spec.value_lo, spec.value_hi));
                std::sort(vals.begin(), vals.end(), [](const Rational& a, const Rational& b) { return a > b; });
                for (int k = 0; k < spec.m; ++k) inst.values[i][order[static_cast<std::size_t>(k)]] = vals[static_cast<std::size_t>(k)];
                for (int j = 0; j < spec.m; ++j)
                    inst.sizes[i][j] = detail::draw_in(rng, spec, spec.size_lo,
                                                       std::min(spec.size_hi, inst.capacities[static_cast<std::size_t>(j)]));
            }
            break;
        }
        case Variant::AVGAP: {
            draw_caps();
            for (int i = 0; i < spec.n; ++i) {
                Rational v = detail::draw_in(rng, spec, spec.value_lo, spec.value_hi);
                for (int j = 0; j < spec.m; ++j) {
                    inst.values[i][j] = v;
                    inst.sizes[i][j] = detail::draw_in(rng, spec, spec.size_lo,
                                                       std::min(spec.size_hi, inst.capacities[static_cast<std::size_t>(j)]));
                }
            }
            break;
        }
        case Variant::RVGAP: {
            draw_caps();
            for (int j = 0; j < spec.m; ++j) {
                Rational v = detail::draw_in(rng, spec, spec.value_lo, spec.value_hi);
                for (int i = 0; i < spec.n; ++i) {
                    inst.values[i][j] = v;
                    inst.sizes[i][j] = detail::draw_in(rng, spec, spec.size_lo,
                                                       std::min(spec.size_hi, inst.capacities[static_cast<std::size_t>(j)]));
                }
            }
            break;
        }
        case Variant::ASGAP: {
            draw_caps();
            Rational shi = std::min(spec.size_hi, min_cap());
            for (int i = 0; i < spec.n; ++i) {
                Rational s = detail::draw_in(rng, spec, spec.size_lo, shi);
                for (int j = 0; j < spec.m; ++j) {
                    inst.values[i][j] = detail::draw_in(rng, spec, spec.value_lo, spec.value_hi);
                    inst.sizes[i][j] = s;
                }
            }
            break;
        }
        case Variant::RSGAP: {
            draw_caps();
            for (int j = 0; j < spec.m; ++j) {
                Rational s = detail::draw_in(rng, spec, spec.size_lo,
                                             std::min(spec.size_hi, inst.capacities[static_cast<std::size_t>(j)]));
                for (int i = 0; i < spec.n; ++i) {
                    inst.values[i][j] = detail::draw_in(rng, spec, spec.value_lo, spec.value_hi);
                    inst.sizes[i][j] = s;
                }
            }
            break;
        }
        case Variant::GAP: {
            draw_caps();
            for (int i = 0; i < spec.n; ++i)
                for (int j = 0; j < spec.m; ++j) {
                    inst.values[i][j] = detail::draw_in(rng, spec, spec.value_lo, spec.value_hi);
                    inst.sizes[i][j] = detail::draw_in(rng, spec, spec.size_lo,
                                                       std::min(spec.size_hi, inst.capacities[static_cast<std::size_t>(j)]));
                }
            break;
        }
    }

    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.m; ++j)
            if (rng.bernoulli(spec.density)) inst.declared.push_back(Edge{i, j});
    if (inst.declared.empty())
        inst.declared.push_back(Edge{static_cast<int>(rng.uniform_int(0, spec.n - 1)),
                                     static_cast<int>(rng.uniform_int(0, spec.m - 1))});
    inst.truth = inst.declared;

    inst = validate(std::move(inst));
    if (spec.target_eta) {
        inst.prediction =
            find_prediction_with_error(inst, *spec.target_eta, spec.eta_tolerance, oracle_budget)
                .prediction;
    } else {
        inst.prediction = optimal_bruteforce(inst, oracle_budget).assignment;
    }
    return validate(std::move(inst));
}

// ---------------------------------------------------------------------------
// Named fixtures: the lower-bound instances, parameterized as in the proofs.
// Agents are 0-based (paper's agent 1 -> 0); resources a, b -> 0, 1.
// ---------------------------------------------------------------------------

namespace detail {

inline Instance two_by_two_bmp(const Rational& v00, const Rational& v01, const Rational& v10,
                               const Rational& v11, std::vector<Edge> declared) {
    Instance inst;
    inst.n = 2;
    inst.m = 2;
    inst.values = {{v00, v01}, {v10, v11}};
    inst.sizes = {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}};
    inst.capacities = {Rational(1), Rational(1)};
    inst.declared = std::move(declared);
    inst.truth = inst.declared;
    inst.prediction = Assignment({Edge{0, 0}, Edge{1, 1}});
    inst.variant = Variant::BMP;
    // Both families are also value-consensus instances: every agent ranks
    // resource b (index 1) at least as high as resource a.
    inst.consensus_order = std::vector<int>{1, 0};
    return validate(std::move(inst));
}

}  // namespace detail

/// Two agents, one resource; the predicted agent is worth 1, the other
/// 1/alpha - eps. Requires alpha >= 1 and 0 < eps < 1/alpha.
inline Instance fixture_fig1(const Rational& alpha, const Rational& eps) {
    if (alpha < Rational(1)) raise(Errc::ParameterOutOfRange, "fig1 needs alpha >= 1");
    if (eps.sign() <= 0 || eps >= Rational(1) / alpha)
        raise(Errc::ParameterOutOfRange, "fig1 needs 0 < eps < 1/alpha");
    Instance inst;
    inst.n = 2;
    inst.m = 1;
    inst.values = {{Rational(1)}, {Rational(1) / alpha - eps}};
    inst.sizes = {{Rational(1)}, {Rational(1)}};
    inst.capacities = {Rational(1)};
    inst.declared = {Edge{0, 0}, Edge{1, 0}};
    inst.truth = inst.declared;
    inst.prediction = Assignment({Edge{0, 0}});
    inst.variant = Variant::BMP;
    return validate(std::move(inst));
}

/// The consistency/robustness trade-off family: values
/// (gamma - epsbar, gamma; 1 - epsbar, 1 + 2 epsbar), prediction
/// {(0,a),(1,b)}. Sub-figure 'a' omits edge (1,a), 'c' omits edge (0,a).
inline Instance fixture_fig3(char which, const Rational& gamma, const Rational& epsbar) {
    if (gamma < Rational(1)) raise(Errc::ParameterOutOfRange, "fig3 needs gamma >= 1");
    if (epsbar.sign() <= 0 || epsbar >= Rational(1))
        raise(Errc::ParameterOutOfRange, "fig3 needs 0 < epsbar < 1");
    std::vector<Edge> declared;
    switch (which) {
        case 'a': declared = {Edge{0, 0}, Edge{0, 1}, Edge{1, 1}}; break;
        case 'b': declared = {Edge{0, 0}, Edge{0, 1}, Edge{1, 0}, Edge{1, 1}}; break;
        case 'c': declared = {Edge{0, 1}, Edge{1, 0}, Edge{1, 1}}; break;
        default: raise(Errc::ParameterOutOfRange, "fig3 sub-figure must be a, b or c");
    }
    return detail::two_by_two_bmp(gamma - epsbar, gamma, Rational(1) - epsbar,
                                  Rational(1) + Rational(2) * epsbar, std::move(declared));
}

/// The error lower-bound family: values (delta - epsbar, delta;
/// 1 - delta - epsbar, 1 - delta + 2 epsbar), prediction {(0,a),(1,b)}.
/// Requires epsbar > 0 and epsbar < delta < 1 - epsbar.
inline Instance fixture_fig5(char which, const Rational& delta, const Rational& epsbar) {
    if (epsbar.sign() <= 0) raise(Errc::ParameterOutOfRange, "fig5 needs epsbar > 0");
    if (delta <= epsbar || delta >= Rational(1) - epsbar)
        raise(Errc::ParameterOutOfRange, "fig5 needs epsbar < delta < 1 - epsbar");
    std::vector<Edge> declared;
    switch (which) {
        case 'a': declared = {Edge{0, 0}, Edge{0, 1}, Edge{1, 1}}; break;
        case 'b': declared = {Edge{0, 0}, Edge{0, 1}, Edge{1, 0}, Edge{1, 1}}; break;
        case 'c': declared = {Edge{0, 1}, Edge{1, 0}, Edge{1, 1}}; break;
        default: raise(Errc::ParameterOutOfRange, "fig5 sub-figure must be a, b or c");
    }
    return detail::two_by_two_bmp(delta - epsbar, delta, Rational(1) - delta - epsbar,
                                  Rational(1) - delta + Rational(2) * epsbar, std::move(declared));
}

struct FixtureParams {
    std::optional<Rational> alpha, eps, gamma, epsbar, delta;
};

inline Instance fixture_by_name(const std::string& name, const FixtureParams& p) {
    auto need = [&](const std::optional<Rational>& v, const char* flag) -> const Rational& {
        if (!v) raise(Errc::BadInput, std::string("fixture ") + name + " needs --" + flag);
        return *v;
    };
    if (name == "fig1") return fixture_fig1(need(p.alpha, "alpha"), need(p.eps, "eps"));
    if (name.size() == 5 && name.starts_with("fig3"))
        return fixture_fig3(name[4], need(p.gamma, "gamma"), need(p.epsbar, "epsbar"));
    if (name.size() == 5 && name.starts_with("fig5"))
        return fixture_fig5(name[4], need(p.delta, "delta"), need(p.epsbar, "epsbar"));
    raise(Errc::BadInput, "unknown fixture '" + name + "'");
}

}  // namespace gappred
