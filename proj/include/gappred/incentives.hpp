#pragma once

#include <gappred/instance.hpp>
#include <gappred/rational.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gappred {

/// A deterministic mechanism under test: declarations in, assignment out.
using Mechanism = std::function<Assignment(const Instance&)>;

/// One profitable deviation found by the tester. For SP violations the
/// coalition is a single agent; for GSP every member strictly gains.
struct Deviation {
    std::vector<int> coalition;                     // ascending agent ids
    std::vector<std::vector<int>> declared_rows;    // per member: deviating row, resources ascending
    std::vector<Rational> truthful_utility;         // per member
    std::vector<Rational> deviating_utility;        // per member

    friend bool operator==(const Deviation&, const Deviation&) = default;
};

struct IncentiveReport {
    std::string mechanism_id;
    std::string instance_id;
    std::uint64_t deviations_checked = 0;
    std::vector<Deviation> violations;

    bool ok() const { return violations.empty(); }
};

struct IncentiveOptions {
    /// Hard cap on mechanism executions; exceeding it is an error, never
    /// silent sampling.
    std::uint64_t guard = 1'000'000;
    /// Restrict deviations to subsets of each member's true row E_i
    /// (hiding only). Default is every subset of {i} x R, since
    /// over-declaring can still alter other agents' outcomes even though
    /// it can never pay off directly.
    bool hiding_only = false;
    /// When true, non-deviators keep the instance's declared rows instead
    /// of being reset to their true rows E_{-S}.
    bool keep_declared_others = false;
};

namespace detail {

inline std::vector<int> row_from_mask(std::uint32_t mask, int m) {
    std::vector<int> row;
    for (int j = 0; j < m; ++j)
        if (mask & (1u << j)) row.push_back(j);
    return row;
}

inline std::uint32_t truth_mask(const Instance& inst, int agent) {
    std::uint32_t mask = 0;
    for (const Edge& e : *inst.truth)
        if (e.agent == agent) mask |= 1u << e.resource;
    return mask;
}

/// The world against which deviations are measured: coalition members and,
/// by default, everyone else declare truthfully.
inline Instance baseline_instance(const Instance& inst, const std::vector<int>& coalition,
                                  const IncentiveOptions& opts) {
    if (!inst.truth) raise(Errc::TruthUnavailable, "incentive tests need the private graph E");
    if (!opts.keep_declared_others) return inst.with_declared(*inst.truth);
    Instance out = inst;
    for (int i : coalition) {
        std::vector<int> true_row;
        for (const Edge& e : *inst.truth)
            if (e.agent == i) true_row.push_back(e.resource);
        out = out.with_declared_row(i, true_row);
    }
    return out;
}

}  // namespace detail

/// Exhaustively checks, for every agent i and every declaration
/// D'_i subseteq {i} x R, whether deviating strictly improves i's utility
/// under the private graph. Non-deviators declare truthfully by default.
inline IncentiveReport test_strategyproof(const Mechanism& mech, const std::string& mechanism_id,
                                          const Instance& inst, const std::string& instance_id = "",
                                          const IncentiveOptions& opts = {}) {
    if (!inst.truth) raise(Errc::TruthUnavailable, "incentive tests need the private graph E");
    if (inst.m >= 30) raise(Errc::EnumerationTooLarge, "too many resources to enumerate 2^m subsets");
    std::uint64_t runs = static_cast<std::uint64_t>(inst.n) << inst.m;
    if (runs > opts.guard)
        raise(Errc::EnumerationTooLarge, "n * 2^m = " + std::to_string(runs) + " exceeds the guard of " +
                                             std::to_string(opts.guard) + " mechanism executions");

    IncentiveReport report{mechanism_id, instance_id, 0, {}};
    for (int i = 0; i < inst.n; ++i) {
        Instance base = detail::baseline_instance(inst, {i}, opts);
        Rational truthful = agent_utilities(base, mech(base))[static_cast<std::size_t>(i)];
        std::uint32_t full = opts.hiding_only ? detail::truth_mask(inst, i)
                                              : (inst.m >= 32 ? ~0u : (1u << inst.m) - 1u);
        for (std::uint32_t mask = 0;; ++mask) {
            std::uint32_t sub = mask & full;
            if (sub == mask) {
                std::vector<int> row = detail::row_from_mask(mask, inst.m);
                Instance deviated = base.with_declared_row(i, row);
                Rational u = agent_utilities(deviated, mech(deviated))[static_cast<std::size_t>(i)];
                ++report.deviations_checked;
                if (u > truthful)
                    report.violations.push_back(Deviation{{i}, {row}, {truthful}, {u}});
            }
            if (mask == (inst.m >= 32 ? ~0u : (1u << inst.m) - 1u)) break;
        }
    }
    return report;
}

/// Exhaustive group deviations: every coalition S with |S| <= max_coalition
/// and every joint declaration profile over S. A violation requires every
/// member to strictly gain.
inline IncentiveReport test_group_strategyproof(const Mechanism& mech, const std::string& mechanism_id,
                                                const Instance& inst, int max_coalition,
                                                const std::string& instance_id = "",
                                                const IncentiveOptions& opts = {}) {
    if (!inst.truth) raise(Errc::TruthUnavailable, "incentive tests need the private graph E");
    if (inst.m >= 30) raise(Errc::EnumerationTooLarge, "too many resources to enumerate 2^m subsets");

    // Count executions up front; the guard is a hard error, not a sampler.
    const std::uint64_t per_member = 1ull << inst.m;
    std::uint64_t planned = 0;
    {
        std::vector<std::uint64_t> binom(static_cast<std::size_t>(inst.n) + 1, 0);
        binom[0] = 1;
        for (int row = 1; row <= inst.n; ++row)
            for (int k = row; k >= 1; --k) binom[static_cast<std::size_t>(k)] += binom[static_cast<std::size_t>(k) - 1];
        std::uint64_t pw = 1;
        for (int s = 1; s <= max_coalition && s <= inst.n; ++s) {
            pw *= per_member;
            planned += binom[static_cast<std::size_t>(s)] * pw;
        }
    }
    if (planned > opts.guard)
        raise(Errc::EnumerationTooLarge, "coalition enumeration needs " + std::to_string(planned) +
                                             " mechanism executions, guard is " + std::to_string(opts.guard));

    IncentiveReport report{mechanism_id, instance_id, 0, {}};

    std::vector<int> coalition;
    auto probe_coalition = [&]() {
        Instance base = detail::baseline_instance(inst, coalition, opts);
        Assignment truthful_out = mech(base);
        std::vector<Rational> truthful_all = agent_utilities(base, truthful_out);

        const std::size_t s = coalition.size();
        std::vector<std::uint32_t> full(s);
        for (std::size_t k = 0; k < s; ++k)
            full[k] = opts.hiding_only ? detail::truth_mask(inst, coalition[k])
                                       : (inst.m >= 32 ? ~0u : (1u << inst.m) - 1u);

        std::vector<std::uint32_t> masks(s, 0);
        for (;;) {
            bool admissible = true;
            for (std::size_t k = 0; k < s && admissible; ++k) admissible = (masks[k] & ~full[k]) == 0;
            if (admissible) {
                Instance deviated = base;
                std::vector<std::vector<int>> rows(s);
                for (std::size_t k = 0; k < s; ++k) {
                    rows[k] = detail::row_from_mask(masks[k], inst.m);
                    deviated = deviated.with_declared_row(coalition[k], rows[k]);
                }
                std::vector<Rational> u = agent_utilities(deviated, mech(deviated));
                ++report.deviations_checked;
                bool all_gain = true;
                for (std::size_t k = 0; k < s && all_gain; ++k)
                    all_gain = u[static_cast<std::size_t>(coalition[k])] >
                               truthful_all[static_cast<std::size_t>(coalition[k])];
                if (all_gain) {
                    Deviation d{coalition, rows, {}, {}};
                    for (std::size_t k = 0; k < s; ++k) {
                        d.truthful_utility.push_back(truthful_all[static_cast<std::size_t>(coalition[k])]);
                        d.deviating_utility.push_back(u[static_cast<std::size_t>(coalition[k])]);
                    }
                    report.violations.push_back(std::move(d));
                }
            }
            // Odometer over the joint masks.
            std::size_t k = 0;
            const std::uint32_t limit = inst.m >= 32 ? ~0u : (1u << inst.m) - 1u;
            while (k < s && masks[k] == limit) masks[k++] = 0;
            if (k == s) break;
            ++masks[k];
        }
    };

    // Coalitions by increasing size, lexicographic within a size.
    std::function<void(int, int)> choose = [&](int start, int remaining) {
        if (remaining == 0) {
            if (!coalition.empty()) probe_coalition();
            return;
        }
        for (int i = start; i < inst.n; ++i) {
            coalition.push_back(i);
            choose(i + 1, remaining - 1);
            coalition.pop_back();
        }
    };
    for (int s = 1; s <= max_coalition && s <= inst.n; ++s) choose(0, s);

    return report;
}

/// Replays a reported deviation and returns the utilities it produces, so
/// tests can confirm every finding is reproducible.
inline std::vector<Rational> replay_deviation(const Mechanism& mech, const Instance& inst,
                                              const Deviation& dev, const IncentiveOptions& opts = {}) {
    Instance world = detail::baseline_instance(inst, dev.coalition, opts);
    for (std::size_t k = 0; k < dev.coalition.size(); ++k)
        world = world.with_declared_row(dev.coalition[k], dev.declared_rows[k]);
    std::vector<Rational> all = agent_utilities(world, mech(world));
    std::vector<Rational> out;
    for (int i : dev.coalition) out.push_back(all[static_cast<std::size_t>(i)]);
    return out;
}

/// Universal GSP check for a randomized mechanism: each deterministic
/// component of its support construction must itself be GSP.
struct UniversalGspReport {
    std::vector<IncentiveReport> components;

    bool ok() const {
        for (const auto& r : components)
            if (!r.ok()) return false;
        return true;
    }

    std::uint64_t total_checked() const {
        std::uint64_t total = 0;
        for (const auto& r : components) total += r.deviations_checked;
        return total;
    }
};

inline UniversalGspReport test_universal_gsp(const std::vector<std::pair<std::string, Mechanism>>& components,
                                             const Instance& inst, int max_coalition,
                                             const std::string& instance_id = "",
                                             const IncentiveOptions& opts = {}) {
    UniversalGspReport report;
    for (const auto& [id, mech] : components)
        report.components.push_back(
            test_group_strategyproof(mech, id, inst, max_coalition, instance_id, opts));
    return report;
}

}  // namespace gappred
