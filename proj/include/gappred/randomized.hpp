#pragma once

#include <gappred/instance.hpp>
#include <gappred/mechanisms.hpp>
#include <gappred/surd.hpp>

#include <optional>
#include <vector>

namespace gappred {

enum class SupportLabel { Boost, Greedy, Trust };

inline const char* support_label_name(SupportLabel l) {
    switch (l) {
        case SupportLabel::Boost: return "boost";
        case SupportLabel::Greedy: return "greedy";
        case SupportLabel::Trust: return "trust";
    }
    return "?";
}

/// A randomized mechanism outcome: a finite distribution over assignments,
/// each produced by a deterministic group-strategyproof mechanism. The
/// probabilities are exact (rational or quadratic surd) and sum to one;
/// zero-probability components are dropped from the support.
struct OutcomeDistribution {
    struct Entry {
        SupportLabel label;
        Assignment assignment;
        Surd probability;
    };

    std::vector<Entry> entries;

    const Entry* find(SupportLabel label) const {
        for (const Entry& e : entries)
            if (e.label == label) return &e;
        return nullptr;
    }
};

/// Exact expected value: sum of probability * v(assignment). Rational when
/// all probabilities are rational; otherwise a quadratic surd, from which a
/// certified rational enclosure of any width can be taken.
inline Surd expected_value(const Instance& inst, const OutcomeDistribution& dist) {
    Surd total = Rational(0);
    for (const auto& entry : dist.entries)
        total = total + entry.probability * Surd(assignment_value(inst, entry.assignment));
    return total;
}

namespace detail {

inline void check_distribution(const Instance& inst, const OutcomeDistribution& dist) {
    Surd total = Rational(0);
    for (const auto& entry : dist.entries) {
        if (entry.probability.sign() <= 0)
            raise(Errc::BadInput, "distribution entry with non-positive probability");
        if (!is_feasible(inst, entry.assignment))
            raise(Errc::BadInput, "distribution support contains an infeasible assignment");
        total = total + entry.probability;
    }
    if (total != Surd(Rational(1))) raise(Errc::BadInput, "distribution probabilities do not sum to 1");
}

inline void push_nonzero(OutcomeDistribution& dist, SupportLabel label, Assignment a, Surd p) {
    if (p.sign() != 0) dist.entries.push_back({label, std::move(a), std::move(p)});
}

}  // namespace detail

/// Runs Boost at the dampened confidence delta(gamma) = sqrt(2(gamma+1)) - 1
/// with probability p = 2/(delta+1), and Trust with probability 1 - p.
inline OutcomeDistribution boost_or_trust(const Instance& inst, const Rational& gamma,
                                          const BoostOptions& opts = {}) {
    require_gamma(Surd(gamma));
    Surd delta = Surd::sqrt_of(Rational(2) * (gamma + Rational(1))) - Surd(Rational(1));
    Surd p = Surd(Rational(2)) / (delta + Surd(Rational(1)));

    OutcomeDistribution dist;
    detail::push_nonzero(dist, SupportLabel::Boost, boost_matching(inst, delta, opts), p);
    detail::push_nonzero(dist, SupportLabel::Trust, trust(inst), Surd(Rational(1)) - p);
    detail::check_distribution(inst, dist);
    return dist;
}

/// Runs Greedy-by-Theta at delta(gamma) = (sqrt(12 gamma + 13) - 3)/2 with
/// probability p = 3/(2 + delta), and Trust with probability 1 - p.
/// ERMK instances only.
inline OutcomeDistribution greedy_or_trust(const Instance& inst, const Rational& gamma) {
    if (inst.variant != Variant::ERMK)
        raise(Errc::VariantMismatch, "greedy_or_trust needs an ERMK instance");
    require_gamma(Surd(gamma));
    Surd delta = (Surd::sqrt_of(Rational(12) * gamma + Rational(13)) - Surd(Rational(3))) / Surd(Rational(2));
    Surd p = Surd(Rational(3)) / (Surd(Rational(2)) + delta);

    OutcomeDistribution dist;
    detail::push_nonzero(dist, SupportLabel::Greedy, greedy(inst, ranking_theta(inst, delta)), p);
    detail::push_nonzero(dist, SupportLabel::Trust, trust(inst), Surd(Rational(1)) - p);
    detail::check_distribution(inst, dist);
    return dist;
}

/// For ASGAP and VCGAP: runs Boost on the one-to-one instance (G[D], v,
/// M-hat) and the variant's Greedy each with probability p = 2/(3 + gamma),
/// and Trust with the remaining 1 - 2p. The prediction handed to Boost is
/// the original many-to-one assignment; it only enters through the offers.
inline OutcomeDistribution boost_or_greedy_or_trust(const Instance& inst, const Rational& gamma,
                                                    const BoostOptions& opts = {}) {
    if (inst.variant != Variant::ASGAP && inst.variant != Variant::VCGAP)
        raise(Errc::VariantMismatch, "boost_or_greedy_or_trust needs an ASGAP or VCGAP instance");
    require_gamma(Surd(gamma));
    Ranking ranking = inst.variant == Variant::VCGAP ? ranking_vcgap(inst) : ranking_asgap(inst);
    Rational p = Rational(2) / (Rational(3) + gamma);

    OutcomeDistribution dist;
    detail::push_nonzero(dist, SupportLabel::Boost, boost_one_to_one(inst, gamma, opts).assignment, Surd(p));
    detail::push_nonzero(dist, SupportLabel::Greedy, greedy(inst, ranking), Surd(p));
    detail::push_nonzero(dist, SupportLabel::Trust, trust(inst), Surd(Rational(1) - Rational(2) * p));
    detail::check_distribution(inst, dist);
    return dist;
}

}  // namespace gappred
