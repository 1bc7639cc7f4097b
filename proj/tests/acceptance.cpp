// Acceptance suite: every guarantee the library promises, exercised at desk
// scale with exact arithmetic. Prints one PASS/FAIL line per criterion and
// exits with the number of failing criteria.

#include <gappred/harness.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace gappred;

namespace {

struct Outcome {
    bool ok = true;
    std::uint64_t checks = 0;
    std::uint64_t violations = 0;
    std::string note;

    void require(bool condition, const std::string& what) {
        ++checks;
        if (!condition) {
            ++violations;
            ok = false;
            if (note.empty()) note = what;
        }
    }
};

const std::vector<Rational>& gamma_grid() {
    static const std::vector<Rational> grid = {Rational(1), Rational(3, 2), Rational(2), Rational(3),
                                               Rational(10)};
    return grid;
}

const std::vector<Rational>& eta_grid() {
    static const std::vector<Rational> grid = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)};
    return grid;
}

GenSpec bmp_grid_spec(std::uint64_t k) {
    GenSpec spec;
    spec.variant = Variant::BMP;
    spec.n = 1 + static_cast<int>(k % 5);
    spec.m = 1 + static_cast<int>((k / 5) % 5);
    spec.value_lo = Rational(1);
    spec.value_hi = Rational(100);
    spec.density = Rational(3, 5);
    spec.seed = 400000 + k;
    return spec;
}

GenSpec ermk_grid_spec(std::uint64_t k) {
    GenSpec spec;
    spec.variant = Variant::ERMK;
    spec.n = 2 + static_cast<int>(k % 7);
    spec.m = 1 + static_cast<int>(k % 3);
    spec.value_lo = Rational(1);
    spec.value_hi = Rational(12);
    spec.cap_lo = Rational(4);
    spec.cap_hi = Rational(16);
    spec.density = Rational(2, 3);
    spec.seed = 410000 + k;
    return spec;
}

GenSpec gap_mix_spec(Variant variant, std::uint64_t k, std::uint64_t base) {
    GenSpec spec;
    spec.variant = variant;
    spec.n = 1 + static_cast<int>(k % 5);
    spec.m = 1 + static_cast<int>(k % 3);
    spec.value_lo = Rational(1);
    spec.value_hi = Rational(25);
    spec.size_hi = Rational(5);
    spec.cap_lo = Rational(3);
    spec.cap_hi = Rational(12);
    spec.density = Rational(2, 3);
    spec.seed = base + k;
    return spec;
}

Rational overlap_value(const Instance& inst, const Assignment& m) {
    Rational total(0);
    for (const Edge& e : m.edges())
        if (inst.prediction.contains(e)) total += inst.values[e.agent][e.resource];
    return total;
}

// Criterion 1: Boost on 500 random BMP instances x gamma grid x eta targets.
Outcome criterion_boost_suite() {
    Outcome out;
    for (std::uint64_t k = 0; k < 500; ++k) {
        Instance base = gen_instance(bmp_grid_spec(k));
        Rational opt = optimal_bruteforce(base).value;
        for (const Rational& target : eta_grid()) {
            PredictionSearch found = find_prediction_with_error(base, target, Rational(1, 8));
            Instance inst = base.with_prediction(found.prediction);
            Rational predicted = predicted_value_in_declared(inst);
            for (const Rational& gamma : gamma_grid()) {
                Assignment m = boost_matching(inst, Surd(gamma));
                Rational v = assignment_value(inst, m);
                Rational held = overlap_value(inst, m);
                out.require(Rational(2) * v + (gamma - Rational(1)) * held >= opt,
                            "coverage inequality failed");
                out.require((Rational(1) + Rational(1) / gamma) * v >= predicted,
                            "predicted-value inequality failed");
                Surd bound = guarantee("boost", gamma, found.achieved_eta);
                out.require((bound * Surd(v) - Surd(opt)).sign() >= 0, "approximation bound failed");
                out.require(check_stability(inst, Surd(gamma), m).stable, "unstable output");
            }
        }
    }
    return out;
}

// Criterion 2: tightness witness on the trade-off fixture.
Outcome criterion_tightness_witness() {
    Outcome out;
    for (const Rational& gamma : {Rational(3, 2), Rational(2), Rational(3)}) {
        for (const Rational& epsbar : {Rational(1, 10), Rational(1, 20)}) {
            Instance fig3b = fixture_fig3('b', gamma, epsbar);
            Rational opt = optimal_bruteforce(fig3b).value;

            // Perfect prediction: Boost lands on the optimum itself.
            Rational v = assignment_value(fig3b, boost_matching(fig3b, Surd(gamma)));
            out.require(v == opt, "perfect prediction did not reach the optimum");

            // Useless prediction: the ratio stays within 1 + gamma.
            Instance erased = fig3b.with_prediction(Assignment());
            Rational v1 = assignment_value(erased, boost_matching(erased, Surd(gamma)));
            out.require((Rational(1) + gamma) * v1 >= opt, "robustness ratio exceeded");
        }
    }
    return out;
}

// Criterion 3: Greedy-by-Theta value accounting on 500 random ERMK
// instances: the per-resource utilization bounds, the no-strict-subset
// property, the predicted-value bound, and the approximation curve.
Outcome criterion_greedy_suite() {
    Outcome out;
    for (std::uint64_t k = 0; k < 500; ++k) {
        Instance base = gen_instance(ermk_grid_spec(k));
        OracleResult opt = optimal_bruteforce(base);
        for (const Rational& target : eta_grid()) {
            PredictionSearch found = find_prediction_with_error(base, target, Rational(1, 8));
            Instance inst = base.with_prediction(found.prediction);
            Rational predicted = predicted_value_in_declared(inst);
            for (const Rational& gamma : gamma_grid()) {
                Assignment m = greedy(inst, ranking_theta(inst, Surd(gamma)));
                Rational v = assignment_value(inst, m);

                std::vector<Rational> mj(static_cast<std::size_t>(inst.m), Rational(0));
                std::vector<Rational> mj_pred(static_cast<std::size_t>(inst.m), Rational(0));
                for (const Edge& e : m.edges()) {
                    mj[static_cast<std::size_t>(e.resource)] += inst.values[e.agent][e.resource];
                    if (inst.prediction.contains(e))
                        mj_pred[static_cast<std::size_t>(e.resource)] += inst.values[e.agent][e.resource];
                }

                for (int j = 0; j < inst.m; ++j) {
                    auto ju = static_cast<std::size_t>(j);
                    // Resources that miss an optimal agent are well used.
                    bool missed_optimal_agent = false;
                    for (int i : opt.assignment.agents_of(j))
                        if (!m.resource_of(i)) missed_optimal_agent = true;
                    if (missed_optimal_agent)
                        out.require(Rational(2) * mj[ju] + (gamma - Rational(1)) * mj_pred[ju] >=
                                        inst.capacities[ju],
                                    "missed-agent utilization failed");

                    // Resources that reject a declared predicted agent are
                    // gamma/(gamma+1) utilized, and never hold a strict
                    // subset of their declared predicted agents.
                    std::vector<int> predicted_declared;
                    for (int i : inst.prediction.agents_of(j))
                        if (inst.is_declared(Edge{i, j})) predicted_declared.push_back(i);
                    bool missing = false, subset = true;
                    for (int i : predicted_declared)
                        if (m.resource_of(i) != j) missing = true;
                    for (const Edge& e : m.edges())
                        if (e.resource == j &&
                            std::find(predicted_declared.begin(), predicted_declared.end(), e.agent) ==
                                predicted_declared.end())
                            subset = false;
                    if (missing)
                        out.require((Rational(1) + Rational(1) / gamma) * mj[ju] >= inst.capacities[ju],
                                    "rejected-prediction utilization failed");
                    out.require(!(missing && subset),
                                "output holds a strict subset of the declared prediction");
                }

                Rational held = overlap_value(inst, m);
                out.require(Rational(3) * v + (gamma - Rational(1)) * held >= opt.value,
                            "three-cover inequality failed");
                out.require((Rational(1) + Rational(1) / gamma) * v >= predicted,
                            "predicted-value inequality failed");
                Surd bound = guarantee("greedy-theta", gamma, found.achieved_eta);
                out.require((bound * Surd(v) - Surd(opt.value)).sign() >= 0, "approximation bound failed");
            }
        }
    }
    return out;
}

// Criterion 4: the randomized mixers meet their expected-value bounds,
// decided by exact surd signs with never-straddling certified intervals.
Outcome criterion_randomized_suite() {
    Outcome out;
    const Rational width(BigInt(1), boost::multiprecision::pow(BigInt(10), 12));
    auto check_pair = [&](const Surd& factor, const Surd& expected, const Rational& opt,
                          const Surd& consistency, const Rational& predicted) {
        Surd robust_slack = factor * expected - Surd(opt);
        Surd consist_slack = consistency * expected - Surd(predicted);
        out.require(robust_slack.sign() >= 0, "expected robustness bound failed");
        out.require(consist_slack.sign() >= 0, "expected consistency bound failed");
        auto [rlo, rhi] = robust_slack.enclosure(width);
        auto [clo, chi] = consist_slack.enclosure(width);
        out.require(rhi - rlo <= width && !(rlo.sign() < 0 && rhi.sign() > 0),
                    "robustness interval straddles zero");
        out.require(chi - clo <= width && !(clo.sign() < 0 && chi.sign() > 0),
                    "consistency interval straddles zero");
    };

    for (std::uint64_t k = 0; k < 500; ++k) {
        Instance base = gen_instance(bmp_grid_spec(k));
        Rational opt = optimal_bruteforce(base).value;
        for (const Rational& target : eta_grid()) {
            Instance inst =
                base.with_prediction(find_prediction_with_error(base, target, Rational(1, 8)).prediction);
            Rational predicted = predicted_value_in_declared(inst);
            for (const Rational& gamma : gamma_grid()) {
                Surd expected = expected_value(inst, boost_or_trust(inst, gamma));
                check_pair(Surd::sqrt_of(Rational(2) * (gamma + Rational(1))), expected, opt,
                           Surd(Rational(1) + Rational(1) / gamma), predicted);
            }
        }
    }
    for (std::uint64_t k = 0; k < 500; ++k) {
        Instance base = gen_instance(ermk_grid_spec(k));
        Rational opt = optimal_bruteforce(base).value;
        for (const Rational& target : eta_grid()) {
            Instance inst =
                base.with_prediction(find_prediction_with_error(base, target, Rational(1, 8)).prediction);
            Rational predicted = predicted_value_in_declared(inst);
            for (const Rational& gamma : gamma_grid()) {
                Surd expected = expected_value(inst, greedy_or_trust(inst, gamma));
                Surd factor = (Surd::sqrt_of(Rational(12) * gamma + Rational(13)) + Surd(Rational(1))) /
                              Surd(Rational(2));
                check_pair(factor, expected, opt, Surd(Rational(1) + Rational(1) / gamma), predicted);
            }
        }
    }
    for (std::uint64_t k = 0; k < 500; ++k) {
        Variant variant = k % 2 == 0 ? Variant::ASGAP : Variant::VCGAP;
        Instance base = gen_instance(gap_mix_spec(variant, k, 420000));
        Rational opt = optimal_bruteforce(base).value;
        for (const Rational& target : eta_grid()) {
            Instance inst =
                base.with_prediction(find_prediction_with_error(base, target, Rational(1, 8)).prediction);
            Rational predicted = predicted_value_in_declared(inst);
            for (const Rational& gamma : gamma_grid()) {
                Surd expected = expected_value(inst, boost_or_greedy_or_trust(inst, gamma));
                check_pair(Surd(Rational(3) + gamma), expected, opt,
                           Surd(Rational(1) + Rational(3) / gamma), predicted);
            }
        }
    }
    return out;
}

// Criterion 5: exhaustive incentive tests.
Outcome criterion_incentives() {
    Outcome out;
    struct Config {
        std::string id;
        Rational gamma;
        Variant variant;
        std::uint64_t base_seed;
    };
    const std::vector<Config> configs = {
        {"trust", Rational(1), Variant::GAP, 430000},
        {"boost", Rational(1), Variant::BMP, 431000},
        {"boost", Rational(2), Variant::BMP, 432000},
        {"greedy-theta", Rational(1), Variant::ERMK, 433000},
        {"greedy-theta", Rational(2), Variant::ERMK, 434000},
        {"greedy-vcgap", Rational(1), Variant::VCGAP, 435000},
        {"greedy-asgap", Rational(1), Variant::ASGAP, 436000},
    };

    auto tiny = [](Variant variant, std::uint64_t seed) {
        GenSpec spec;
        spec.variant = variant;
        spec.n = 1 + static_cast<int>(seed % 3);
        spec.m = 1 + static_cast<int>((seed / 3) % 3);
        spec.value_hi = Rational(12);
        spec.size_hi = Rational(4);
        spec.cap_lo = Rational(2);
        spec.cap_hi = Rational(8);
        spec.density = Rational(2, 3);
        spec.seed = seed;
        spec.target_eta = Rational(static_cast<std::int64_t>(seed % 4), 4);
        return spec;
    };

    for (const Config& config : configs) {
        Mechanism mech = make_mechanism(config.id, Surd(config.gamma));
        for (std::uint64_t k = 0; k < 100; ++k) {
            Instance inst = gen_instance(tiny(config.variant, config.base_seed + k));
            IncentiveReport sp = test_strategyproof(mech, config.id, inst);
            out.require(sp.ok(), config.id + ": unilateral deviation found");
        }
        for (std::uint64_t k = 0; k < 25; ++k) {
            Instance inst = gen_instance(tiny(config.variant, config.base_seed + 500 + k));
            IncentiveReport gsp = test_group_strategyproof(mech, config.id, inst, 3);
            out.require(gsp.ok(), config.id + ": coalition deviation found");
        }
    }

    // The lower-bound fixtures. They are BMP-shaped with a valid value
    // consensus (everyone ranks resource b first), so every shipped
    // mechanism can face the exhaustive tester on them.
    std::vector<Instance> fixtures;
    for (char which : {'a', 'b', 'c'}) {
        fixtures.push_back(fixture_fig3(which, Rational(2), Rational(1, 10)));
        fixtures.push_back(fixture_fig5(which, Rational(1, 2), Rational(1, 20)));
    }
    for (const Instance& inst : fixtures) {
        for (const std::string& id : {std::string("boost"), std::string("greedy-theta")}) {
            for (const Rational& gamma : {Rational(1), Rational(2)}) {
                Mechanism mech = make_mechanism(id, Surd(gamma));
                out.require(test_strategyproof(mech, id, inst, "fixture").ok(),
                            id + " deviation on a fixture");
                out.require(test_group_strategyproof(mech, id, inst, 2, "fixture").ok(),
                            id + " coalition deviation on a fixture");
            }
        }
        for (const std::string& id :
             {std::string("trust"), std::string("greedy-vcgap"), std::string("greedy-asgap")}) {
            Mechanism mech = make_mechanism(id, Surd(Rational(1)));
            out.require(test_strategyproof(mech, id, inst, "fixture").ok(), id + " deviation on a fixture");
        }
    }

    // Tester sensitivity: the oracle-optimal strawman must be caught on the
    // trade-off family.
    std::uint64_t caught = 0;
    for (char which : {'a', 'b', 'c'}) {
        Instance inst = fixture_fig3(which, Rational(2), Rational(1, 10));
        IncentiveReport report = test_strategyproof(make_mechanism("oracle-optimal", Surd(Rational(1))),
                                                    "oracle-optimal", inst, "fig3");
        caught += report.violations.size();
    }
    out.require(caught >= 1, "strawman slipped through the tester");
    return out;
}

// Criterion 6: capacitated deferred acceptance equals the copy reduction.
Outcome criterion_reduction_equivalence() {
    Outcome out;
    for (std::uint64_t k = 0; k < 100; ++k) {
        GenSpec spec;
        spec.variant = Variant::RSGAP;
        spec.n = 1 + static_cast<int>(k % 5);
        spec.m = 1 + static_cast<int>(k % 3);
        spec.size_lo = Rational(1);
        spec.size_hi = Rational(1);
        spec.cap_lo = Rational(1);
        spec.cap_hi = Rational(4);
        spec.max_denominator = 1;
        spec.value_hi = Rational(50);
        spec.density = Rational(2, 3);
        spec.seed = 440000 + k;
        spec.target_eta = Rational(static_cast<std::int64_t>(k % 4), 4);
        Instance inst = gen_instance(spec);
        for (const Rational& gamma : {Rational(1), Rational(2), Rational(7, 2)}) {
            RsgapReduction red = rsgap_reduce(inst);
            Assignment direct = boost_capacitated(inst, Surd(gamma));
            Assignment reduced = red.translate(boost_matching(red.bmp, Surd(gamma)));
            out.require(direct == reduced, "reduction path disagrees with capacitated run");
        }
    }
    return out;
}

// Criterion 7: truth-inducing checks.
Outcome criterion_truth_inducing() {
    Outcome out;
    for (std::uint64_t k = 0; k < 200; ++k) {
        GenSpec ermk = ermk_grid_spec(k);
        ermk.seed = 450000 + k;
        Instance e = gen_instance(ermk);
        Rational gamma(1 + static_cast<std::int64_t>(k % 3), 1 + static_cast<std::int64_t>(k % 2));
        if (gamma < Rational(1)) gamma = Rational(1);
        out.require(check_truth_inducing(e, ranking_theta(e, Surd(gamma))).truth_inducing,
                    "theta ranking not truth-inducing on ERMK");

        Instance v = gen_instance(gap_mix_spec(Variant::VCGAP, k, 460000));
        out.require(check_truth_inducing(v, ranking_vcgap(v)).truth_inducing,
                    "vcgap ranking not truth-inducing on VCGAP");

        Instance a = gen_instance(gap_mix_spec(Variant::ASGAP, k, 470000));
        out.require(check_truth_inducing(a, ranking_asgap(a)).truth_inducing,
                    "asgap ranking not truth-inducing on ASGAP");
    }

    // The constructed counterexample: efficiency and value disagree.
    Instance bad;
    bad.n = 1;
    bad.m = 2;
    bad.values = {{Rational(2), Rational(5)}};
    bad.sizes = {{Rational(1), Rational(10)}};
    bad.capacities = {Rational(10), Rational(10)};
    bad.declared = {Edge{0, 0}, Edge{0, 1}};
    bad.prediction = Assignment();
    bad.variant = Variant::GAP;
    bad = validate(std::move(bad));
    TruthInducingReport report = check_truth_inducing(bad, ranking_asgap(bad));
    out.require(!report.truth_inducing, "counterexample accepted");
    out.require(report.witness.has_value() && report.witness->first == Edge{0, 0} &&
                    report.witness->second == Edge{0, 1},
                "counterexample witness wrong");
    return out;
}

// Criterion 8: curve continuity and monotonicity.
Outcome criterion_curves() {
    Outcome out;
    const std::vector<std::string> ids = {"boost", "greedy-theta", "boost-or-trust", "greedy-or-trust",
                                          "boost-or-greedy-or-trust"};
    auto robustness = [](const std::string& id, const Rational& gamma) -> Surd {
        if (id == "boost") return Surd(Rational(1) + gamma);
        if (id == "greedy-theta") return Surd(Rational(2) + gamma);
        if (id == "boost-or-trust") return Surd::sqrt_of(Rational(2) * (gamma + Rational(1)));
        if (id == "greedy-or-trust")
            return (Surd::sqrt_of(Rational(12) * gamma + Rational(13)) + Surd(Rational(1))) /
                   Surd(Rational(2));
        return Surd(Rational(3) + gamma);
    };
    for (const std::string& id : ids) {
        for (const Rational& gamma : {Rational(1), Rational(3, 2), Rational(2), Rational(4), Rational(10)}) {
            Surd bp = guarantee_breakpoint(id, gamma);
            Surd numerator =
                id == "boost-or-greedy-or-trust" ? Surd(Rational(3) + gamma) : Surd(Rational(1) + gamma);
            Surd low_at_bp = numerator / (Surd(gamma) * (Surd(Rational(1)) - bp));
            out.require(low_at_bp == robustness(id, gamma), "branches disagree at the breakpoint");
            if (bp.is_rational())
                out.require(guarantee(id, gamma, bp.as_rational()) == robustness(id, gamma),
                            "guarantee() discontinuous at a rational breakpoint");
        }

        for (int gk = 0; gk < 50; ++gk) {
            Rational gamma = Rational(1) + Rational(9 * gk, 49);
            Surd prev = guarantee(id, gamma, Rational(0));
            for (int ek = 1; ek < 50; ++ek) {
                Surd cur = guarantee(id, gamma, Rational(ek, 49));
                out.require((cur - prev).sign() >= 0, "curve not monotone in eta");
                prev = cur;
            }
        }
        Surd prev = guarantee(id, Rational(1), Rational(0));
        for (int gk = 1; gk < 50; ++gk) {
            Surd cur = guarantee(id, Rational(1) + Rational(9 * gk, 49), Rational(0));
            out.require((cur - prev).sign() <= 0, "consistency not monotone in gamma");
            prev = cur;
        }
    }
    return out;
}

// Criterion 9: gamma = 1 makes Boost independent of the prediction.
Outcome criterion_gamma_one_neutrality() {
    Outcome out;
    for (std::uint64_t k = 0; k < 50; ++k) {
        GenSpec spec = bmp_grid_spec(480000 + k);
        spec.n = 4;
        spec.m = 4;
        Instance inst = gen_instance(spec);
        Assignment reference = boost_matching(inst, Surd(Rational(1)));
        Rng rng(490000 + k);
        for (int p = 0; p < 20; ++p) {
            std::vector<Edge> pred;
            std::vector<int> perm = rng.permutation(inst.m);
            for (int i = 0; i < inst.n && i < inst.m; ++i)
                if (rng.bernoulli(Rational(2, 3))) pred.push_back(Edge{i, perm[static_cast<std::size_t>(i)]});
            Instance with = inst.with_prediction(Assignment(std::move(pred)));
            out.require(boost_matching(with, Surd(Rational(1))) == reference,
                        "prediction changed the gamma = 1 outcome");
        }
    }
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        std::string label;
        double time_limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "boost guarantee suite (500 BMP instances x gamma x eta)", 60, criterion_boost_suite},
        {2, "consistency tightness witness on the trade-off fixture", 1, criterion_tightness_witness},
        {3, "greedy-by-theta suite (500 ERMK instances x gamma x eta)", 120, criterion_greedy_suite},
        {4, "randomized expected-value suite (exact surd sign tests)", 120, criterion_randomized_suite},
        {5, "incentive suite (exhaustive SP/GSP + strawman sensitivity)", 180, criterion_incentives},
        {6, "reduction equivalence (capacitated DA vs copy reduction)", 10, criterion_reduction_equivalence},
        {7, "truth-inducing rankings (3 x 200 instances + witness)", 10, criterion_truth_inducing},
        {8, "guarantee curve continuity and monotonicity", 5, criterion_curves},
        {9, "gamma = 1 neutrality of boost", 5, criterion_gamma_one_neutrality},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.ok = false;
            outcome.note = std::string("exception: ") + e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = seconds < criterion.time_limit_seconds;
        bool pass = outcome.ok && in_time;
        std::ostringstream line;
        line << (pass ? "PASS" : "FAIL") << "  " << criterion.number << ". " << criterion.label << "  ["
             << outcome.checks << " checks, " << outcome.violations << " violations, " << std::fixed;
        line.precision(1);
        line << seconds << "s/" << criterion.time_limit_seconds << "s]";
        if (!outcome.note.empty()) line << "  -- " << outcome.note;
        if (!in_time && outcome.ok) line << "  -- over time budget";
        std::cout << line.str() << std::endl;
        if (!pass) ++failures;
    }
    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria pass" : "ACCEPTANCE: FAILURES PRESENT")
              << std::endl;
    return failures;
}
