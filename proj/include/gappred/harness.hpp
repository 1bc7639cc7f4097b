#pragma once

#include <gappred/generators.hpp>
#include <gappred/guarantees.hpp>
#include <gappred/incentives.hpp>
#include <gappred/instance.hpp>
#include <gappred/io.hpp>
#include <gappred/mechanisms.hpp>
#include <gappred/oracle.hpp>
#include <gappred/randomized.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace gappred {

inline const std::vector<std::string>& deterministic_mechanism_ids() {
    static const std::vector<std::string> ids = {"trust",        "boost",       "boost-capacitated",
                                                 "greedy-theta", "greedy-vcgap", "greedy-asgap"};
    return ids;
}

inline const std::vector<std::string>& randomized_mechanism_ids() {
    static const std::vector<std::string> ids = {"boost-or-trust", "greedy-or-trust",
                                                 "boost-or-greedy-or-trust"};
    return ids;
}

inline bool is_randomized_mechanism(const std::string& id) {
    const auto& ids = randomized_mechanism_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

/// Deterministic mechanism by id, as a reusable closure over gamma.
/// The greedy instantiations rebuild their ranking from the instance they
/// are handed, so deviation testers can feed modified declarations.
inline Mechanism make_mechanism(const std::string& id, const Surd& gamma) {
    if (id == "trust") return [](const Instance& inst) { return trust(inst); };
    if (id == "boost") return [gamma](const Instance& inst) { return boost_matching(inst, gamma); };
    if (id == "boost-capacitated")
        return [gamma](const Instance& inst) { return boost_capacitated(inst, gamma); };
    if (id == "greedy-theta")
        return [gamma](const Instance& inst) { return greedy(inst, ranking_theta(inst, gamma)); };
    if (id == "greedy-vcgap") return [](const Instance& inst) { return greedy(inst, ranking_vcgap(inst)); };
    if (id == "greedy-asgap") return [](const Instance& inst) { return greedy(inst, ranking_asgap(inst)); };
    // Diagnostic strawman: returns the exact optimum and is manipulable by
    // design, so the deviation tester has something to catch.
    if (id == "oracle-optimal")
        return [](const Instance& inst) { return optimal_bruteforce(inst).assignment; };
    raise(Errc::UnknownMechanism, "unknown deterministic mechanism '" + id + "'");
}

inline OutcomeDistribution run_randomized(const std::string& id, const Instance& inst, const Rational& gamma) {
    if (id == "boost-or-trust") return boost_or_trust(inst, gamma);
    if (id == "greedy-or-trust") return greedy_or_trust(inst, gamma);
    if (id == "boost-or-greedy-or-trust") return boost_or_greedy_or_trust(inst, gamma);
    raise(Errc::UnknownMechanism, "unknown randomized mechanism '" + id + "'");
}

/// The deterministic support components of a randomized mechanism, at the
/// same parameters the mixer uses (useful for universal-GSP testing).
inline std::vector<std::pair<std::string, Mechanism>> mixer_components(const std::string& id,
                                                                       const Rational& gamma) {
    if (id == "boost-or-trust") {
        Surd delta = Surd::sqrt_of(Rational(2) * (gamma + Rational(1))) - Surd(Rational(1));
        return {{"boost-or-trust/boost", make_mechanism("boost", delta)},
                {"boost-or-trust/trust", make_mechanism("trust", Surd(Rational(1)))}};
    }
    if (id == "greedy-or-trust") {
        Surd delta =
            (Surd::sqrt_of(Rational(12) * gamma + Rational(13)) - Surd(Rational(3))) / Surd(Rational(2));
        return {{"greedy-or-trust/greedy-theta", make_mechanism("greedy-theta", delta)},
                {"greedy-or-trust/trust", make_mechanism("trust", Surd(Rational(1)))}};
    }
    if (id == "boost-or-greedy-or-trust") {
        Surd g = Rational(gamma);
        Mechanism boost_component = [g](const Instance& inst) {
            return boost_one_to_one(inst, g).assignment;
        };
        Mechanism greedy_component = [](const Instance& inst) {
            return greedy(inst, inst.variant == Variant::VCGAP ? ranking_vcgap(inst) : ranking_asgap(inst));
        };
        return {{"boost-or-greedy-or-trust/boost", boost_component},
                {"boost-or-greedy-or-trust/greedy", greedy_component},
                {"boost-or-greedy-or-trust/trust", make_mechanism("trust", Surd(Rational(1)))}};
    }
    raise(Errc::UnknownMechanism, "unknown randomized mechanism '" + id + "'");
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepConfig {
    GenSpec base;                        // variant, sizes, ranges, base seed
    std::vector<std::string> mechanisms;  // ids with guarantee curves
    std::vector<Rational> gammas;
    std::vector<Rational> eta_targets;
    int instance_count = 10;
    Rational eta_tolerance{1, 20};
    std::uint64_t oracle_budget = kDefaultOracleBudget;
    unsigned jobs = 1;
};

struct SweepRow {
    std::string instance_id;
    Variant variant = Variant::GAP;
    int n = 0, m = 0;
    Rational gamma;
    Rational eta_target;
    Rational eta_achieved;
    std::string mechanism;
    Surd value;     // v(M) for deterministic mechanisms, E[v] for mixers
    Rational opt;   // v(M*_D)
    Surd bound;     // g(eta_achieved, gamma)
    bool pass = false;
};

inline const Rational& csv_interval_width() {
    static const Rational w(BigInt(1), boost::multiprecision::pow(BigInt(10), 12));
    return w;
}

namespace detail {

inline Surd mechanism_value(const std::string& id, const Instance& inst, const Rational& gamma) {
    if (is_randomized_mechanism(id)) return expected_value(inst, run_randomized(id, inst, gamma));
    return Surd(assignment_value(inst, make_mechanism(id, Surd(gamma))(inst)));
}

}  // namespace detail

/// Runs every (instance, eta target, gamma, mechanism) combination of the
/// config and evaluates the guarantee g(eta, gamma) * value >= v(M*_D)
/// exactly. Sweep points run concurrently; rows come back fully sorted, so
/// the output is independent of scheduling.
inline std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    for (const auto& id : config.mechanisms)
        (void)guarantee_breakpoint(id, Rational(1));  // reject unknown ids up front

    struct Point {
        Instance inst;
        std::string id;
        Rational eta_target, eta_achieved, opt;
    };
    std::vector<Point> points;
    for (int k = 0; k < config.instance_count; ++k) {
        GenSpec spec = config.base;
        spec.seed = config.base.seed + static_cast<std::uint64_t>(k);
        spec.target_eta.reset();
        Instance inst = gen_instance(spec, config.oracle_budget);
        OracleResult opt = optimal_bruteforce(inst, config.oracle_budget);
        for (const Rational& target : config.eta_targets) {
            PredictionSearch found = find_prediction_with_error(inst, target, config.eta_tolerance,
                                                                config.oracle_budget);
            Instance with_pred = inst.with_prediction(found.prediction);
            std::string id = std::string(variant_name(config.base.variant)) + "-s" +
                             std::to_string(spec.seed) + "-eta" + target.to_string();
            for (char& c : id)
                if (c == '/') c = '-';  // keep ids readable: eta targets like 1/2 become 1-2
            points.push_back(Point{std::move(with_pred), id, target, found.achieved_eta, opt.value});
        }
    }

    auto eval_point = [&](const Point& pt) {
        std::vector<SweepRow> rows;
        for (const Rational& gamma : config.gammas) {
            for (const std::string& mech : config.mechanisms) {
                SweepRow row;
                row.instance_id = pt.id;
                row.variant = pt.inst.variant;
                row.n = pt.inst.n;
                row.m = pt.inst.m;
                row.gamma = gamma;
                row.eta_target = pt.eta_target;
                row.eta_achieved = pt.eta_achieved;
                row.mechanism = mech;
                row.value = detail::mechanism_value(mech, pt.inst, gamma);
                row.opt = pt.opt;
                row.bound = guarantee(mech, gamma, pt.eta_achieved);
                row.pass = (row.bound * row.value - Surd(row.opt)).sign() >= 0;
                rows.push_back(std::move(row));
            }
        }
        return rows;
    };

    std::vector<SweepRow> rows;
    unsigned jobs = std::max(1u, config.jobs);
    if (jobs == 1) {
        for (const Point& pt : points) {
            auto part = eval_point(pt);
            rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
    } else {
        std::vector<std::future<std::vector<SweepRow>>> futures;
        std::atomic<std::size_t> next{0};
        for (unsigned w = 0; w < jobs; ++w)
            futures.push_back(std::async(std::launch::async, [&] {
                std::vector<SweepRow> mine;
                for (;;) {
                    std::size_t k = next.fetch_add(1);
                    if (k >= points.size()) break;
                    auto part = eval_point(points[k]);
                    mine.insert(mine.end(), std::make_move_iterator(part.begin()),
                                std::make_move_iterator(part.end()));
                }
                return mine;
            }));
        for (auto& f : futures) {
            auto part = f.get();
            rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        }
    }

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
        if (a.mechanism != b.mechanism) return a.mechanism < b.mechanism;
        return a.gamma < b.gamma;
    });
    return rows;
}

inline std::string csv_header() {
    return "instance_id,variant,n,m,gamma,eta_target,eta_achieved,mechanism,"
           "value_num,value_den,interval_lo,interval_hi,opt_num,opt_den,bound,pass";
}

/// Certified decimal enclosure, rounded outward so the printed pair still
/// contains the exact value; the printed width stays <= 1e-12.
inline std::pair<std::string, std::string> printed_enclosure(const Surd& value) {
    auto [lo, hi] = value.enclosure(csv_interval_width() / Rational(2));
    return {lo.to_decimal_string(14, Rational::DecimalRounding::Down),
            hi.to_decimal_string(14, Rational::DecimalRounding::Up)};
}

/// One CSV line per row. Rationals print as "p/q"; a surd-valued column
/// prints as a certified decimal interval "lo..hi", and its exact num/den
/// fields stay empty.
inline std::string to_csv_line(const SweepRow& row) {
    std::ostringstream out;
    auto [lo, hi] = printed_enclosure(row.value);
    out << row.instance_id << ',' << variant_name(row.variant) << ',' << row.n << ',' << row.m << ','
        << row.gamma.to_string() << ',' << row.eta_target.to_string() << ',' << row.eta_achieved.to_string()
        << ',' << row.mechanism << ',';
    if (row.value.is_rational())
        out << row.value.as_rational().num().str() << ',' << row.value.as_rational().den().str();
    else
        out << ',';
    out << ',' << lo << ',' << hi << ',' << row.opt.num().str() << ',' << row.opt.den().str() << ',';
    if (row.bound.is_rational()) {
        out << row.bound.as_rational().to_string();
    } else {
        auto [blo, bhi] = printed_enclosure(row.bound);
        out << blo << ".." << bhi;
    }
    out << ',' << (row.pass ? 1 : 0);
    return out.str();
}

inline void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << csv_header() << "\n";
    for (const SweepRow& row : rows) out << to_csv_line(row) << "\n";
}

struct VerifyResult {
    std::size_t rows_checked = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Re-derives each row's bound from (mechanism, gamma, eta_achieved) and
/// re-decides the pass flag from the exact fields (falling back to the
/// certified interval for surd-valued expectations). Any failing or
/// inconsistent row is reported.
inline VerifyResult verify_csv(std::istream& in) {
    VerifyResult result;
    std::string line;
    if (!std::getline(in, line)) raise(Errc::BadInput, "empty CSV");
    if (line != csv_header()) raise(Errc::BadInput, "unexpected CSV header");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> col;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            col.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (col.size() != 16) {
            result.violations.push_back("line " + std::to_string(lineno) + ": malformed row");
            continue;
        }
        ++result.rows_checked;
        const std::string& mech = col[7];
        Rational gamma = Rational::parse(col[4]);
        Rational eta = Rational::parse(col[6]);
        Rational opt{BigInt(col[12]), BigInt(col[13])};
        Surd bound = guarantee(mech, gamma, eta);
        bool pass;
        if (!col[8].empty()) {
            Rational value{BigInt(col[8]), BigInt(col[9])};
            pass = (bound * Surd(value) - Surd(opt)).sign() >= 0;
        } else {
            Rational lo = Rational::parse(col[10]), hi = Rational::parse(col[11]);
            auto [blo, bhi] = bound.enclosure(csv_interval_width());
            if (blo * lo >= opt) {
                pass = true;
            } else if (bhi * hi < opt) {
                pass = false;
            } else {
                result.violations.push_back("line " + std::to_string(lineno) +
                                            ": interval too wide to certify the bound");
                continue;
            }
        }
        bool recorded = col[15] == "1";
        if (!pass)
            result.violations.push_back("line " + std::to_string(lineno) + ": bound violated for " + mech);
        else if (!recorded)
            result.violations.push_back("line " + std::to_string(lineno) +
                                        ": row marked fail but the bound holds");
    }
    return result;
}

}  // namespace gappred
