// gappred: run assignment mechanisms with predictions, sweep guarantee
// grids, and hunt for profitable deviations, all in exact arithmetic.

#include <gappred/harness.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace gappred;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBoundViolation = 2;
constexpr int kExitIncentiveViolation = 3;

Rational parse_rational_flag(const std::string& text, const std::string& flag) {
    try {
        return Rational::parse(text);
    } catch (const std::exception&) {
        raise(Errc::BadInput, "flag --" + flag + ": cannot parse rational '" + text + "'");
    }
}

std::vector<Rational> parse_rational_list(const std::string& text, const std::string& flag) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string piece = text.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!piece.empty()) out.push_back(parse_rational_flag(piece, flag));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) raise(Errc::BadInput, "flag --" + flag + ": empty list");
    return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string piece = text.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::uint64_t oracle_budget_from_env() {
    if (const char* env = std::getenv("GAPPRED_BUDGET")) {
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && parsed > 0) return parsed;
        std::cerr << "warning: ignoring unparsable GAPPRED_BUDGET='" << env << "'\n";
    }
    return kDefaultOracleBudget;
}

Variant variant_flag(const std::string& name) {
    auto v = variant_from_name(name);
    if (!v) raise(Errc::BadInput, "unknown variant '" + name + "'");
    return *v;
}

std::string decimal_enclosure(const Surd& value) {
    if (value.is_rational()) return value.as_rational().to_decimal_string(6);
    auto [lo, hi] = printed_enclosure(value);
    return lo + ".." + hi;
}

void print_assignment(std::ostream& out, const Instance& inst, const Assignment& assignment) {
    out << "  assignment: " << to_string(assignment) << "\n";
    Rational value = assignment_value(inst, assignment);
    out << "  value: " << value.to_string() << " (" << value.to_decimal_string(6) << ")\n";
}

int cmd_solve(const std::string& instance_path, const std::string& mechanism, const std::string& gamma_text,
              const std::string& trace_path, const std::string& selection,
              std::optional<std::uint64_t> sample_seed) {
    Instance inst = load_instance(instance_path);
    Rational gamma = parse_rational_flag(gamma_text, "gamma");
    BoostOptions opts;
    if (selection == "largest-offer")
        opts.selection = ActiveSelection::LargestNextOffer;
    else if (selection != "lowest-index")
        raise(Errc::BadInput, "unknown --selection '" + selection + "'");

    std::cout << "mechanism: " << mechanism << " (gamma = " << gamma.to_string() << ")\n";
    if (is_randomized_mechanism(mechanism)) {
        OutcomeDistribution dist = run_randomized(mechanism, inst, gamma);
        for (const auto& entry : dist.entries) {
            std::cout << "  with probability " << entry.probability.to_string() << " ("
                      << decimal_enclosure(entry.probability) << "): " << support_label_name(entry.label)
                      << " -> " << to_string(entry.assignment)
                      << ", value " << assignment_value(inst, entry.assignment).to_string() << "\n";
        }
        Surd expected = expected_value(inst, dist);
        std::cout << "  expected value: " << expected.to_string() << " (" << decimal_enclosure(expected)
                  << ")\n";
        if (sample_seed) {
            Rng rng(*sample_seed);
            Rational u(static_cast<std::int64_t>(rng.next() >> 2), 1LL << 62);
            Surd cumulative = Rational(0);
            const OutcomeDistribution::Entry* picked = &dist.entries.back();
            for (const auto& entry : dist.entries) {
                cumulative = cumulative + entry.probability;
                if ((cumulative - Surd(u)).sign() > 0) {
                    picked = &entry;
                    break;
                }
            }
            std::cout << "  sampled (seed " << *sample_seed << "): " << support_label_name(picked->label)
                      << " -> " << to_string(picked->assignment) << "\n";
        }
        if (!trace_path.empty())
            std::cerr << "warning: --trace applies to deterministic mechanisms; ignored\n";
        return kExitOk;
    }

    Assignment assignment;
    Trace trace;
    if (mechanism == "boost") {
        MechanismRun run = boost_run(inst, Surd(gamma), opts);
        assignment = run.assignment;
        trace = run.trace;
    } else if (mechanism == "boost-capacitated") {
        MechanismRun run = boost_capacitated_run(inst, Surd(gamma), opts);
        assignment = run.assignment;
        trace = run.trace;
    } else if (mechanism == "greedy-theta") {
        MechanismRun run = greedy_run(inst, ranking_theta(inst, Surd(gamma)));
        assignment = run.assignment;
        trace = run.trace;
    } else if (mechanism == "greedy-vcgap") {
        MechanismRun run = greedy_run(inst, ranking_vcgap(inst));
        assignment = run.assignment;
        trace = run.trace;
    } else if (mechanism == "greedy-asgap") {
        MechanismRun run = greedy_run(inst, ranking_asgap(inst));
        assignment = run.assignment;
        trace = run.trace;
    } else if (mechanism == "trust") {
        assignment = trust(inst);
    } else {
        raise(Errc::UnknownMechanism, "unknown mechanism '" + mechanism + "'");
    }

    print_assignment(std::cout, inst, assignment);
    if (mechanism == "boost") {
        StabilityReport report = check_stability(inst, Surd(gamma), assignment);
        std::cout << "  stable: "
                  << (report.stable ? "yes" : "no (blocked by " + to_string(*report.blocking) + ")") << "\n";
    }
    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out) raise(Errc::BadInput, "cannot write trace file '" + trace_path + "'");
        out << to_json_lines(trace);
        std::cout << "  trace: " << trace_path << " (" << trace.events().size() << " events)\n";
    }
    return kExitOk;
}

int cmd_gen(const std::string& variant, int n, int m, const std::string& density_text, std::uint64_t seed,
            const std::string& eta_text, const std::string& eta_tol_text, int max_den,
            const std::string& value_range, const std::string& size_range, const std::string& cap_range,
            const std::string& out_path) {
    GenSpec spec;
    spec.variant = variant_flag(variant);
    spec.n = n;
    spec.m = m;
    spec.density = parse_rational_flag(density_text, "density");
    spec.seed = seed;
    spec.max_denominator = max_den;
    if (!eta_text.empty()) spec.target_eta = parse_rational_flag(eta_text, "eta");
    spec.eta_tolerance = parse_rational_flag(eta_tol_text, "eta-tol");
    if (!value_range.empty()) {
        auto bounds = parse_rational_list(value_range, "values");
        if (bounds.size() != 2) raise(Errc::BadInput, "--values needs lo,hi");
        spec.value_lo = bounds[0];
        spec.value_hi = bounds[1];
    }
    if (!size_range.empty()) {
        auto bounds = parse_rational_list(size_range, "sizes");
        if (bounds.size() != 2) raise(Errc::BadInput, "--sizes needs lo,hi");
        spec.size_lo = bounds[0];
        spec.size_hi = bounds[1];
    }
    if (!cap_range.empty()) {
        auto bounds = parse_rational_list(cap_range, "capacities");
        if (bounds.size() != 2) raise(Errc::BadInput, "--capacities needs lo,hi");
        spec.cap_lo = bounds[0];
        spec.cap_hi = bounds[1];
    }

    Instance inst = gen_instance(spec, oracle_budget_from_env());
    nlohmann::json j = instance_to_json(inst);
    j["meta"] = {{"generator", Rng::kAlgorithmId}, {"seed", seed}};
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) raise(Errc::BadInput, "cannot write '" + out_path + "'");
        out << j.dump(2) << "\n";
        std::cout << "wrote " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_fixture(const std::string& name, const std::string& gamma, const std::string& epsbar,
                const std::string& delta, const std::string& alpha, const std::string& eps,
                const std::string& out_path) {
    FixtureParams params;
    if (!gamma.empty()) params.gamma = parse_rational_flag(gamma, "gamma");
    if (!epsbar.empty()) params.epsbar = parse_rational_flag(epsbar, "epsbar");
    if (!delta.empty()) params.delta = parse_rational_flag(delta, "delta");
    if (!alpha.empty()) params.alpha = parse_rational_flag(alpha, "alpha");
    if (!eps.empty()) params.eps = parse_rational_flag(eps, "eps");
    Instance inst = fixture_by_name(name, params);
    nlohmann::json j = instance_to_json(inst);
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) raise(Errc::BadInput, "cannot write '" + out_path + "'");
        out << j.dump(2) << "\n";
        std::cout << "wrote " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const std::string& variant, const std::string& mechanisms, const std::string& gammas,
              const std::string& etas, int count, int n, int m, std::uint64_t seed,
              const std::string& density, const std::string& eta_tol, int max_den, unsigned jobs,
              const std::string& out_path) {
    SweepConfig config;
    config.base.variant = variant_flag(variant);
    config.base.n = n;
    config.base.m = m;
    config.base.seed = seed;
    config.base.density = parse_rational_flag(density, "density");
    config.base.max_denominator = max_den;
    config.mechanisms = parse_string_list(mechanisms);
    config.gammas = parse_rational_list(gammas, "gamma");
    config.eta_targets = parse_rational_list(etas, "eta");
    config.instance_count = count;
    config.eta_tolerance = parse_rational_flag(eta_tol, "eta-tol");
    config.oracle_budget = oracle_budget_from_env();
    config.jobs = jobs;

    std::vector<SweepRow> rows = run_sweep(config);
    if (out_path.empty()) {
        write_csv(rows, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) raise(Errc::BadInput, "cannot write '" + out_path + "'");
        write_csv(rows, out);
    }
    std::size_t failures = 0;
    for (const SweepRow& row : rows)
        if (!row.pass) ++failures;
    std::cerr << rows.size() << " rows, " << failures << " bound violations\n";
    return failures == 0 ? kExitOk : kExitBoundViolation;
}

int cmd_verify_bounds(const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) raise(Errc::BadInput, "cannot open '" + in_path + "'");
    VerifyResult result = verify_csv(in);
    for (const std::string& violation : result.violations) std::cerr << violation << "\n";
    std::cout << result.rows_checked << " rows checked, " << result.violations.size() << " violations\n";
    return result.ok() ? kExitOk : kExitBoundViolation;
}

nlohmann::json report_to_json(const IncentiveReport& report) {
    nlohmann::json violations = nlohmann::json::array();
    for (const Deviation& dev : report.violations) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : dev.declared_rows) rows.push_back(row);
        nlohmann::json truthful = nlohmann::json::array(), deviating = nlohmann::json::array();
        for (const Rational& u : dev.truthful_utility) truthful.push_back(u.to_string());
        for (const Rational& u : dev.deviating_utility) deviating.push_back(u.to_string());
        violations.push_back({{"coalition", dev.coalition},
                              {"declared_rows", rows},
                              {"truthful_utility", truthful},
                              {"deviating_utility", deviating}});
    }
    return {{"mechanism", report.mechanism_id},
            {"instance", report.instance_id},
            {"deviations_checked", report.deviations_checked},
            {"violations", violations}};
}

void print_report_line(const IncentiveReport& report) {
    std::cout << "  " << report.mechanism_id << " on " << report.instance_id << ": "
              << report.deviations_checked << " deviations checked, " << report.violations.size()
              << " violations" << (report.ok() ? "" : "  <-- VIOLATION") << "\n";
}

int cmd_test_incentives(const std::string& mechanism, const std::string& gamma_text,
                        const std::string& instance_path, const std::string& variant, int count, int n,
                        int m, std::uint64_t seed, int coalition, bool universal,
                        const std::string& out_path) {
    Rational gamma = parse_rational_flag(gamma_text, "gamma");
    std::vector<std::pair<std::string, Instance>> instances;
    if (!instance_path.empty()) {
        Instance inst = load_instance(instance_path);
        if (!inst.truth) raise(Errc::BadInput, "instance file must carry 'truth' for incentive tests");
        instances.emplace_back(instance_path, inst);
    } else {
        GenSpec spec;
        spec.variant = variant_flag(variant);
        spec.n = n;
        spec.m = m;
        for (int k = 0; k < count; ++k) {
            spec.seed = seed + static_cast<std::uint64_t>(k);
            spec.target_eta = Rational(k % 4, 4);
            instances.emplace_back(std::string(variant) + "-s" + std::to_string(spec.seed),
                                   gen_instance(spec, oracle_budget_from_env()));
        }
    }

    nlohmann::json reports = nlohmann::json::array();
    bool all_ok = true;
    for (const auto& [id, inst] : instances) {
        if (universal || is_randomized_mechanism(mechanism)) {
            UniversalGspReport report =
                test_universal_gsp(mixer_components(mechanism, gamma), inst, coalition, id);
            for (const IncentiveReport& component : report.components) {
                print_report_line(component);
                reports.push_back(report_to_json(component));
            }
            all_ok = all_ok && report.ok();
        } else {
            Mechanism mech = make_mechanism(mechanism, Surd(gamma));
            IncentiveReport sp = test_strategyproof(mech, mechanism, inst, id);
            print_report_line(sp);
            reports.push_back(report_to_json(sp));
            all_ok = all_ok && sp.ok();
            if (coalition > 1) {
                IncentiveReport gsp = test_group_strategyproof(mech, mechanism, inst, coalition, id);
                print_report_line(gsp);
                reports.push_back(report_to_json(gsp));
                all_ok = all_ok && gsp.ok();
            }
        }
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) raise(Errc::BadInput, "cannot write '" + out_path + "'");
        out << reports.dump(2) << "\n";
    }
    std::cout << (all_ok ? "no violations found" : "VIOLATIONS FOUND") << "\n";
    return all_ok ? kExitOk : kExitIncentiveViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"assignment mechanisms with predictions, in exact arithmetic"};
    app.require_subcommand(1);

    // solve
    std::string instance_path, mechanism = "boost", gamma = "1", trace_path, selection = "lowest-index";
    std::uint64_t sample_seed = 0;
    bool sample_set = false;
    CLI::App* solve = app.add_subcommand("solve", "run one mechanism on one instance file");
    solve->add_option("--instance", instance_path, "instance JSON file")->required();
    solve->add_option("--mechanism", mechanism,
                      "trust|boost|boost-capacitated|greedy-theta|greedy-vcgap|greedy-asgap|"
                      "boost-or-trust|greedy-or-trust|boost-or-greedy-or-trust");
    solve->add_option("--gamma", gamma, "confidence parameter (rational, >= 1)");
    solve->add_option("--trace", trace_path, "write a JSON-lines execution trace here");
    solve->add_option("--selection", selection, "active-agent rule: lowest-index|largest-offer");
    solve->add_option("--sample", sample_seed, "sample one outcome of a randomized mechanism")
        ->each([&](const std::string&) { sample_set = true; });

    // gen
    std::string variant = "BMP", density = "1", eta, eta_tol = "1/20", out_path;
    std::string value_range, size_range, cap_range;
    int n = 3, m = 3, max_den = 8;
    std::uint64_t seed = 0;
    CLI::App* gen = app.add_subcommand("gen", "generate a random instance");
    gen->add_option("--variant", variant, "GAP variant tag");
    gen->add_option("--n", n, "agents");
    gen->add_option("--m", m, "resources");
    gen->add_option("--density", density, "edge probability (rational in (0,1])");
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--eta", eta, "target prediction error (rational in [0,1])");
    gen->add_option("--eta-tol", eta_tol, "tolerance around the target error");
    gen->add_option("--max-den", max_den, "denominator bound for drawn numbers (1 = integers)");
    gen->add_option("--values", value_range, "value range lo,hi");
    gen->add_option("--sizes", size_range, "size range lo,hi");
    gen->add_option("--capacities", cap_range, "capacity range lo,hi");
    gen->add_option("--out", out_path, "output file (stdout if omitted)");

    // fixture
    std::string fixture_name, f_gamma, f_epsbar, f_delta, f_alpha, f_eps, f_out;
    CLI::App* fixture = app.add_subcommand("fixture", "emit a named lower-bound instance");
    fixture->add_option("--name", fixture_name, "fig1|fig3a|fig3b|fig3c|fig5a|fig5b|fig5c")->required();
    fixture->add_option("--gamma", f_gamma, "gamma for fig3*");
    fixture->add_option("--epsbar", f_epsbar, "epsilon-bar for fig3*/fig5*");
    fixture->add_option("--delta", f_delta, "delta for fig5*");
    fixture->add_option("--alpha", f_alpha, "alpha for fig1");
    fixture->add_option("--eps", f_eps, "epsilon for fig1");
    fixture->add_option("--out", f_out, "output file (stdout if omitted)");

    // sweep
    std::string s_variant = "BMP", s_mechanisms, s_gammas = "1,2", s_etas = "0,1/2",
                s_density = "2/3", s_eta_tol = "1/20", s_out;
    int s_count = 10, s_n = 4, s_m = 4, s_max_den = 8;
    std::uint64_t s_seed = 0;
    unsigned s_jobs = 1;
    CLI::App* sweep = app.add_subcommand("sweep", "run mechanisms over a (gamma, eta) grid and emit CSV");
    sweep->add_option("--variant", s_variant, "GAP variant tag");
    sweep->add_option("--mechanisms", s_mechanisms, "comma-separated mechanism ids")->required();
    sweep->add_option("--gamma", s_gammas, "comma-separated gamma grid");
    sweep->add_option("--eta", s_etas, "comma-separated eta targets");
    sweep->add_option("--count", s_count, "instances per sweep");
    sweep->add_option("--n", s_n, "agents");
    sweep->add_option("--m", s_m, "resources");
    sweep->add_option("--seed", s_seed, "base RNG seed");
    sweep->add_option("--density", s_density, "edge probability");
    sweep->add_option("--eta-tol", s_eta_tol, "tolerance around eta targets");
    sweep->add_option("--max-den", s_max_den, "denominator bound for drawn numbers");
    sweep->add_option("--jobs", s_jobs, "parallel workers");
    sweep->add_option("--out", s_out, "CSV file (stdout if omitted)");

    // verify-bounds
    std::string v_in;
    CLI::App* verify = app.add_subcommand("verify-bounds", "re-check the pass flags of a sweep CSV");
    verify->add_option("--in", v_in, "sweep CSV file")->required();

    // test-incentives
    std::string t_mechanism = "boost", t_gamma = "2", t_instance, t_variant = "BMP", t_out;
    int t_count = 10, t_n = 3, t_m = 3, t_coalition = 1;
    std::uint64_t t_seed = 0;
    bool t_universal = false;
    CLI::App* incentives = app.add_subcommand("test-incentives", "exhaustive deviation tests");
    incentives->add_option("--mechanism", t_mechanism, "mechanism id (mixers test their components)");
    incentives->add_option("--gamma", t_gamma, "confidence parameter");
    incentives->add_option("--instance", t_instance, "instance JSON file (must carry truth)");
    incentives->add_option("--variant", t_variant, "variant for generated instances");
    incentives->add_option("--count", t_count, "number of generated instances");
    incentives->add_option("--n", t_n, "agents");
    incentives->add_option("--m", t_m, "resources");
    incentives->add_option("--seed", t_seed, "base RNG seed");
    incentives->add_option("--coalition", t_coalition, "max coalition size (1 = SP only)");
    incentives->add_flag("--universal", t_universal, "test the mixer's support components");
    incentives->add_option("--out", t_out, "write a JSON report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return cmd_solve(instance_path, mechanism, gamma, trace_path, selection,
                             sample_set ? std::optional<std::uint64_t>(sample_seed) : std::nullopt);
        if (gen->parsed())
            return cmd_gen(variant, n, m, density, seed, eta, eta_tol, max_den, value_range, size_range,
                           cap_range, out_path);
        if (fixture->parsed())
            return cmd_fixture(fixture_name, f_gamma, f_epsbar, f_delta, f_alpha, f_eps, f_out);
        if (sweep->parsed())
            return cmd_sweep(s_variant, s_mechanisms, s_gammas, s_etas, s_count, s_n, s_m, s_seed,
                             s_density, s_eta_tol, s_max_den, s_jobs, s_out);
        if (verify->parsed()) return cmd_verify_bounds(v_in);
        if (incentives->parsed())
            return cmd_test_incentives(t_mechanism, t_gamma, t_instance, t_variant, t_count, t_n, t_m,
                                       t_seed, t_coalition, t_universal, t_out);
    } catch (const GapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
