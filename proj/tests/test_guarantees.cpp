#include <gappred/guarantees.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace gappred;

namespace {

const std::vector<std::string>& curve_ids() {
    static const std::vector<std::string> ids = {"boost", "greedy-theta", "boost-or-trust",
                                                 "greedy-or-trust", "boost-or-greedy-or-trust"};
    return ids;
}

}  // namespace

TEST_CASE("consistency endpoints", "[guarantees]") {
    for (Rational gamma : {Rational(1), Rational(2), Rational(5)}) {
        // eta = 0 collapses the low branch to (1 + 1/gamma), or (1 + 3/gamma)
        // for the three-way mixer.
        CHECK(guarantee("boost", gamma, Rational(0)) ==
              Surd(Rational(1) + Rational(1) / gamma));
        CHECK(guarantee("greedy-theta", gamma, Rational(0)) ==
              Surd(Rational(1) + Rational(1) / gamma));
        CHECK(guarantee("boost-or-greedy-or-trust", gamma, Rational(0)) ==
              Surd(Rational(1) + Rational(3) / gamma));
    }
}

TEST_CASE("robustness endpoints", "[guarantees]") {
    CHECK(guarantee("boost", Rational(2), Rational(1)) == Surd(Rational(3)));
    CHECK(guarantee("greedy-theta", Rational(1), Rational(1)) == Surd(Rational(3)));
    CHECK(guarantee("boost-or-trust", Rational(7), Rational(1)) == Surd(Rational(4)));  // sqrt(16)
    CHECK(guarantee("greedy-or-trust", Rational(1), Rational(1)) == Surd(Rational(3)));  // (5+1)/2
    CHECK(guarantee("boost-or-greedy-or-trust", Rational(2), Rational(1)) == Surd(Rational(5)));
    CHECK(guarantee("boost-or-trust", Rational(2), Rational(1)) == Surd::sqrt_of(Rational(6)));
}

TEST_CASE("both branches agree exactly at the breakpoint", "[guarantees]") {
    auto robustness = [](const std::string& id, const Rational& gamma) -> Surd {
        if (id == "boost") return Surd(Rational(1) + gamma);
        if (id == "greedy-theta") return Surd(Rational(2) + gamma);
        if (id == "boost-or-trust") return Surd::sqrt_of(Rational(2) * (gamma + Rational(1)));
        if (id == "greedy-or-trust")
            return (Surd::sqrt_of(Rational(12) * gamma + Rational(13)) + Surd(Rational(1))) /
                   Surd(Rational(2));
        return Surd(Rational(3) + gamma);
    };
    for (const std::string& id : curve_ids()) {
        for (Rational gamma : {Rational(1), Rational(3, 2), Rational(2), Rational(4), Rational(10)}) {
            Surd breakpoint = guarantee_breakpoint(id, gamma);
            CHECK(breakpoint.sign() >= 0);
            CHECK((Surd(Rational(1)) - breakpoint).sign() > 0);
            if (!breakpoint.is_rational()) continue;  // handled symbolically below
            // At the breakpoint the interpolating branch equals the
            // robustness constant, so guarantee() is continuous there.
            CHECK(guarantee(id, gamma, breakpoint.as_rational()) == robustness(id, gamma));
        }
    }
}

TEST_CASE("interpolating branch meets the robustness branch at irrational breakpoints", "[guarantees]") {
    // (1+gamma) / (gamma (1 - b)) with b = 1 - sqrt(2(gamma+1))/(2 gamma)
    // must equal sqrt(2(gamma+1)) exactly, and similarly for the ERMK mix.
    for (Rational gamma : {Rational(1), Rational(3, 2), Rational(2), Rational(4), Rational(10)}) {
        Surd bot_break = guarantee_breakpoint("boost-or-trust", gamma);
        Surd low = Surd(Rational(1) + gamma) / (Surd(gamma) * (Surd(Rational(1)) - bot_break));
        CHECK(low == Surd::sqrt_of(Rational(2) * (gamma + Rational(1))));

        Surd got_break = guarantee_breakpoint("greedy-or-trust", gamma);
        Surd low2 = Surd(Rational(1) + gamma) / (Surd(gamma) * (Surd(Rational(1)) - got_break));
        CHECK(low2 == (Surd::sqrt_of(Rational(12) * gamma + Rational(13)) + Surd(Rational(1))) /
                          Surd(Rational(2)));
    }
}

TEST_CASE("curves are monotone", "[guarantees]") {
    // g is nondecreasing in eta for fixed gamma, and nonincreasing in gamma
    // at eta = 0.
    std::vector<Rational> etas, gammas;
    for (int k = 0; k < 50; ++k) etas.emplace_back(k, 49);
    for (int k = 0; k < 50; ++k) gammas.push_back(Rational(1) + Rational(9 * k, 49));

    for (const std::string& id : curve_ids()) {
        for (const Rational& gamma : gammas) {
            Surd prev = guarantee(id, gamma, etas.front());
            for (std::size_t k = 1; k < etas.size(); ++k) {
                Surd cur = guarantee(id, gamma, etas[k]);
                CHECK((cur - prev).sign() >= 0);
                prev = cur;
            }
        }
        Surd prev = guarantee(id, gammas.front(), Rational(0));
        for (std::size_t k = 1; k < gammas.size(); ++k) {
            Surd cur = guarantee(id, gammas[k], Rational(0));
            CHECK((cur - prev).sign() <= 0);
            prev = cur;
        }
    }
}

TEST_CASE("bounds are always at least one", "[guarantees]") {
    for (const std::string& id : curve_ids())
        for (Rational gamma : {Rational(1), Rational(2), Rational(10)})
            for (Rational eta : {Rational(0), Rational(1, 3), Rational(1)})
                CHECK((guarantee(id, gamma, eta) - Surd(Rational(1))).sign() >= 0);
}

TEST_CASE("unknown mechanisms and bad parameters are rejected", "[guarantees]") {
    CHECK_THROWS_AS(guarantee("trust", Rational(2), Rational(0)), GapError);
    CHECK_THROWS_AS(guarantee("boost", Rational(1, 2), Rational(0)), GapError);
    CHECK_THROWS_AS(guarantee("boost", Rational(2), Rational(2)), GapError);
}
