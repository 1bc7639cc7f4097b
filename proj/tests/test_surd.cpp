#include <gappred/surd.hpp>

#include <catch2/catch_amalgamated.hpp>

using gappred::BigInt;
using gappred::Rational;
using gappred::Surd;

TEST_CASE("perfect squares collapse to rationals", "[surd]") {
    CHECK(Surd::sqrt_of(Rational(16)).is_rational());
    CHECK(Surd::sqrt_of(Rational(16)).as_rational() == Rational(4));
    CHECK(Surd::sqrt_of(Rational(9, 4)).as_rational() == Rational(3, 2));
    CHECK(Surd::sqrt_of(Rational(0)).as_rational() == Rational(0));
    CHECK_THROWS_AS(Surd::sqrt_of(Rational(-1)), std::domain_error);
}

TEST_CASE("square factors are extracted from the radicand", "[surd]") {
    Surd s = Surd::sqrt_of(Rational(76));  // sqrt(76) = 2 sqrt(19)
    CHECK_FALSE(s.is_rational());
    CHECK(s.radicand() == 19);
    CHECK(s.surd_coeff() == Rational(2));
    CHECK(s * s == Surd(Rational(76)));
}

TEST_CASE("mixer parameters at nice gammas are exact rationals", "[surd]") {
    // delta(gamma) = sqrt(2 (gamma + 1)) - 1
    Surd delta1 = Surd::sqrt_of(Rational(2) * (Rational(1) + Rational(1))) - Surd(Rational(1));
    CHECK(delta1.as_rational() == Rational(1));
    Surd delta7 = Surd::sqrt_of(Rational(2) * (Rational(7) + Rational(1))) - Surd(Rational(1));
    CHECK(delta7.as_rational() == Rational(3));
    Surd p7 = Surd(Rational(2)) / (delta7 + Surd(Rational(1)));
    CHECK(p7.as_rational() == Rational(1, 2));

    // delta(gamma) = (sqrt(12 gamma + 13) - 3) / 2 at gamma = 1: sqrt(25) = 5
    Surd d = (Surd::sqrt_of(Rational(12) + Rational(13)) - Surd(Rational(3))) / Surd(Rational(2));
    CHECK(d.as_rational() == Rational(1));
}

TEST_CASE("irrational mixer probabilities still sum to one", "[surd]") {
    for (Rational gamma : {Rational(3, 2), Rational(2), Rational(3), Rational(31, 3), Rational(21, 4)}) {
        Surd delta = Surd::sqrt_of(Rational(2) * (gamma + Rational(1))) - Surd(Rational(1));
        Surd p = Surd(Rational(2)) / (delta + Surd(Rational(1)));
        CHECK(p.sign() > 0);
        CHECK((Surd(Rational(1)) - p).sign() >= 0);
        CHECK(p + (Surd(Rational(1)) - p) == Surd(Rational(1)));

        Surd delta5 = (Surd::sqrt_of(Rational(12) * gamma + Rational(13)) - Surd(Rational(3))) / Surd(Rational(2));
        Surd p5 = Surd(Rational(3)) / (Surd(Rational(2)) + delta5);
        CHECK(p5.sign() > 0);
        CHECK((Surd(Rational(1)) - p5).sign() >= 0);
        CHECK(p5 + (Surd(Rational(1)) - p5) == Surd(Rational(1)));
    }
}

TEST_CASE("exact sign analysis", "[surd]") {
    Surd sqrt2 = Surd::sqrt_of(Rational(2));
    CHECK((sqrt2 - Surd(Rational(1))).sign() == 1);
    CHECK((Surd(Rational(1)) - sqrt2).sign() == -1);
    CHECK((Surd(Rational(3)) - Surd(Rational(2)) * sqrt2).sign() == 1);   // 9 > 8
    CHECK((Surd(Rational(2)) * sqrt2 - Surd(Rational(3))).sign() == -1);
    CHECK((sqrt2 - sqrt2).sign() == 0);
    CHECK((Surd(Rational(7, 5)) - sqrt2).sign() == -1);                   // 49/25 < 2
    CHECK((Surd(Rational(141422, 100000)) - sqrt2).sign() == 1);
}

TEST_CASE("field arithmetic over a common radicand", "[surd]") {
    Surd sqrt2 = Surd::sqrt_of(Rational(2));
    Surd a = Surd(Rational(1)) + sqrt2;
    Surd b = Surd(Rational(1)) - sqrt2;
    CHECK(a * b == Surd(Rational(-1)));
    CHECK(Surd(Rational(1)) / a == sqrt2 - Surd(Rational(1)));
    CHECK(a / a == Surd(Rational(1)));
    CHECK(a - a == Surd(Rational(0)));
    CHECK_THROWS_AS(sqrt2 + Surd::sqrt_of(Rational(3)), std::logic_error);
    CHECK_THROWS_AS(a / Surd(Rational(0)), std::domain_error);
}

TEST_CASE("certified enclosures", "[surd]") {
    Surd sqrt2 = Surd::sqrt_of(Rational(2));
    Rational width(1, 1000000000000LL);
    auto [lo, hi] = sqrt2.enclosure(width);
    CHECK(hi - lo <= width);
    CHECK(lo.sign() > 0);
    CHECK(lo * lo <= Rational(2));
    CHECK(hi * hi >= Rational(2));

    Surd neg = Surd(Rational(1)) - Surd(Rational(3)) * sqrt2;  // about -3.24
    auto [nlo, nhi] = neg.enclosure(width);
    CHECK(nhi - nlo <= width);
    CHECK(nlo <= nhi);
    CHECK(nhi.sign() < 0);

    auto [rlo, rhi] = Surd(Rational(5, 3)).enclosure(width);
    CHECK(rlo == Rational(5, 3));
    CHECK(rhi == Rational(5, 3));
}

TEST_CASE("rendering", "[surd]") {
    CHECK(Surd(Rational(3, 2)).to_string() == "3/2");
    CHECK(Surd::sqrt_of(Rational(2)).to_string() == "sqrt(2)");
    CHECK((Surd(Rational(1)) - Surd::sqrt_of(Rational(2))).to_string() == "1 - sqrt(2)");
    CHECK(Surd::sqrt_of(Rational(76)).to_string() == "2*sqrt(19)");
}
