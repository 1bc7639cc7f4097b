#pragma once

#include <gappred/errors.hpp>
#include <gappred/surd.hpp>

#include <string>

namespace gappred {

/// Error breakpoint of a mechanism's approximation curve: below it the
/// curve interpolates, above it the robustness guarantee takes over.
inline Surd guarantee_breakpoint(const std::string& mechanism, const Rational& gamma) {
    if (gamma < Rational(1)) raise(Errc::GammaBelowOne, "guarantee needs gamma >= 1");
    const Surd one{Rational(1)};
    if (mechanism == "boost" || mechanism == "boost-or-greedy-or-trust")
        return one - Surd(Rational(1) / gamma);
    if (mechanism == "greedy-theta")
        return one - Surd((gamma + Rational(1)) / (gamma * (gamma + Rational(2))));
    if (mechanism == "boost-or-trust")
        return one - Surd::sqrt_of(Rational(2) * (gamma + Rational(1))) / Surd(Rational(2) * gamma);
    if (mechanism == "greedy-or-trust")
        return one - Surd(Rational(2) * (Rational(1) + gamma)) /
                         (Surd(gamma) * (Surd::sqrt_of(Rational(12) * gamma + Rational(13)) + one));
    raise(Errc::UnknownMechanism, "no guarantee curve for '" + mechanism + "'");
}

/// The approximation guarantee g(eta_hat, gamma) for the given mechanism:
/// a low branch (1+gamma)/(gamma (1-eta)) — (3+gamma)/(gamma (1-eta)) for
/// the three-way mixer — up to the breakpoint, and the robustness bound
/// beyond it. Both branches agree exactly at the breakpoint.
inline Surd guarantee(const std::string& mechanism, const Rational& gamma, const Rational& eta_hat) {
    if (gamma < Rational(1)) raise(Errc::GammaBelowOne, "guarantee needs gamma >= 1");
    if (eta_hat.sign() < 0 || eta_hat > Rational(1))
        raise(Errc::BadInput, "eta_hat must lie in [0, 1]");

    Surd breakpoint = guarantee_breakpoint(mechanism, gamma);
    bool low = (Surd(eta_hat) - breakpoint).sign() <= 0;

    if (mechanism == "boost") {
        if (low) return Surd((Rational(1) + gamma) / (gamma * (Rational(1) - eta_hat)));
        return Surd(Rational(1) + gamma);
    }
    if (mechanism == "greedy-theta") {
        if (low) return Surd((Rational(1) + gamma) / (gamma * (Rational(1) - eta_hat)));
        return Surd(Rational(2) + gamma);
    }
    if (mechanism == "boost-or-trust") {
        if (low) return Surd((Rational(1) + gamma) / (gamma * (Rational(1) - eta_hat)));
        return Surd::sqrt_of(Rational(2) * (gamma + Rational(1)));
    }
    if (mechanism == "greedy-or-trust") {
        if (low) return Surd((Rational(1) + gamma) / (gamma * (Rational(1) - eta_hat)));
        return (Surd::sqrt_of(Rational(12) * gamma + Rational(13)) + Surd(Rational(1))) / Surd(Rational(2));
    }
    if (mechanism == "boost-or-greedy-or-trust") {
        if (low) return Surd((Rational(3) + gamma) / (gamma * (Rational(1) - eta_hat)));
        return Surd(Rational(3) + gamma);
    }
    raise(Errc::UnknownMechanism, "no guarantee curve for '" + mechanism + "'");
}

}  // namespace gappred
