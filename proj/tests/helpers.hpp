#pragma once

#include <gappred/instance.hpp>
#include <gappred/oracle.hpp>

#include <optional>
#include <vector>

namespace gappred::testing {

/// Three agents with v = s = (3, 2, 2), one resource of capacity 4, every
/// edge declared, prediction {(1,a),(2,a)}. The optimum packs agents 1 and
/// 2 for value 4.
inline Instance ermk_small() {
    Instance inst;
    inst.n = 3;
    inst.m = 1;
    inst.values = {{Rational(3)}, {Rational(2)}, {Rational(2)}};
    inst.sizes = {{Rational(3)}, {Rational(2)}, {Rational(2)}};
    inst.capacities = {Rational(4)};
    inst.declared = {Edge{0, 0}, Edge{1, 0}, Edge{2, 0}};
    inst.truth = inst.declared;
    inst.prediction = Assignment({Edge{1, 0}, Edge{2, 0}});
    inst.variant = Variant::ERMK;
    return validate(std::move(inst));
}

/// Small BMP builder: values row-major, every pair declared unless a
/// declared list is given; prediction empty unless given.
inline Instance bmp(int n, int m, std::vector<std::vector<Rational>> values,
                    std::optional<std::vector<Edge>> declared = std::nullopt,
                    std::vector<Edge> prediction = {}) {
    Instance inst;
    inst.n = n;
    inst.m = m;
    inst.values = std::move(values);
    inst.sizes.assign(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(m), Rational(1)));
    inst.capacities.assign(static_cast<std::size_t>(m), Rational(1));
    if (declared) {
        inst.declared = *declared;
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) inst.declared.push_back(Edge{i, j});
    }
    inst.truth = inst.declared;
    inst.prediction = Assignment(std::move(prediction));
    inst.variant = Variant::BMP;
    return validate(std::move(inst));
}

/// Independent oracle for cross-checks: enumerate every subset of D,
/// keep the feasible ones, and return the lexicographically smallest
/// maximum-value assignment. Only usable for small |D|.
inline OracleResult enumerate_and_check(const Instance& inst) {
    const auto& d = inst.declared;
    const std::size_t k = d.size();
    if (k > 20) throw std::logic_error("enumerate_and_check: |D| too large");
    Rational best_value(0);
    std::vector<Edge> best;
    std::uint64_t feasible_count = 0;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        std::vector<Edge> subset;
        for (std::size_t t = 0; t < k; ++t)
            if (mask & (1u << t)) subset.push_back(d[t]);
        if (!is_feasible(inst, std::span<const Edge>(subset))) continue;
        ++feasible_count;
        Rational value(0);
        for (const Edge& e : subset) value += inst.values[e.agent][e.resource];
        if (value > best_value) {
            best_value = value;
            best = subset;
        } else if (value == best_value && !best.empty()) {
            std::vector<Edge> sorted = subset;
            std::sort(sorted.begin(), sorted.end());
            if (sorted < best) best = sorted;
        }
    }
    std::sort(best.begin(), best.end());
    return OracleResult{Assignment(std::move(best)), best_value, feasible_count};
}

}  // namespace gappred::testing
