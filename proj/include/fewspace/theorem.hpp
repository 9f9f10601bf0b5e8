// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "fewspace/density.hpp"
#include "fewspace/quadrature.hpp"

namespace fewspace {

struct MixedCheck {
    CountEstimate mixed;     ///< direct integral of the mixed density
    CountEstimate extracted; ///< lambda_1..lambda_n coefficient of unmixed counts / n!
    double discrepancy() const { return std::abs(mixed.value - extracted.value); }
    double combined_error() const { return mixed.error + extracted.error; }
};

/// Computes a mixed expected count two ways: by integrating the mixed
/// density directly, and from unmixed counts of the products
/// prod_{i in S} F_i over all subsets S, combined by multilinear extraction.
inline MixedCheck theorem_main_check(const std::vector<SpaceExpr>& spaces, const Domain& dom,
                                     const QuadOptions& opts = {}) {
    const MixedDensityQuery query(spaces);
    const int n = query.nvars();
    if (n > 6) throw DimensionError("theorem_main_check: at most 6 equations are supported");

    MixedCheck out;
    out.mixed = integrate_density(query, dom, opts);

    // p(chi_S) = E(unmixed count over prod_{i in S} F_i) / n!; p(0) = 0.
    const double nfact = detail::factorial(n);
    std::map<std::uint32_t, double> values{{0u, 0.0}};
    double error = 0.0;
    std::int64_t evaluations = 0;
    bool exhausted = false;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::optional<SpaceExpr> g;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            g = g ? product(*g, spaces[i]) : spaces[i];
        }
        const CountEstimate e = integrate_density(MixedDensityQuery::unmixed(*g), dom, opts);
        values[mask] = e.value / nfact;
        error += e.error / nfact;
        evaluations += e.evaluations;
        exhausted = exhausted || e.budget_exhausted;
    }
    out.extracted.method = Method::Quadrature;
    out.extracted.value = multilinear_coefficient(values, n);
    out.extracted.error = error;
    out.extracted.evaluations = evaluations;
    out.extracted.budget_exhausted = exhausted;
    if (exhausted) out.extracted.diagnostics.push_back("an unmixed subset integral exhausted its budget");
    return out;
}

} // namespace fewspace
