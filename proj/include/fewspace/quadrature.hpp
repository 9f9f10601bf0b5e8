// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fewspace/density.hpp"
#include "fewspace/detail/parallel.hpp"
#include "fewspace/domain.hpp"

namespace fewspace {

enum class Method { Quadrature, MonteCarlo, Polytope };

inline const char* to_string(Method m) {
    switch (m) {
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte-carlo";
    case Method::Polytope: return "polytope";
    }
    return "unknown";
}

/// An expected zero count with its estimated absolute error.
struct CountEstimate {
    double value = 0.0;
    double error = 0.0;
    std::int64_t evaluations = 0;
    Method method = Method::Quadrature;
    bool budget_exhausted = false;
    std::vector<std::string> diagnostics;
};

struct QuadOptions {
    double tol = 1e-7;
    std::int64_t budget = 10'000'000;
    int threads = 1;
    /// Gauss-Legendre points per axis; 0 picks by dimension.
    int order = 0;
    /// Cells refined per round. Fixed so results do not depend on `threads`.
    int batch = 16;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussLegendreRule gauss_legendre(int n) {
    if (n <= 0) throw DomainError("gauss_legendre: order must be positive");
    GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

namespace detail {

inline int default_order(int dims) {
    if (dims <= 2) return 12;
    if (dims <= 4) return 8;
    return 4;
}

struct QuadCell {
    std::vector<double> lo, hi;
    double value = 0.0;
    double error = 0.0;
    int split_axis = 0;
};

// Integrand over the parameter box: density(z(p)) * prod Jacobians.
class ChartIntegrand {
public:
    ChartIntegrand(const MixedDensityQuery& query, std::vector<CoordinateChart> charts)
        : eval_(query), charts_(std::move(charts)), z_(charts_.size()) {}

    double operator()(std::span<const double> p) {
        double jac = 1.0;
        for (std::size_t j = 0; j < charts_.size(); ++j) {
            double jj = 0.0;
            if (!charts_[j].map(p[2 * j], p[2 * j + 1], z_[j], jj)) return 0.0;
            jac *= jj;
        }
        if (jac == 0.0) return 0.0;
        const double density = eval_(z_);
        return density == 0.0 ? 0.0 : density * jac;
    }

private:
    DensityEvaluator eval_;
    std::vector<CoordinateChart> charts_;
    ComplexPoint z_;
};

// Tensor-product rule on a box with per-axis rules.
template <class F>
double tensor_rule(F& f, const QuadCell& cell, std::span<const GaussLegendreRule* const> rules,
                   std::vector<double>& point, std::int64_t& evaluations) {
    const std::size_t dims = cell.lo.size();
    std::vector<int> idx(dims, 0);
    std::vector<double> half(dims), mid(dims);
    double scale = 1.0;
    for (std::size_t k = 0; k < dims; ++k) {
        half[k] = 0.5 * (cell.hi[k] - cell.lo[k]);
        mid[k] = 0.5 * (cell.hi[k] + cell.lo[k]);
        scale *= half[k];
    }
    CompensatedSum sum;
    while (true) {
        double w = 1.0;
        for (std::size_t k = 0; k < dims; ++k) {
            point[k] = mid[k] + half[k] * rules[k]->nodes[idx[k]];
            w *= rules[k]->weights[idx[k]];
        }
        sum.add(w * f(std::span<const double>(point)));
        ++evaluations;
        std::size_t k = 0;
        for (; k < dims; ++k) {
            if (++idx[k] < static_cast<int>(rules[k]->nodes.size())) break;
            idx[k] = 0;
        }
        if (k == dims) break;
    }
    return scale * sum.value();
}

// Fills value, error and split axis. The error is the sum over axes of the
// change when that axis alone drops to the lower-order rule.
template <class F>
void evaluate_cell(F& f, QuadCell& cell, const GaussLegendreRule& high, const GaussLegendreRule& low,
                   std::int64_t& evaluations) {
    const std::size_t dims = cell.lo.size();
    std::vector<double> point(dims);
    std::vector<const GaussLegendreRule*> rules(dims, &high);
    cell.value = tensor_rule(f, cell, rules, point, evaluations);
    cell.error = 0.0;
    double worst = -1.0;
    for (std::size_t k = 0; k < dims; ++k) {
        rules[k] = &low;
        const double e = std::abs(cell.value - tensor_rule(f, cell, rules, point, evaluations));
        rules[k] = &high;
        cell.error += e;
        if (e > worst) {
            worst = e;
            cell.split_axis = static_cast<int>(k);
        }
    }
}

} // namespace detail

/// Expected number of zeros of the query's system in the domain:
/// adaptive tensor Gauss-Legendre integration of density_at.
inline CountEstimate integrate_density(const MixedDensityQuery& query, const Domain& dom,
                                       const QuadOptions& opts = {}) {
    const std::vector<CoordinateChart> charts = domain_charts(dom);
    if (static_cast<int>(charts.size()) != query.nvars())
        throw DimensionError("integrate_density: domain has " + std::to_string(charts.size()) +
                             " complex coordinates, query has " + std::to_string(query.nvars()));
    if (!(opts.tol >= 1e-12)) throw DomainError("integrate_density: tol must be at least 1e-12");

    const int dims = 2 * query.nvars();
    const int order = opts.order > 0 ? opts.order : detail::default_order(dims);
    const GaussLegendreRule high = gauss_legendre(order);
    const GaussLegendreRule low = gauss_legendre(std::max(1, order / 2));
    const int threads = detail::resolve_threads(opts.threads);

    std::vector<detail::ChartIntegrand> integrands;
    for (int t = 0; t < threads; ++t) integrands.emplace_back(query, charts);

    // Initial grid: angular axes start in four pieces.
    std::vector<detail::QuadCell> cells;
    {
        std::vector<int> pieces(dims, 1);
        for (std::size_t j = 0; j < charts.size(); ++j)
            if (charts[j].angular()) pieces[2 * j + 1] = 4;
        std::vector<int> idx(dims, 0);
        while (true) {
            detail::QuadCell c;
            c.lo.resize(dims);
            c.hi.resize(dims);
            for (int k = 0; k < dims; ++k) {
                const auto& ch = charts[k / 2];
                const double lo = (k % 2 == 0) ? ch.a_lo : ch.b_lo;
                const double hi = (k % 2 == 0) ? ch.a_hi : ch.b_hi;
                const double w = (hi - lo) / pieces[k];
                c.lo[k] = lo + w * idx[k];
                c.hi[k] = (idx[k] + 1 == pieces[k]) ? hi : lo + w * (idx[k] + 1);
            }
            cells.push_back(std::move(c));
            int k = 0;
            for (; k < dims; ++k) {
                if (++idx[k] < pieces[k]) break;
                idx[k] = 0;
            }
            if (k == dims) break;
        }
    }

    std::vector<std::int64_t> worker_evals(static_cast<std::size_t>(threads), 0);
    auto evaluate_range = [&](std::size_t first, std::size_t count) {
        detail::parallel_for(count, threads, [&](std::size_t w, std::size_t i) {
            detail::evaluate_cell(integrands[w], cells[first + i], high, low, worker_evals[w]);
        });
    };
    evaluate_range(0, cells.size());

    auto total_evals = [&] {
        std::int64_t s = 0;
        for (auto e : worker_evals) s += e;
        return s;
    };

    std::vector<bool> alive(cells.size(), true);
    using Entry = std::pair<double, std::size_t>;
    auto cmp = [](const Entry& a, const Entry& b) {
        return a.first < b.first || (a.first == b.first && a.second > b.second);
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
    for (std::size_t i = 0; i < cells.size(); ++i) heap.push({cells[i].error, i});

    auto sum_alive = [&](bool errors) {
        detail::CompensatedSum s;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (alive[i]) s.add(errors ? cells[i].error : cells[i].value);
        return s.value();
    };

    const std::int64_t per_cell = [&] {
        std::int64_t hi = 1, lo = 1;
        for (int k = 0; k < dims; ++k) hi *= order;
        lo = hi / order * low.nodes.size();
        return hi + dims * lo;
    }();

    bool exhausted = false;
    double running_error = sum_alive(true);
    int rounds = 0;
    while (true) {
        if (running_error <= opts.tol || ++rounds % 64 == 0) {
            running_error = sum_alive(true);
            if (running_error <= opts.tol) break;
        }
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(opts.batch), heap.size());
        if (take == 0) break;
        if (total_evals() + static_cast<std::int64_t>(2 * take) * per_cell > opts.budget) {
            exhausted = true;
            break;
        }
        const std::size_t first = cells.size();
        for (std::size_t b = 0; b < take; ++b) {
            const std::size_t id = heap.top().second;
            heap.pop();
            alive[id] = false;
            running_error -= cells[id].error;
            const detail::QuadCell parent = cells[id];
            const int axis = parent.split_axis;
            const double mid = 0.5 * (parent.lo[axis] + parent.hi[axis]);
            detail::QuadCell left{parent.lo, parent.hi}, right{parent.lo, parent.hi};
            left.hi[axis] = mid;
            right.lo[axis] = mid;
            cells.push_back(std::move(left));
            cells.push_back(std::move(right));
        }
        evaluate_range(first, cells.size() - first);
        for (std::size_t i = first; i < cells.size(); ++i) {
            alive.push_back(true);
            heap.push({cells[i].error, i});
            running_error += cells[i].error;
        }
    }

    CountEstimate est;
    est.method = Method::Quadrature;
    est.value = sum_alive(false);
    est.error = sum_alive(true);
    est.evaluations = total_evals();
    est.budget_exhausted = exhausted;
    if (exhausted) {
        est.diagnostics.push_back("evaluation budget exhausted before reaching tol");
        if (is_compactified(dom))
            est.diagnostics.push_back("compactified tail not resolved; convergence of the improper integral unverified");
    }
    return est;
}

/// Unmixed count for G = F_1^l_1 ... F_n^l_n, all n equations drawn from G.
inline CountEstimate unmixed_power_count(const std::vector<SpaceExpr>& bases, const std::vector<int>& exponents,
                                         const Domain& dom, const QuadOptions& opts = {}) {
    if (bases.empty() || bases.size() != exponents.size())
        throw DimensionError("unmixed_power_count: need one exponent per base");
    SpaceExpr g = power(bases.front(), exponents.front());
    for (std::size_t i = 1; i < bases.size(); ++i) g = product(g, power(bases[i], exponents[i]));
    return integrate_density(MixedDensityQuery::unmixed(g), dom, opts);
}

} // namespace fewspace
