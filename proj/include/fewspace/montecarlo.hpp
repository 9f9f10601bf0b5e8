// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fewspace/basis.hpp"
#include "fewspace/detail/parallel.hpp"
#include "fewspace/random.hpp"
#include "fewspace/space.hpp"

namespace fewspace {

/// One term c z^exponent e^{frequency z} of an explicit one-variable function.
struct FunctionTerm {
    int exponent;
    cplx frequency;
    cplx coefficient;
};

/// f(z) = sum_i a_i phi_i(z) over an explicit orthonormal basis, with the
/// terms grouped by frequency for Horner evaluation of f and f'.
class SampledFunction {
public:
    SampledFunction() = default;

    /// Deterministic function from explicit terms (used for fixed test functions).
    static SampledFunction from_terms(const std::vector<FunctionTerm>& terms, bool punctured = false) {
        SampledFunction f;
        f.punctured_ = punctured;
        f.build(terms);
        return f;
    }

    std::pair<cplx, cplx> eval(cplx z) const {
        cplx f(0.0, 0.0), df(0.0, 0.0);
        for (const auto& g : groups_) {
            cplx p(0.0, 0.0), dp(0.0, 0.0);
            for (auto it = g.poly.rbegin(); it != g.poly.rend(); ++it) {
                dp = dp * z + p;
                p = p * z + *it;
            }
            cplx value = p, deriv = dp;
            if (g.min_exponent != 0) {
                const cplx zm = detail::ipow(z, g.min_exponent);
                deriv = static_cast<double>(g.min_exponent) * zm / z * p + zm * dp;
                value = zm * p;
            }
            if (g.frequency != cplx(0.0, 0.0)) {
                const cplx e = std::exp(g.frequency * z);
                deriv = e * (g.frequency * value + deriv);
                value = e * value;
            }
            f += value;
            df += deriv;
        }
        return {f, df};
    }

    cplx operator()(cplx z) const { return eval(z).first; }

    /// Standard complex Gaussian coordinates a_i, in basis-key order.
    const std::vector<cplx>& coefficients() const noexcept { return coefficients_; }

    /// Lowest exponent present; the order of f at 0 for a generic sample.
    int min_exponent() const noexcept { return min_exponent_; }

    /// True when the underlying space lives on C\{0} (Laurent atoms), so a
    /// zero or pole at the origin is not counted.
    bool punctured() const noexcept { return punctured_; }

    /// Same function multiplied by a constant.
    SampledFunction scaled(cplx c) const {
        SampledFunction f = *this;
        for (auto& g : f.groups_)
            for (auto& a : g.poly) a *= c;
        for (auto& a : f.coefficients_) a *= c;
        return f;
    }

private:
    friend SampledFunction sample_function(const SpaceExpr&, CounterStream&, int);

    struct Group {
        cplx frequency;
        int min_exponent;
        std::vector<cplx> poly;
    };

    void build(const std::vector<FunctionTerm>& terms) {
        groups_.clear();
        min_exponent_ = 0;
        bool first = true;
        for (const auto& t : terms) {
            if (first || t.exponent < min_exponent_) min_exponent_ = t.exponent;
            first = false;
            auto it = std::find_if(groups_.begin(), groups_.end(),
                                   [&](const Group& g) { return g.frequency == t.frequency; });
            if (it == groups_.end()) {
                groups_.push_back({t.frequency, t.exponent, {}});
                it = std::prev(groups_.end());
            }
            if (t.exponent < it->min_exponent) {
                it->poly.insert(it->poly.begin(), static_cast<std::size_t>(it->min_exponent - t.exponent),
                                cplx(0.0, 0.0));
                it->min_exponent = t.exponent;
            }
            const auto k = static_cast<std::size_t>(t.exponent - it->min_exponent);
            if (it->poly.size() <= k) it->poly.resize(k + 1, cplx(0.0, 0.0));
            it->poly[k] += t.coefficient;
        }
    }

    std::vector<Group> groups_;
    std::vector<cplx> coefficients_;
    int min_exponent_ = 0;
    bool punctured_ = false;
};

namespace detail {

inline bool has_laurent_atom(const SpaceExpr& space) {
    using namespace atom;
    return space.visit(overloaded{
        [](const SparseLaurent&) { return true; },
        [](const Product& p) { return has_laurent_atom(p.left) || has_laurent_atom(p.right); },
        [](const Power& p) { return has_laurent_atom(p.base); },
        [](const CoordinateTensor& t) {
            return std::any_of(t.factors.begin(), t.factors.end(), [](const auto& f) { return has_laurent_atom(f); });
        },
        [](const auto&) { return false; },
    });
}

} // namespace detail

/// Draws f = sum a_i phi_i with a_i iid standard complex Gaussian
/// (E|a_i|^2 = 1, real and imaginary parts N(0, 1/2)). GAF and GEF atoms
/// are truncated to exponents 0..truncation.
inline SampledFunction sample_function(const SpaceExpr& space, CounterStream& stream, int truncation = 64) {
    if (space.nvars() != 1) throw DimensionError("sample_function: only one-variable spaces can be sampled");
    if (!check_diagonal_condition(space)) throw NotDiagonal("sample_function: space has no diagonal basis");
    if (truncation <= 0) throw DomainError("sample_function: truncation order must be positive");
    const DiagonalBasis basis = diagonal_expansion(space, truncation);

    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    std::vector<FunctionTerm> terms;
    SampledFunction f;
    terms.reserve(basis.weights.size());
    f.coefficients_.reserve(basis.weights.size());
    for (const auto& [key, w] : basis.weights) {
        const double re = normal(stream);
        const double im = normal(stream);
        const cplx a(re, im);
        f.coefficients_.push_back(a);
        terms.push_back({key.exponent[0], key.frequency[0], a * std::sqrt(w)});
    }
    f.punctured_ = detail::has_laurent_atom(space);
    f.build(terms);
    return f;
}

struct ContourOptions {
    int initial_arcs = 64;
    int max_retries = 5;
    /// min|f| below this times max|f| on the contour counts as a zero on it.
    double near_zero_ratio = 1e-12;
    std::int64_t max_evaluations = 1'000'000;
};

/// Winding number of f around 0 along |z| = radius, or nullopt when f
/// (nearly) vanishes on the contour. Each arc is split until its phase
/// change is below pi/2 and the linearized relative change |f'| |dz| / |f|
/// is below 1 at both ends.
template <class F>
std::optional<int> winding_number(const F& f, double radius, const ContourOptions& opts = {}) {
    struct Node {
        double theta;
        cplx value, deriv;
    };
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::int64_t evaluations = 0;
    double min_abs = std::numeric_limits<double>::infinity(), max_abs = 0.0;
    auto at = [&](double theta) {
        const cplx z = std::polar(radius, theta);
        const auto [v, d] = f.eval(z);
        ++evaluations;
        const double a = std::abs(v);
        min_abs = std::min(min_abs, a);
        max_abs = std::max(max_abs, a);
        return Node{theta, v, d * cplx(0.0, 1.0) * z};  // d/dtheta f(r e^{i theta})
    };

    for (int arcs = std::max(1, opts.initial_arcs); arcs <= (1 << 20); arcs *= 2) {
        std::vector<Node> ring;
        ring.reserve(static_cast<std::size_t>(arcs) + 1);
        for (int i = 0; i < arcs; ++i) ring.push_back(at(two_pi * i / arcs));
        ring.push_back(ring.front());
        ring.back().theta = two_pi;

        detail::CompensatedSum total;
        std::vector<std::pair<Node, Node>> stack;
        for (int i = arcs - 1; i >= 0; --i) stack.emplace_back(ring[i], ring[i + 1]);
        while (!stack.empty()) {
            auto [a, b] = stack.back();
            stack.pop_back();
            if (!(min_abs > 0.0) || !std::isfinite(max_abs)) return std::nullopt;
            const double dtheta = b.theta - a.theta;
            const double dphase = std::arg(b.value / a.value);
            const double lin = std::max(std::abs(a.deriv) / std::abs(a.value), std::abs(b.deriv) / std::abs(b.value)) *
                               dtheta;
            if (std::abs(dphase) < 0.5 * std::numbers::pi && lin < 1.0) {
                total.add(dphase);
                continue;
            }
            if (dtheta < 1e-13 || evaluations > opts.max_evaluations) return std::nullopt;
            const Node m = at(a.theta + 0.5 * dtheta);
            stack.emplace_back(m, b);
            stack.emplace_back(a, m);
        }
        if (min_abs < opts.near_zero_ratio * max_abs) return std::nullopt;
        const double w = total.value() / two_pi;
        const double rounded = std::round(w);
        if (std::abs(w - rounded) < 0.25) return static_cast<int>(rounded);
    }
    return std::nullopt;
}

/// Number of zeros of f in |z| < radius (in the punctured disk for Laurent
/// samples), by the argument principle. A zero near the contour triggers a
/// retry at radius (1 +- u), u uniform in [1e-7, 1e-6]; ContourError after
/// `max_retries` retries.
inline int count_zeros_disk(const SampledFunction& f, double radius, const ContourOptions& opts,
                            CounterStream& retry_stream) {
    if (!(radius > 0.0)) throw DomainError("count_zeros_disk: radius must be positive");
    double r = radius;
    for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
        if (const auto w = winding_number(f, r, opts)) {
            const int count = *w - (f.punctured() ? f.min_exponent() : 0);
            return std::max(count, 0);
        }
        const double u = 1e-7 + 9e-7 * retry_stream.uniform();
        r = radius * ((retry_stream() & 1) ? 1.0 + u : 1.0 - u);
    }
    throw ContourError("count_zeros_disk: zero on the contour after " + std::to_string(opts.max_retries) +
                       " retries");
}

inline int count_zeros_disk(const SampledFunction& f, double radius, const ContourOptions& opts = {}) {
    CounterStream stream(0x5eedull);
    return count_zeros_disk(f, radius, opts, stream);
}

struct McOptions {
    int truncation = 64;
    int threads = 1;
    ContourOptions contour{};
    /// Samples used to compare truncation N against 2N.
    std::int64_t pilot_samples = 2000;
    double max_discard_rate = 1e-3;
};

struct MCReport {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;  ///< accepted samples; the histogram sums to this
    std::int64_t discarded = 0;
    std::uint64_t seed = 0;
    std::map<int, std::int64_t> histogram;
    bool truncation_checked = false;
    double truncation_bias = 0.0;
    bool truncation_ok = true;
    std::vector<std::string> diagnostics;
};

/// Monte Carlo estimate of the expected number of zeros in |z| < radius.
/// Sample i uses stream (seed, i), so the result does not depend on threads.
inline MCReport mc_expected_count(const SpaceExpr& space, double radius, std::int64_t samples, std::uint64_t seed,
                                  const McOptions& opts = {}) {
    if (samples <= 1) throw DomainError("mc_expected_count: need at least two samples");
    if (!(radius > 0.0)) throw DomainError("mc_expected_count: radius must be positive");

    auto run = [&](std::int64_t count, int truncation) {
        std::vector<int> counts(static_cast<std::size_t>(count), -1);
        detail::parallel_for(static_cast<std::size_t>(count), opts.threads, [&](std::size_t, std::size_t i) {
            CounterStream stream = CounterStream::for_sample(seed, i);
            CounterStream coeffs = stream.split(0);
            CounterStream retries = stream.split(1);
            const SampledFunction f = sample_function(space, coeffs, truncation);
            try {
                counts[i] = count_zeros_disk(f, radius, opts.contour, retries);
            } catch (const ContourError&) {
                counts[i] = -1;
            }
        });
        return counts;
    };

    // Touch the space once outside the workers so configuration errors
    // surface directly.
    {
        CounterStream probe(seed);
        (void)sample_function(space, probe, opts.truncation);
    }

    const std::vector<int> counts = run(samples, opts.truncation);
    MCReport report;
    report.seed = seed;
    double sum = 0.0, sum_sq = 0.0;
    for (int c : counts) {
        if (c < 0) {
            ++report.discarded;
            continue;
        }
        ++report.samples;
        ++report.histogram[c];
        sum += c;
        sum_sq += static_cast<double>(c) * c;
    }
    if (static_cast<double>(report.discarded) > opts.max_discard_rate * static_cast<double>(samples))
        throw SamplingError("mc_expected_count: " + std::to_string(report.discarded) + " of " +
                            std::to_string(samples) + " samples discarded (zero on contour)");
    const auto n = static_cast<double>(report.samples);
    report.mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * report.mean * report.mean) / (n - 1.0));
    report.std_error = std::sqrt(var / n);
    if (report.discarded > 0)
        report.diagnostics.push_back(std::to_string(report.discarded) + " samples discarded (zero on contour)");

    if (has_infinite_atom(space)) {
        // Coefficient draws follow exponent order, so the N and 2N series
        // share their first N + 1 coefficients sample by sample.
        const std::int64_t pilot = std::min(samples, std::max<std::int64_t>(opts.pilot_samples, 2));
        const std::vector<int> doubled = run(pilot, 2 * opts.truncation);
        double diff = 0.0;
        std::int64_t used = 0;
        for (std::int64_t i = 0; i < pilot; ++i) {
            if (counts[i] < 0 || doubled[i] < 0) continue;
            diff += doubled[i] - counts[i];
            ++used;
        }
        report.truncation_checked = true;
        report.truncation_bias = used > 0 ? std::abs(diff) / used : 0.0;
        report.truncation_ok = report.truncation_bias <= report.std_error / 3.0;
        if (!report.truncation_ok)
            report.diagnostics.push_back("truncation bias " + std::to_string(report.truncation_bias) +
                                         " exceeds stderr/3; raise the truncation order");
    }
    return report;
}

} // namespace fewspace
