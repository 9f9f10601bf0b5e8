// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <bit>
#include <optional>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fewspace/quadrature.hpp"
#include "fewspace/space.hpp"

namespace fewspace {

using LatticePoint = std::vector<long long>;

/// Finite set of integer points in Z^n.
class LatticeSupport {
public:
    LatticeSupport(int dim, std::vector<LatticePoint> points) : dim_(dim) {
        if (dim_ <= 0) throw DimensionError("LatticeSupport: dimension must be positive");
        if (points.empty()) throw DomainError("LatticeSupport: support must be nonempty");
        for (const auto& p : points)
            if (static_cast<int>(p.size()) != dim_) throw DimensionError("LatticeSupport: point of wrong dimension");
        std::set<LatticePoint> unique(points.begin(), points.end());
        points_.assign(unique.begin(), unique.end());
    }

    static LatticeSupport from_weights(const SupportWeights& w) {
        std::vector<LatticePoint> pts;
        for (const auto& [a, c] : w.entries()) pts.emplace_back(a.begin(), a.end());
        return LatticeSupport(w.nvars(), std::move(pts));
    }

    int dim() const noexcept { return dim_; }
    const std::vector<LatticePoint>& points() const noexcept { return points_; }

    LatticeSupport translated(const LatticePoint& v) const {
        std::vector<LatticePoint> pts = points_;
        for (auto& p : pts)
            for (int j = 0; j < dim_; ++j) p[j] += v[j];
        return LatticeSupport(dim_, std::move(pts));
    }

private:
    int dim_;
    std::vector<LatticePoint> points_;
};

/// Exact volume numerator / denominator of a lattice polytope.
struct LatticeVolume {
    long long numerator = 0;
    long long denominator = 1;
    double value() const noexcept { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

namespace detail {

inline long long cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline void require_supported_dim(int dim, const char* who) {
    if (dim != 1 && dim != 2)
        throw DimensionError(std::string(who) + ": only dimensions 1 and 2 are supported, got " + std::to_string(dim));
}

} // namespace detail

/// Vertices of the convex hull, counter-clockwise (monotone chain). In one
/// dimension, the two endpoints.
inline std::vector<LatticePoint> convex_hull(const LatticeSupport& s) {
    detail::require_supported_dim(s.dim(), "convex_hull");
    const auto& pts = s.points();  // sorted lexicographically, unique
    if (s.dim() == 1 || pts.size() <= 2) {
        if (pts.size() == 1) return pts;
        return {pts.front(), pts.back()};
    }
    std::vector<LatticePoint> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && detail::cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && detail::cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

/// Exact volume of the convex hull: length in Z^1, shoelace area in Z^2.
inline LatticeVolume hull_volume_exact(const LatticeSupport& s) {
    detail::require_supported_dim(s.dim(), "hull_volume");
    if (s.dim() == 1) return {s.points().back()[0] - s.points().front()[0], 1};
    const auto hull = convex_hull(s);
    long long twice = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& p = hull[i];
        const auto& q = hull[(i + 1) % hull.size()];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    return {twice < 0 ? -twice : twice, 2};
}

inline double hull_volume(const LatticeSupport& s) { return hull_volume_exact(s).value(); }

/// Hull vertices of the Minkowski sum.
inline LatticeSupport minkowski_sum(const LatticeSupport& a, const LatticeSupport& b) {
    if (a.dim() != b.dim()) throw DimensionError("minkowski_sum: supports of different dimension");
    const auto ha = convex_hull(a);
    const auto hb = convex_hull(b);
    std::vector<LatticePoint> pts;
    pts.reserve(ha.size() * hb.size());
    for (const auto& p : ha) {
        for (const auto& q : hb) {
            LatticePoint s = p;
            for (int j = 0; j < a.dim(); ++j) s[j] += q[j];
            pts.push_back(std::move(s));
        }
    }
    return LatticeSupport(a.dim(), std::move(pts));
}

/// n! times the mixed volume: sum over S of (-1)^{n-|S|} Vol(sum_{i in S} A_i),
/// the generic number of roots in the torus of a system with these supports.
inline double bernstein_count(const std::vector<LatticeSupport>& supports) {
    if (supports.empty()) throw DimensionError("bernstein_count: no supports");
    const int n = static_cast<int>(supports.size());
    detail::require_supported_dim(n, "bernstein_count");
    for (const auto& s : supports)
        if (s.dim() != n) throw DimensionError("bernstein_count: need n supports in Z^n");

    // Common denominator n! keeps the sum exact.
    const long long denom = (n == 1) ? 1 : 2;
    long long total = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::optional<LatticeSupport> sum;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            sum = sum ? minkowski_sum(*sum, supports[i]) : supports[i];
        }
        const LatticeVolume v = hull_volume_exact(*sum);
        const long long scaled = v.numerator * (denom / v.denominator);
        total += ((n - std::popcount(mask)) & 1) ? -scaled : scaled;
    }
    return static_cast<double>(total) / static_cast<double>(denom);
}

struct KushnirenkoCheck {
    double combinatorial;  ///< n! Vol(conv A)
    CountEstimate integral; ///< density integral over the compactified torus
};

/// Compares n! Vol(conv A) with the expected number of zeros in (C\{0})^n
/// of n equations from the sparse space with the given weights.
inline KushnirenkoCheck kushnirenko_check(const LatticeSupport& support, const SupportWeights& weights,
                                          const QuadOptions& opts = {}) {
    detail::require_supported_dim(support.dim(), "kushnirenko_check");
    if (weights.nvars() != support.dim()) throw DimensionError("kushnirenko_check: weights and support differ in nvars");
    if (LatticeSupport::from_weights(weights).points() != support.points())
        throw DomainError("kushnirenko_check: weights must be given exactly on the support");

    const double nfact = support.dim() == 1 ? 1.0 : 2.0;
    KushnirenkoCheck out{nfact * hull_volume(support), {}};
    out.integral = integrate_density(MixedDensityQuery::unmixed(sparse_laurent(weights)),
                                     domain::TorusCompactified{support.dim()}, opts);
    return out;
}

} // namespace fewspace
