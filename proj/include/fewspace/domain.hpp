// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "fewspace/error.hpp"
#include "fewspace/space.hpp"

namespace fewspace {

namespace domain {

struct Disk {
    cplx center{0.0, 0.0};
    double radius = 1.0;
};

struct Polydisk {
    std::vector<Disk> factors;
};

struct Annulus {
    cplx center{0.0, 0.0};
    double inner = 0.0;
    double outer = 1.0;
};

/// Per-coordinate box [re_lo, re_hi] x [im_lo, im_hi].
struct RectangleFactor {
    double re_lo, re_hi, im_lo, im_hi;
};

struct Rectangle {
    std::vector<RectangleFactor> factors;
};

/// All of C^n, integrated through r = t / (1 - t), t in [0, 1).
struct PlaneCompactified {
    int nvars = 1;
};

/// All of (C\{0})^n, integrated through log r = tan(u), u in (-pi/2, pi/2).
struct TorusCompactified {
    int nvars = 1;
};

} // namespace domain

using Domain = std::variant<domain::Disk, domain::Polydisk, domain::Annulus, domain::Rectangle,
                            domain::PlaneCompactified, domain::TorusCompactified>;

/// Parameterization of one complex coordinate by two real parameters
/// (a, b) on a box, with the Lebesgue Jacobian of the map.
struct CoordinateChart {
    enum class Kind { Polar, Cartesian, PlaneRadial, TorusLogRadial };

    Kind kind;
    cplx center{0.0, 0.0};
    double a_lo, a_hi, b_lo, b_hi;

    // Beyond |log r| = 100 the integrand is taken as zero, so that products
    // of up to three Jacobians stay finite.
    static constexpr double kMaxLogRadius = 100.0;

    /// Returns false when the point lies outside the representable range.
    bool map(double a, double b, cplx& z, double& jacobian) const {
        switch (kind) {
        case Kind::Polar:
            z = center + std::polar(a, b);
            jacobian = a;
            return true;
        case Kind::Cartesian:
            z = cplx(a, b);
            jacobian = 1.0;
            return true;
        case Kind::PlaneRadial: {
            const double r = a / (1.0 - a);
            z = std::polar(r, b);
            jacobian = r / ((1.0 - a) * (1.0 - a));
            return std::isfinite(jacobian);
        }
        case Kind::TorusLogRadial: {
            const double s = std::tan(a);
            if (std::abs(s) > kMaxLogRadius) return false;
            z = std::polar(std::exp(s), b);
            jacobian = std::exp(2.0 * s) * (1.0 + s * s);
            return true;
        }
        }
        return false;
    }

    bool angular() const noexcept { return kind != Kind::Cartesian; }
};

namespace detail {

inline void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

inline CoordinateChart disk_chart(const domain::Disk& d) {
    require_positive(d.radius, "Disk radius");
    return {CoordinateChart::Kind::Polar, d.center, 0.0, d.radius, 0.0, 2.0 * std::numbers::pi};
}

} // namespace detail

/// Validates the domain and returns one chart per complex coordinate.
inline std::vector<CoordinateChart> domain_charts(const Domain& dom) {
    using namespace domain;
    using Kind = CoordinateChart::Kind;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr double half_pi = 0.5 * std::numbers::pi;
    return std::visit(
        detail::overloaded{
            [](const Disk& d) { return std::vector{detail::disk_chart(d)}; },
            [](const Polydisk& p) {
                if (p.factors.empty()) throw DomainError("Polydisk: no factors");
                std::vector<CoordinateChart> charts;
                for (const auto& d : p.factors) charts.push_back(detail::disk_chart(d));
                return charts;
            },
            [&](const Annulus& a) {
                detail::require_positive(a.inner, "Annulus inner radius");
                detail::require_positive(a.outer, "Annulus outer radius");
                if (!(a.inner < a.outer)) throw DomainError("Annulus: inner radius must be below outer radius");
                return std::vector{CoordinateChart{Kind::Polar, a.center, a.inner, a.outer, 0.0, two_pi}};
            },
            [](const Rectangle& r) {
                if (r.factors.empty()) throw DomainError("Rectangle: no factors");
                std::vector<CoordinateChart> charts;
                for (const auto& f : r.factors) {
                    if (!(f.re_lo < f.re_hi) || !(f.im_lo < f.im_hi))
                        throw DomainError("Rectangle: intervals must be nonempty");
                    charts.push_back({Kind::Cartesian, {}, f.re_lo, f.re_hi, f.im_lo, f.im_hi});
                }
                return charts;
            },
            [&](const PlaneCompactified& p) {
                if (p.nvars <= 0) throw DimensionError("PlaneCompactified: nvars must be positive");
                return std::vector<CoordinateChart>(static_cast<std::size_t>(p.nvars),
                                                    {Kind::PlaneRadial, {}, 0.0, 1.0, 0.0, two_pi});
            },
            [&](const TorusCompactified& t) {
                if (t.nvars <= 0) throw DimensionError("TorusCompactified: nvars must be positive");
                return std::vector<CoordinateChart>(static_cast<std::size_t>(t.nvars),
                                                    {Kind::TorusLogRadial, {}, -half_pi, half_pi, 0.0, two_pi});
            },
        },
        dom);
}

inline int domain_nvars(const Domain& dom) { return static_cast<int>(domain_charts(dom).size()); }

inline bool is_compactified(const Domain& dom) {
    return std::holds_alternative<domain::PlaneCompactified>(dom) ||
           std::holds_alternative<domain::TorusCompactified>(dom);
}

inline domain::Polydisk unit_polydisk(int n) {
    return domain::Polydisk{std::vector<domain::Disk>(static_cast<std::size_t>(n), domain::Disk{})};
}

} // namespace fewspace
