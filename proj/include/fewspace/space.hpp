// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fewspace/error.hpp"

namespace fewspace {

using cplx = std::complex<double>;

/// A point of an open subset of C^n.
using ComplexPoint = std::vector<cplx>;

/// Integer exponent vector a in Z^n.
using Exponent = std::vector<int>;

/// Finite exponent set with strictly positive weights c_a. The data of a
/// sparse Laurent space with orthonormal basis sqrt(c_a) x^a.
class SupportWeights {
public:
    SupportWeights(int nvars, std::map<Exponent, double> entries)
        : nvars_(nvars), entries_(std::move(entries)) {
        if (nvars_ <= 0)
            throw DimensionError("SupportWeights: nvars must be positive");
        if (entries_.empty())
            throw DomainError("SupportWeights: support must be nonempty");
        for (const auto& [a, c] : entries_) {
            if (static_cast<int>(a.size()) != nvars_)
                throw DimensionError("SupportWeights: exponent length differs from nvars");
            if (!(c > 0.0) || !std::isfinite(c))
                throw DomainError("SupportWeights: weights must be finite and strictly positive");
        }
    }

    /// Builds from (exponent, weight) pairs; duplicate exponents are rejected.
    static SupportWeights from_pairs(int nvars, const std::vector<std::pair<Exponent, double>>& pairs) {
        std::map<Exponent, double> m;
        for (const auto& [a, c] : pairs) {
            if (!m.emplace(a, c).second)
                throw DomainError("SupportWeights: duplicate exponent key");
        }
        return SupportWeights(nvars, std::move(m));
    }

    int nvars() const noexcept { return nvars_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::map<Exponent, double>& entries() const noexcept { return entries_; }

    friend bool operator==(const SupportWeights&, const SupportWeights&) = default;

private:
    int nvars_;
    std::map<Exponent, double> entries_;
};

namespace detail {
struct SpaceNode;
}

/// Immutable expression tree of fewspaces. Copies share structure.
class SpaceExpr {
public:
    explicit SpaceExpr(std::shared_ptr<const detail::SpaceNode> node) : node_(std::move(node)) {}

    int nvars() const noexcept;
    const detail::SpaceNode& node() const noexcept { return *node_; }

    /// Visits the variant alternative held by the root.
    template <class Visitor>
    decltype(auto) visit(Visitor&& vis) const;

private:
    std::shared_ptr<const detail::SpaceNode> node_;
};

namespace atom {

/// Homogeneous polynomials of degree d in n variables with the unitarily
/// invariant inner product, dehomogenized: K = (1 + <x,y>)^d.
struct Weyl {
    int degree;
    int nvars;
};

/// Span of the functions e^{b.x}, taken as orthonormal.
struct ExpSpan {
    std::vector<std::vector<cplx>> frequencies;
};

/// Laurent polynomials with orthonormal basis sqrt(c_a) x^a on (C\{0})^n.
struct SparseLaurent {
    SupportWeights weights;
};

/// Hyperbolic GAF on the unit disk, K = 1/(1 - x conj(y)).
struct HyperbolicGAF {};

/// Gaussian entire function, K = exp(x conj(y)).
struct GEF {};

struct Product {
    SpaceExpr left;
    SpaceExpr right;
};

struct Power {
    SpaceExpr base;
    int exponent;
};

/// Functions of disjoint coordinate blocks; nvars is the sum of the factors'.
struct CoordinateTensor {
    std::vector<SpaceExpr> factors;
};

} // namespace atom

namespace detail {

using SpaceVariant = std::variant<atom::Weyl, atom::ExpSpan, atom::SparseLaurent, atom::HyperbolicGAF,
                                  atom::GEF, atom::Product, atom::Power, atom::CoordinateTensor>;

struct SpaceNode {
    SpaceVariant value;
    int nvars;
};

} // namespace detail

inline int SpaceExpr::nvars() const noexcept { return node_->nvars; }

template <class Visitor>
decltype(auto) SpaceExpr::visit(Visitor&& vis) const {
    return std::visit(std::forward<Visitor>(vis), node_->value);
}

namespace detail {

inline SpaceExpr make_space(SpaceVariant v, int nvars) {
    return SpaceExpr(std::make_shared<const SpaceNode>(SpaceNode{std::move(v), nvars}));
}

} // namespace detail

// ---- constructors ---------------------------------------------------------

inline SpaceExpr weyl(int degree, int nvars) {
    if (degree < 0) throw DomainError("Weyl: degree must be nonnegative");
    if (nvars <= 0) throw DimensionError("Weyl: nvars must be positive");
    return detail::make_space(atom::Weyl{degree, nvars}, nvars);
}

inline SpaceExpr exp_span(std::vector<std::vector<cplx>> frequencies) {
    if (frequencies.empty()) throw DomainError("ExpSpan: frequency list is empty");
    const std::size_t n = frequencies.front().size();
    if (n == 0) throw DimensionError("ExpSpan: frequencies must have at least one coordinate");
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        if (frequencies[i].size() != n)
            throw DimensionError("ExpSpan: frequencies of different lengths");
        for (const cplx& b : frequencies[i])
            if (!std::isfinite(b.real()) || !std::isfinite(b.imag()))
                throw DomainError("ExpSpan: non-finite frequency");
        for (std::size_t j = 0; j < i; ++j)
            if (frequencies[j] == frequencies[i])
                throw DomainError("ExpSpan: frequencies must be pairwise distinct");
    }
    return detail::make_space(atom::ExpSpan{std::move(frequencies)}, static_cast<int>(n));
}

/// Convenience for one-variable real frequencies.
inline SpaceExpr exp_span_1d(const std::vector<double>& frequencies) {
    std::vector<std::vector<cplx>> f;
    f.reserve(frequencies.size());
    for (double b : frequencies) f.push_back({cplx(b, 0.0)});
    return exp_span(std::move(f));
}

inline SpaceExpr sparse_laurent(SupportWeights weights) {
    const int n = weights.nvars();
    return detail::make_space(atom::SparseLaurent{std::move(weights)}, n);
}

inline SpaceExpr hyperbolic_gaf() { return detail::make_space(atom::HyperbolicGAF{}, 1); }

inline SpaceExpr gef() { return detail::make_space(atom::GEF{}, 1); }

inline SpaceExpr product(SpaceExpr left, SpaceExpr right) {
    if (left.nvars() != right.nvars())
        throw DimensionError("Product: operands have different nvars (" + std::to_string(left.nvars()) +
                             " vs " + std::to_string(right.nvars()) + ")");
    const int n = left.nvars();
    return detail::make_space(atom::Product{std::move(left), std::move(right)}, n);
}

inline SpaceExpr power(SpaceExpr base, int exponent) {
    if (exponent <= 0) throw DomainError("Power: exponent must be a positive integer");
    const int n = base.nvars();
    return detail::make_space(atom::Power{std::move(base), exponent}, n);
}

inline SpaceExpr tensor(std::vector<SpaceExpr> factors) {
    if (factors.empty()) throw DimensionError("CoordinateTensor: no factors");
    int n = 0;
    for (const auto& f : factors) n += f.nvars();
    return detail::make_space(atom::CoordinateTensor{std::move(factors)}, n);
}

namespace detail {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::string format_complex(cplx z) {
    std::string s = std::to_string(z.real());
    if (z.imag() != 0.0) s += (z.imag() < 0 ? "" : "+") + std::to_string(z.imag()) + "i";
    return s;
}
} // namespace detail

/// Human-readable rendering used in diagnostics and output echoes.
inline std::string describe(const SpaceExpr& space) {
    using namespace atom;
    return space.visit(detail::overloaded{
        [](const Weyl& w) { return "Weyl(" + std::to_string(w.degree) + "," + std::to_string(w.nvars) + ")"; },
        [](const ExpSpan& e) {
            std::string s = "ExpSpan({";
            for (std::size_t i = 0; i < e.frequencies.size(); ++i) {
                if (i) s += ";";
                for (std::size_t j = 0; j < e.frequencies[i].size(); ++j)
                    s += (j ? "," : "") + detail::format_complex(e.frequencies[i][j]);
            }
            return s + "})";
        },
        [](const SparseLaurent& l) { return "SparseLaurent(" + std::to_string(l.weights.size()) + " terms)"; },
        [](const HyperbolicGAF&) { return std::string("HyperbolicGAF"); },
        [](const GEF&) { return std::string("GEF"); },
        [](const Product& p) { return "Product(" + describe(p.left) + "," + describe(p.right) + ")"; },
        [](const Power& p) { return "Power(" + describe(p.base) + "," + std::to_string(p.exponent) + ")"; },
        [](const CoordinateTensor& t) {
            std::string s = "Tensor(";
            for (std::size_t i = 0; i < t.factors.size(); ++i) s += (i ? "," : "") + describe(t.factors[i]);
            return s + ")";
        },
    });
}

} // namespace fewspace
