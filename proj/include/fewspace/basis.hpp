// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fewspace/kernel.hpp"
#include "fewspace/space.hpp"

namespace fewspace {

/// Identifies the function x^a e^{b.x}. Two product-basis functions are
/// colinear exactly when their keys compare equal; no floating-point
/// colinearity test is ever made.
struct TermKey {
    Exponent exponent;
    std::vector<cplx> frequency;

    friend bool operator==(const TermKey&, const TermKey&) = default;
    friend bool operator<(const TermKey& l, const TermKey& r) {
        if (l.exponent != r.exponent) return l.exponent < r.exponent;
        auto as_pair = [](cplx z) { return std::pair(z.real(), z.imag()); };
        return std::lexicographical_compare(l.frequency.begin(), l.frequency.end(), r.frequency.begin(),
                                            r.frequency.end(),
                                            [&](cplx a, cplx b) { return as_pair(a) < as_pair(b); });
    }

    bool has_frequency() const {
        for (const cplx& b : frequency)
            if (b != cplx(0.0, 0.0)) return true;
        return false;
    }
};

/// Orthonormal basis { sqrt(w_k) x^a e^{b.x} } of a diagonal space, keyed by
/// (a, b) with weight w_k > 0.
struct DiagonalBasis {
    int nvars = 0;
    std::map<TermKey, double> weights;
};

namespace detail {

inline DiagonalBasis convolve(const DiagonalBasis& l, const DiagonalBasis& r) {
    DiagonalBasis out{l.nvars, {}};
    for (const auto& [ka, wa] : l.weights) {
        for (const auto& [kb, wb] : r.weights) {
            TermKey k{ka.exponent, ka.frequency};
            for (int j = 0; j < l.nvars; ++j) {
                k.exponent[j] += kb.exponent[j];
                k.frequency[j] += kb.frequency[j];
            }
            out.weights[k] += wa * wb;
        }
    }
    return out;
}

inline DiagonalBasis concat(const DiagonalBasis& l, const DiagonalBasis& r) {
    DiagonalBasis out{l.nvars + r.nvars, {}};
    for (const auto& [ka, wa] : l.weights) {
        for (const auto& [kb, wb] : r.weights) {
            TermKey k = ka;
            k.exponent.insert(k.exponent.end(), kb.exponent.begin(), kb.exponent.end());
            k.frequency.insert(k.frequency.end(), kb.frequency.begin(), kb.frequency.end());
            out.weights.emplace(std::move(k), wa * wb);
        }
    }
    return out;
}

} // namespace detail

/// Explicit diagonal basis of a space. Infinite-dimensional atoms (GAF, GEF)
/// are truncated to exponents 0..truncation.
inline DiagonalBasis diagonal_expansion(const SpaceExpr& space, int truncation = 64) {
    using namespace atom;
    auto zero_key = [](int n) { return TermKey{Exponent(n, 0), std::vector<cplx>(n, cplx(0.0, 0.0))}; };
    return space.visit(detail::overloaded{
        [&](const Weyl& w) {
            // Multinomial weights d!/(a_0! a_1! ... a_n!) by repeated convolution of Weyl(1, n).
            DiagonalBasis linear{w.nvars, {}};
            linear.weights[zero_key(w.nvars)] = 1.0;
            for (int j = 0; j < w.nvars; ++j) {
                TermKey k = zero_key(w.nvars);
                k.exponent[j] = 1;
                linear.weights[k] = 1.0;
            }
            DiagonalBasis out{w.nvars, {{zero_key(w.nvars), 1.0}}};
            for (int i = 0; i < w.degree; ++i) out = detail::convolve(out, linear);
            return out;
        },
        [&](const ExpSpan& e) {
            const int n = space.nvars();
            DiagonalBasis out{n, {}};
            for (const auto& b : e.frequencies) out.weights[TermKey{Exponent(n, 0), b}] = 1.0;
            return out;
        },
        [&](const SparseLaurent& l) {
            const int n = l.weights.nvars();
            DiagonalBasis out{n, {}};
            for (const auto& [a, c] : l.weights.entries())
                out.weights[TermKey{a, std::vector<cplx>(n, cplx(0.0, 0.0))}] = c;
            return out;
        },
        [&](const HyperbolicGAF&) {
            DiagonalBasis out{1, {}};
            for (int k = 0; k <= truncation; ++k) out.weights[TermKey{{k}, {cplx(0.0, 0.0)}}] = 1.0;
            return out;
        },
        [&](const GEF&) {
            DiagonalBasis out{1, {}};
            double w = 1.0;
            for (int k = 0; k <= truncation; ++k) {
                if (k > 0) w /= k;
                out.weights[TermKey{{k}, {cplx(0.0, 0.0)}}] = w;
            }
            return out;
        },
        [&](const Product& p) {
            return detail::convolve(diagonal_expansion(p.left, truncation), diagonal_expansion(p.right, truncation));
        },
        [&](const Power& p) {
            const DiagonalBasis base = diagonal_expansion(p.base, truncation);
            DiagonalBasis out = base;
            for (int i = 1; i < p.exponent; ++i) out = detail::convolve(out, base);
            return out;
        },
        [&](const CoordinateTensor& t) {
            DiagonalBasis out = diagonal_expansion(t.factors.front(), truncation);
            for (std::size_t i = 1; i < t.factors.size(); ++i)
                out = detail::concat(out, diagonal_expansion(t.factors[i], truncation));
            return out;
        },
    });
}

/// Kernel reconstructed from a diagonal basis: sum_k w_k x^a conj(y)^a e^{b.x + conj(b.y)}.
inline cplx basis_kernel(const DiagonalBasis& basis, std::span<const cplx> x, std::span<const cplx> y) {
    cplx s(0.0, 0.0);
    for (const auto& [k, w] : basis.weights) {
        cplx term(w, 0.0);
        cplx phase(0.0, 0.0);
        for (int j = 0; j < basis.nvars; ++j) {
            term *= detail::ipow(x[j] * std::conj(y[j]), k.exponent[j]);
            phase += k.frequency[j] * x[j] + std::conj(k.frequency[j] * y[j]);
        }
        s += term * std::exp(phase);
    }
    return s;
}

/// Weights of the product of two sparse diagonal spaces:
/// c_s = sum over a1 + a2 = s of c_{a1} c_{a2}, on the Minkowski sum of supports.
inline SupportWeights product_weights(const SupportWeights& a, const SupportWeights& b) {
    if (a.nvars() != b.nvars()) throw DimensionError("product_weights: supports have different nvars");
    std::map<Exponent, double> out;
    for (const auto& [ea, ca] : a.entries()) {
        for (const auto& [eb, cb] : b.entries()) {
            Exponent s = ea;
            for (std::size_t j = 0; j < s.size(); ++j) s[j] += eb[j];
            out[s] += ca * cb;
        }
    }
    return SupportWeights(a.nvars(), std::move(out));
}

/// A basis function written in the frame of pairwise orthogonal terms
/// x^a e^{b.x}: term -> coefficient.
using TermCombination = std::map<TermKey, cplx>;

namespace detail {

inline TermCombination multiply(const TermCombination& l, const TermCombination& r) {
    TermCombination out;
    for (const auto& [ka, ca] : l) {
        for (const auto& [kb, cb] : r) {
            TermKey k = ka;
            for (std::size_t j = 0; j < k.exponent.size(); ++j) {
                k.exponent[j] += kb.exponent[j];
                k.frequency[j] += kb.frequency[j];
            }
            out[k] += ca * cb;
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == cplx(0.0, 0.0); });
    return out;
}

// Exact proportionality on a shared support.
inline bool proportional(const TermCombination& p, const TermCombination& q) {
    if (p.size() != q.size()) return false;
    cplx ratio;
    bool first = true;
    for (auto ip = p.begin(), iq = q.begin(); ip != p.end(); ++ip, ++iq) {
        if (!(ip->first == iq->first)) return false;
        if (first) {
            ratio = iq->second / ip->second;
            first = false;
        } else if (iq->second != ratio * ip->second) {
            return false;
        }
    }
    return true;
}

inline bool disjoint(const TermCombination& p, const TermCombination& q) {
    for (const auto& [k, c] : p)
        if (q.count(k)) return false;
    return true;
}

} // namespace detail

/// Condition for the explicit product basis: every pair of products
/// phi_i psi_j, phi_k psi_l is either orthogonal (disjoint term support) or
/// colinear (proportional on the same support).
inline bool diagonal_condition_holds(std::span<const TermCombination> left, std::span<const TermCombination> right) {
    std::vector<TermCombination> products;
    for (const auto& p : left)
        for (const auto& q : right) products.push_back(detail::multiply(p, q));
    for (std::size_t i = 0; i < products.size(); ++i) {
        for (std::size_t j = i + 1; j < products.size(); ++j) {
            if (!detail::disjoint(products[i], products[j]) && !detail::proportional(products[i], products[j]))
                return false;
        }
    }
    return true;
}

/// True iff every atom of the tree carries a diagonal orthonormal basis, so
/// condition (orthogonal-or-colinear products) holds at every product node.
/// All atoms of the closed catalog qualify.
inline bool check_diagonal_condition(const SpaceExpr& space) {
    using namespace atom;
    return space.visit(detail::overloaded{
        [](const Weyl&) { return true; },
        [](const ExpSpan&) { return true; },
        [](const SparseLaurent&) { return true; },
        [](const HyperbolicGAF&) { return true; },
        [](const GEF&) { return true; },
        [](const Product& p) { return check_diagonal_condition(p.left) && check_diagonal_condition(p.right); },
        [](const Power& p) { return check_diagonal_condition(p.base); },
        [](const CoordinateTensor& t) {
            for (const auto& f : t.factors)
                if (!check_diagonal_condition(f)) return false;
            return true;
        },
    });
}

/// True iff the tree contains a GAF or GEF atom (needs series truncation).
inline bool has_infinite_atom(const SpaceExpr& space) {
    using namespace atom;
    return space.visit(detail::overloaded{
        [](const HyperbolicGAF&) { return true; },
        [](const GEF&) { return true; },
        [](const Product& p) { return has_infinite_atom(p.left) || has_infinite_atom(p.right); },
        [](const Power& p) { return has_infinite_atom(p.base); },
        [](const CoordinateTensor& t) {
            for (const auto& f : t.factors)
                if (has_infinite_atom(f)) return true;
            return false;
        },
        [](const auto&) { return false; },
    });
}

} // namespace fewspace
