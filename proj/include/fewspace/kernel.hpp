// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fewspace/space.hpp"

namespace fewspace {

using CMatrix = Eigen::MatrixXcd;

/// The Hermitian matrix H_jk = d^2/dx_j dconj(x_k) log K(x,x) at a point.
struct HermitianField {
    ComplexPoint point;
    CMatrix matrix;
};

namespace detail {

/// Integer power by squaring; negative exponents invert.
inline cplx ipow(cplx w, int k) {
    if (k < 0) return 1.0 / ipow(w, -k);
    cplx result(1.0, 0.0);
    while (k > 0) {
        if (k & 1) result *= w;
        w *= w;
        k >>= 1;
    }
    return result;
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite_point(std::span<const cplx> x) {
    for (const cplx& c : x)
        if (!finite(c)) throw DomainError("non-finite coordinate");
}

inline void require_nonzero(std::span<const cplx> x, const char* who) {
    for (const cplx& c : x)
        if (c == cplx(0.0, 0.0)) throw DomainError(std::string(who) + ": coordinates must be nonzero");
}

inline void require_in_unit_disk(cplx z, const char* who) {
    if (!(std::norm(z) < 1.0)) throw DomainError(std::string(who) + ": point outside the unit disk");
}

inline cplx checked(cplx k, const char* who) {
    if (!finite(k)) throw OverflowError(std::string(who) + ": kernel value overflowed");
    return k;
}

inline cplx kernel_rec(const SpaceExpr& space, std::span<const cplx> x, std::span<const cplx> y) {
    using namespace atom;
    return space.visit(overloaded{
        [&](const Weyl& w) {
            cplx s(1.0, 0.0);
            for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * std::conj(y[j]);
            return checked(ipow(s, w.degree), "Weyl");
        },
        [&](const ExpSpan& e) {
            cplx s(0.0, 0.0);
            for (const auto& b : e.frequencies) {
                cplx bx(0.0, 0.0), by(0.0, 0.0);
                for (std::size_t j = 0; j < x.size(); ++j) {
                    bx += b[j] * x[j];
                    by += b[j] * y[j];
                }
                s += std::exp(bx + std::conj(by));
            }
            return checked(s, "ExpSpan");
        },
        [&](const SparseLaurent& l) {
            require_nonzero(x, "SparseLaurent");
            require_nonzero(y, "SparseLaurent");
            cplx s(0.0, 0.0);
            for (const auto& [a, c] : l.weights.entries()) {
                cplx term(c, 0.0);
                for (std::size_t j = 0; j < x.size(); ++j) term *= ipow(x[j] * std::conj(y[j]), a[j]);
                s += term;
            }
            return checked(s, "SparseLaurent");
        },
        [&](const HyperbolicGAF&) {
            require_in_unit_disk(x[0], "HyperbolicGAF");
            require_in_unit_disk(y[0], "HyperbolicGAF");
            return 1.0 / (1.0 - x[0] * std::conj(y[0]));
        },
        [&](const GEF&) { return checked(std::exp(x[0] * std::conj(y[0])), "GEF"); },
        [&](const Product& p) { return checked(kernel_rec(p.left, x, y) * kernel_rec(p.right, x, y), "Product"); },
        [&](const Power& p) { return checked(ipow(kernel_rec(p.base, x, y), p.exponent), "Power"); },
        [&](const CoordinateTensor& t) {
            cplx k(1.0, 0.0);
            std::size_t offset = 0;
            for (const auto& f : t.factors) {
                const auto n = static_cast<std::size_t>(f.nvars());
                k *= kernel_rec(f, x.subspan(offset, n), y.subspan(offset, n));
                offset += n;
            }
            return checked(k, "CoordinateTensor");
        },
    });
}

/// Normalized log-sum-exp weights: p_i = exp(l_i) / sum_j exp(l_j).
inline void softmax_inplace(std::vector<double>& logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    if (!std::isfinite(m)) throw SingularEvaluation("log K(x,x) is not finite");
    double total = 0.0;
    for (double& l : logits) {
        l = std::exp(l - m);
        total += l;
    }
    for (double& l : logits) l /= total;
}

using MatrixBlock = Eigen::Ref<CMatrix>;

// Adds scale * H(x) into `out`, whose size equals the block's nvars.
inline void add_log_hessian(const SpaceExpr& space, std::span<const cplx> x, double scale, MatrixBlock out) {
    using namespace atom;
    const auto n = static_cast<Eigen::Index>(x.size());
    space.visit(overloaded{
        [&](const Weyl& w) {
            if (w.degree == 0) return;
            double norm2 = 0.0;
            for (const cplx& c : x) norm2 += std::norm(c);
            const double q = 1.0 + norm2;
            const double s = scale * w.degree;
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index k = 0; k < n; ++k) {
                    cplx h = -std::conj(x[j]) * x[k] / (q * q);
                    if (j == k) h += 1.0 / q;
                    out(j, k) += s * h;
                }
            }
        },
        [&](const ExpSpan& e) {
            // log K(x,x) = LSE_b 2 Re(b.x); H is the covariance of b under the softmax weights.
            std::vector<double> p(e.frequencies.size());
            for (std::size_t i = 0; i < p.size(); ++i) {
                cplx bx(0.0, 0.0);
                for (Eigen::Index j = 0; j < n; ++j) bx += e.frequencies[i][j] * x[j];
                p[i] = 2.0 * bx.real();
            }
            softmax_inplace(p);
            std::vector<cplx> mean(n, cplx(0.0, 0.0));
            for (std::size_t i = 0; i < p.size(); ++i)
                for (Eigen::Index j = 0; j < n; ++j) mean[j] += p[i] * e.frequencies[i][j];
            for (std::size_t i = 0; i < p.size(); ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    const cplx dj = e.frequencies[i][j] - mean[j];
                    for (Eigen::Index k = 0; k < n; ++k)
                        out(j, k) += scale * p[i] * dj * std::conj(e.frequencies[i][k] - mean[k]);
                }
            }
        },
        [&](const SparseLaurent& l) {
            // With t_j = log|x_j|^2, log K = LSE_a (log c_a + a.t) and
            // H_jk = Cov(a_j, a_k) / (x_j conj(x_k)).
            require_nonzero(x, "SparseLaurent");
            std::vector<double> t(n);
            for (Eigen::Index j = 0; j < n; ++j) t[j] = 2.0 * std::log(std::abs(x[j]));
            const auto& entries = l.weights.entries();
            std::vector<double> p;
            p.reserve(entries.size());
            for (const auto& [a, c] : entries) {
                double v = std::log(c);
                for (Eigen::Index j = 0; j < n; ++j) v += a[j] * t[j];
                p.push_back(v);
            }
            softmax_inplace(p);
            std::vector<double> mean(n, 0.0);
            std::size_t i = 0;
            for (const auto& [a, c] : entries) {
                for (Eigen::Index j = 0; j < n; ++j) mean[j] += p[i] * a[j];
                ++i;
            }
            i = 0;
            Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
            for (const auto& [a, c] : entries) {
                for (Eigen::Index j = 0; j < n; ++j)
                    for (Eigen::Index k = 0; k < n; ++k) cov(j, k) += p[i] * (a[j] - mean[j]) * (a[k] - mean[k]);
                ++i;
            }
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index k = 0; k < n; ++k) out(j, k) += scale * cov(j, k) / (x[j] * std::conj(x[k]));
        },
        [&](const HyperbolicGAF&) {
            require_in_unit_disk(x[0], "HyperbolicGAF");
            const double q = 1.0 - std::norm(x[0]);
            out(0, 0) += scale / (q * q);
        },
        [&](const GEF&) { out(0, 0) += scale; },
        // Children are evaluated unscaled into fresh matrices so that
        // H(EF) = H(E) + H(F) and H(F^l) = l H(F) hold bit for bit.
        [&](const Product& p) {
            CMatrix l = CMatrix::Zero(n, n), r = CMatrix::Zero(n, n);
            add_log_hessian(p.left, x, 1.0, l);
            add_log_hessian(p.right, x, 1.0, r);
            out += scale * (l + r);
        },
        [&](const Power& p) {
            CMatrix b = CMatrix::Zero(n, n);
            add_log_hessian(p.base, x, 1.0, b);
            out += (scale * p.exponent) * b;
        },
        [&](const CoordinateTensor& t) {
            Eigen::Index offset = 0;
            for (const auto& f : t.factors) {
                const Eigen::Index m = f.nvars();
                add_log_hessian(f, x.subspan(offset, m), scale, out.block(offset, offset, m, m));
                offset += m;
            }
        },
    });
}

inline void require_dimension(const SpaceExpr& space, std::size_t len, const char* what) {
    if (static_cast<int>(len) != space.nvars())
        throw DimensionError(std::string(what) + ": point has " + std::to_string(len) +
                             " coordinates, space has nvars " + std::to_string(space.nvars()));
}

} // namespace detail

/// Reproducing kernel K(x, y).
inline cplx kernel_eval(const SpaceExpr& space, std::span<const cplx> x, std::span<const cplx> y) {
    detail::require_dimension(space, x.size(), "kernel_eval");
    detail::require_dimension(space, y.size(), "kernel_eval");
    detail::require_finite_point(x);
    detail::require_finite_point(y);
    return detail::kernel_rec(space, x, y);
}

/// Writes H(x) into `out` (resized to n x n). Allocation-free after the
/// first call with a given size; used on quadrature hot paths.
inline void log_hessian_into(const SpaceExpr& space, std::span<const cplx> x, CMatrix& out) {
    detail::require_dimension(space, x.size(), "log_hessian");
    detail::require_finite_point(x);
    const auto n = static_cast<Eigen::Index>(x.size());
    out.setZero(n, n);
    detail::add_log_hessian(space, x, 1.0, out);
}

/// Closed-form Hessian of log K(x,x), assembled compositionally:
/// products add, powers scale, tensors are block diagonal.
inline HermitianField log_hessian(const SpaceExpr& space, std::span<const cplx> x) {
    HermitianField field{ComplexPoint(x.begin(), x.end()), CMatrix()};
    log_hessian_into(space, x, field.matrix);
    return field;
}

/// Central-difference estimate of d dbar log K(x,x) from kernel values
/// alone. Test oracle for log_hessian.
inline HermitianField log_hessian_fd(const SpaceExpr& space, std::span<const cplx> x, double h = 1e-4) {
    detail::require_dimension(space, x.size(), "log_hessian_fd");
    if (!(h > 0.0)) throw DomainError("log_hessian_fd: step must be positive");
    const auto n = static_cast<int>(x.size());

    // Real coordinates: direction 2j is Re x_j, 2j+1 is Im x_j.
    auto shifted = [&](int a, double sa, int b, double sb) {
        ComplexPoint p(x.begin(), x.end());
        p[a / 2] += (a % 2 == 0) ? cplx(sa * h, 0.0) : cplx(0.0, sa * h);
        p[b / 2] += (b % 2 == 0) ? cplx(sb * h, 0.0) : cplx(0.0, sb * h);
        const cplx k = kernel_eval(space, p, p);
        if (!(k.real() > 0.0)) throw SingularEvaluation("log_hessian_fd: K(x,x) not positive on stencil");
        return std::log(k.real());
    };
    auto second = [&](int a, int b) {
        return (shifted(a, 1, b, 1) - shifted(a, 1, b, -1) - shifted(a, -1, b, 1) + shifted(a, -1, b, -1)) /
               (4.0 * h * h);
    };

    HermitianField field{ComplexPoint(x.begin(), x.end()), CMatrix::Zero(n, n)};
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const double uu = second(2 * j, 2 * k);
            const double vv = second(2 * j + 1, 2 * k + 1);
            const double uv = second(2 * j, 2 * k + 1);
            const double vu = second(2 * j + 1, 2 * k);
            field.matrix(j, k) = 0.25 * cplx(uu + vv, uv - vu);
        }
    }
    return field;
}

} // namespace fewspace
