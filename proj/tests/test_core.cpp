// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "support/properties.hpp"

using namespace fewspace;
using fewspace::testing::multinomial;

namespace {

ComplexPoint pt(cplx z) { return {z}; }

TEST(Kernel, AtomValues) {
    EXPECT_DOUBLE_EQ(kernel_eval(weyl(2, 1), pt(1.0), pt(1.0)).real(), 4.0);
    EXPECT_DOUBLE_EQ(kernel_eval(exp_span_1d({0.0, 1.0}), pt(0.0), pt(0.0)).real(), 2.0);
    EXPECT_DOUBLE_EQ(kernel_eval(hyperbolic_gaf(), pt(0.0), pt(0.0)).real(), 1.0);
    EXPECT_DOUBLE_EQ(kernel_eval(product(weyl(1, 1), weyl(1, 1)), pt(1.0), pt(1.0)).real(),
                     kernel_eval(weyl(2, 1), pt(1.0), pt(1.0)).real());
}

TEST(Kernel, ClosedForms) {
    const cplx x(0.3, -0.4), y(-0.1, 0.6);
    EXPECT_NEAR(std::abs(kernel_eval(hyperbolic_gaf(), pt(x), pt(y)) - 1.0 / (1.0 - x * std::conj(y))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(kernel_eval(gef(), pt(x), pt(y)) - std::exp(x * std::conj(y))), 0.0, 1e-15);
    const cplx e = 1.0 + std::exp(x + std::conj(y));
    EXPECT_NEAR(std::abs(kernel_eval(exp_span_1d({0.0, 1.0}), pt(x), pt(y)) - e), 0.0, 1e-15);
    const ComplexPoint a{x, y}, b{y, x};
    const cplx w = std::pow(1.0 + a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]), 3);
    EXPECT_NEAR(std::abs(kernel_eval(weyl(3, 2), a, b) - w), 0.0, 1e-14);
    // Tensor: product of factor kernels on their coordinate blocks.
    const SpaceExpr t = tensor({gef(), weyl(2, 1)});
    const cplx expect = std::exp(a[0] * std::conj(b[0])) * std::pow(1.0 + a[1] * std::conj(b[1]), 2);
    EXPECT_NEAR(std::abs(kernel_eval(t, a, b) - expect), 0.0, 1e-14);
}

TEST(Kernel, WeylDegreeZero) {
    const ComplexPoint x{cplx(0.4, 0.1), cplx(-2.0, 3.0)};
    EXPECT_EQ(kernel_eval(weyl(0, 2), x, x), cplx(1.0, 0.0));
    EXPECT_EQ(log_hessian(weyl(0, 2), x).matrix, CMatrix::Zero(2, 2));
}

TEST(Kernel, Errors) {
    EXPECT_THROW(kernel_eval(weyl(2, 2), pt(1.0), pt(1.0)), DimensionError);
    const SpaceExpr l = sparse_laurent(SupportWeights(1, {{{-1}, 1.0}, {{1}, 1.0}}));
    EXPECT_THROW(kernel_eval(l, pt(0.0), pt(1.0)), DomainError);
    EXPECT_THROW(log_hessian(hyperbolic_gaf(), pt(1.5)), DomainError);
    EXPECT_THROW(kernel_eval(gef(), pt(std::numeric_limits<double>::quiet_NaN()), pt(0.0)), DomainError);
    EXPECT_THROW(kernel_eval(weyl(400, 1), pt(1e200), pt(1e200)), OverflowError);
    EXPECT_THROW(product(weyl(1, 1), weyl(1, 2)), DimensionError);
    EXPECT_THROW(power(gef(), 0), DomainError);
    EXPECT_THROW(exp_span_1d({1.0, 1.0}), DomainError);
    EXPECT_THROW(SupportWeights(1, {{{0}, -1.0}}), DomainError);
    EXPECT_THROW(SupportWeights::from_pairs(1, {{{0}, 1.0}, {{0}, 2.0}}), DomainError);
}

TEST(Kernel, LargeArgumentsStayFinite) {
    // log-sum-exp accumulation keeps H finite far from the origin.
    const SpaceExpr e = exp_span_1d({0.0, 1.0});
    EXPECT_NEAR(log_hessian(e, pt(800.0)).matrix(0, 0).real(), 0.0, 1e-300);
    const SpaceExpr l = sparse_laurent(SupportWeights(1, {{{0}, 1.0}, {{5}, 1.0}}));
    EXPECT_TRUE(std::isfinite(log_hessian(l, pt(1e40)).matrix(0, 0).real()));
}

TEST(Hessian, AtomValues) {
    EXPECT_DOUBLE_EQ(log_hessian(hyperbolic_gaf(), pt(0.0)).matrix(0, 0).real(), 1.0);
    EXPECT_DOUBLE_EQ(log_hessian(gef(), pt(cplx(3.0, -7.0))).matrix(0, 0).real(), 1.0);
    EXPECT_DOUBLE_EQ(log_hessian(exp_span_1d({0.0, 1.0}), pt(0.0)).matrix(0, 0).real(), 0.25);
    EXPECT_DOUBLE_EQ(log_hessian(power(hyperbolic_gaf(), 3), pt(0.0)).matrix(0, 0).real(), 3.0);
}

TEST(Hessian, WeylFubiniStudy) {
    // d (q I - conj(x) x^T) / q^2 with q = 1 + |x|^2, written out by hand for n = 2.
    const ComplexPoint x{cplx(0.3, 0.0), cplx(0.0, -0.2)};
    const double q = 1.0 + 0.09 + 0.04;
    const CMatrix h = log_hessian(weyl(5, 2), x).matrix;
    EXPECT_NEAR(std::abs(h(0, 0) - 5.0 * (q - 0.09) / (q * q)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(h(1, 1) - 5.0 * (q - 0.04) / (q * q)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(h(0, 1) - (-5.0) * std::conj(x[0]) * x[1] / (q * q)), 0.0, 1e-14);
}

TEST(Hessian, GafClosedForm) {
    const cplx z(0.5, 0.3);
    const double m = 1.0 - std::norm(z);
    EXPECT_NEAR(log_hessian(hyperbolic_gaf(), pt(z)).matrix(0, 0).real(), 1.0 / (m * m), 1e-13);
}

TEST(HessianFd, Examples) {
    EXPECT_NEAR(log_hessian_fd(gef(), pt(cplx(1.0, 1.0))).matrix(0, 0).real(), 1.0, 1e-6);
    EXPECT_NEAR(log_hessian_fd(exp_span_1d({0.0, 1.0}), pt(0.0)).matrix(0, 0).real(), 0.25, 1e-6);
    const ComplexPoint x{cplx(0.3, 0.0), cplx(0.0, -0.2)};
    const CMatrix h = log_hessian(weyl(5, 2), x).matrix;
    const CMatrix fd = log_hessian_fd(weyl(5, 2), x).matrix;
    EXPECT_LE((h - fd).cwiseAbs().maxCoeff(), 1e-5 * h.cwiseAbs().maxCoeff());
}

TEST(HessianFd, StencilCrossingPoleFails) {
    const SpaceExpr l = sparse_laurent(SupportWeights(1, {{{-1}, 1.0}, {{1}, 1.0}}));
    // The (-h, -h) stencil point lands exactly on the pole.
    EXPECT_THROW(log_hessian_fd(l, pt(cplx(2e-4, 0.0)), 1e-4), DomainError);
}

TEST(ProductWeights, Compositions) {
    const SupportWeights a(1, {{{0}, 1.0}, {{1}, 1.0}});
    EXPECT_EQ(product_weights(a, a), SupportWeights(1, {{{0}, 1.0}, {{1}, 2.0}, {{2}, 1.0}}));
    const SupportWeights s(2, {{{2, 3}, 5.0}}), t(2, {{{1, 1}, 2.0}});
    EXPECT_EQ(product_weights(s, t), SupportWeights(2, {{{3, 4}, 10.0}}));
    EXPECT_THROW(product_weights(a, s), DimensionError);
}

TEST(ProductWeights, WeylPowersAreMultinomial) {
    const SupportWeights w1(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}});
    SupportWeights acc = w1;
    for (int d = 2; d <= 6; ++d) {
        acc = product_weights(acc, w1);
        for (const auto& [a, c] : acc.entries()) EXPECT_EQ(c, multinomial(d, a)) << "d=" << d;
        // Same weights from the diagonal expansion of Weyl(d, 2).
        const DiagonalBasis b = diagonal_expansion(weyl(d, 2));
        ASSERT_EQ(b.weights.size(), acc.size());
        for (const auto& [k, c] : b.weights) EXPECT_EQ(c, acc.entries().at(k.exponent));
    }
}

TEST(DiagonalBasis, KernelReconstruction) {
    std::mt19937_64 rng(3);
    for (const auto& [name, s] : fewspace::testing::space_catalog()) {
        const DiagonalBasis b = diagonal_expansion(s, 200);
        const auto x = fewspace::testing::random_point(rng, s.nvars());
        const auto y = fewspace::testing::random_point(rng, s.nvars());
        const cplx k = kernel_eval(s, x, y);
        EXPECT_LE(std::abs(basis_kernel(b, x, y) - k), 1e-12 * std::abs(k)) << name;
    }
}

TEST(DiagonalBasis, InfiniteAtomsTruncate) {
    const DiagonalBasis gaf = diagonal_expansion(hyperbolic_gaf(), 10);
    EXPECT_EQ(gaf.weights.size(), 11u);
    const DiagonalBasis g = diagonal_expansion(gef(), 5);
    EXPECT_DOUBLE_EQ(g.weights.rbegin()->second, 1.0 / 120.0);
    EXPECT_TRUE(has_infinite_atom(product(weyl(1, 1), gef())));
    EXPECT_FALSE(has_infinite_atom(product(weyl(1, 1), exp_span_1d({0.0, 2.0}))));
}

TEST(DiagonalCondition, CatalogIsDiagonal) {
    EXPECT_TRUE(check_diagonal_condition(product(weyl(2, 1), exp_span_1d({0.0, 1.0}))));
    for (const auto& [name, s] : fewspace::testing::space_catalog()) EXPECT_TRUE(check_diagonal_condition(s)) << name;
}

TEST(DiagonalCondition, NonDiagonalBasisDetected) {
    auto term = [](int a) { return TermKey{{a}, {cplx(0.0, 0.0)}}; };
    // Basis (1, 1 + x): the products 1+x and (1+x)^2 overlap but are not colinear.
    const std::vector<TermCombination> bad{{{term(0), 1.0}}, {{term(0), 1.0}, {term(1), 1.0}}};
    EXPECT_FALSE(diagonal_condition_holds(bad, bad));
    const std::vector<TermCombination> mono{{{term(0), 1.0}}, {{term(1), 1.0}}};
    EXPECT_TRUE(diagonal_condition_holds(mono, mono));
}

TEST(Properties, KernelHermitian) {
    const auto r = fewspace::testing::kernel_hermitian_property();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, HessianFiniteDifference) {
    const auto r = fewspace::testing::hessian_fd_property();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, HessianAlgebra) {
    const auto r = fewspace::testing::hessian_algebra_property();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, WeightKernelConsistency) {
    const auto r = fewspace::testing::weight_kernel_property();
    EXPECT_TRUE(r.ok) << r.detail;
}

} // namespace
