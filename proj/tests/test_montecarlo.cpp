// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "support/properties.hpp"

using namespace fewspace;

namespace {

SampledFunction monomial(int k, cplx shift = 0.0) {
    std::vector<FunctionTerm> t{{k, 0.0, 1.0}};
    if (shift != cplx(0.0, 0.0)) t.push_back({0, 0.0, -shift});
    return SampledFunction::from_terms(t);
}

TEST(Winding, Examples) {
    EXPECT_EQ(count_zeros_disk(monomial(3), 1.0), 3);
    EXPECT_EQ(count_zeros_disk(monomial(1, 2.0), 1.0), 0);
    const SampledFunction e = SampledFunction::from_terms({{0, 1.0, 1.0}});
    EXPECT_EQ(count_zeros_disk(e, 1.0), 0);
    EXPECT_EQ(count_zeros_disk(monomial(1, 2.0), 3.0), 1);
}

TEST(Winding, EvaluatesDerivative) {
    // f = z^2 e^{2z} - 3: f' = (2z + 2z^2) e^{2z}.
    const SampledFunction f = SampledFunction::from_terms({{2, 2.0, 1.0}, {0, 0.0, -3.0}});
    const cplx z(0.3, -0.7);
    const auto [v, d] = f.eval(z);
    EXPECT_NEAR(std::abs(v - (z * z * std::exp(2.0 * z) - 3.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(d - (2.0 * z + 2.0 * z * z) * std::exp(2.0 * z)), 0.0, 1e-14);
}

TEST(Winding, ZeroOnContourIsRetried) {
    const int c = count_zeros_disk(monomial(1, 1.0), 1.0);
    EXPECT_TRUE(c == 0 || c == 1);
    EXPECT_FALSE(winding_number(monomial(1, 1.0), 1.0).has_value());
}

TEST(Winding, RetriesExhausted) {
    ContourOptions opts;
    opts.near_zero_ratio = 2.0;  // every contour counts as touching a zero
    EXPECT_THROW(count_zeros_disk(monomial(2), 1.0, opts), ContourError);
}

TEST(Winding, PuncturedLaurent) {
    // z^{-2} (z - 0.5)(z - 3): one zero in 0 < |z| < 1, pole of order 2 at 0.
    const SampledFunction f =
        SampledFunction::from_terms({{0, 0.0, 1.0}, {-1, 0.0, -3.5}, {-2, 0.0, 1.5}}, /*punctured=*/true);
    EXPECT_EQ(count_zeros_disk(f, 1.0), 1);
    EXPECT_EQ(count_zeros_disk(f, 4.0), 2);
}

TEST(Properties, ArgumentPrincipleVsCompanion) {
    const auto r = fewspace::testing::argument_principle_property(1000);
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Sampling, WeylBasis) {
    CounterStream s(1);
    const SampledFunction f = sample_function(weyl(4, 1), s);
    ASSERT_EQ(f.coefficients().size(), 5u);
    const cplx z(0.4, 0.9);
    cplx expect(0.0, 0.0);
    for (int j = 0; j <= 4; ++j) expect += f.coefficients()[j] * std::sqrt(fewspace::testing::multinomial(4, {j})) *
                                           std::pow(z, j);
    EXPECT_NEAR(std::abs(f(z) - expect), 0.0, 1e-13);
}

TEST(Sampling, ExpWeylBasis) {
    // Basis sqrt(binom(d,j)) z^j and sqrt(binom(d,j)) z^j e^z, ordered by (j, frequency).
    const int d = 3;
    CounterStream s(2);
    const SampledFunction f = sample_function(product(exp_span_1d({0.0, 1.0}), weyl(d, 1)), s);
    ASSERT_EQ(f.coefficients().size(), 2u * (d + 1));
    const cplx z(-0.3, 0.5);
    cplx expect(0.0, 0.0);
    for (int j = 0; j <= d; ++j) {
        const double w = std::sqrt(fewspace::testing::multinomial(d, {j}));
        expect += w * std::pow(z, j) * (f.coefficients()[2 * j] + f.coefficients()[2 * j + 1] * std::exp(z));
    }
    EXPECT_NEAR(std::abs(f(z) - expect), 0.0, 1e-13);
}

TEST(Sampling, TruncatedGaf) {
    CounterStream s(3);
    const SampledFunction f = sample_function(hyperbolic_gaf(), s, 10);
    ASSERT_EQ(f.coefficients().size(), 11u);
    const cplx z(0.2, 0.1);
    cplx expect(0.0, 0.0);
    for (int n = 0; n <= 10; ++n) expect += f.coefficients()[n] * std::pow(z, n);
    EXPECT_NEAR(std::abs(f(z) - expect), 0.0, 1e-14);
}

TEST(Sampling, CoefficientMoments) {
    // E|a|^2 = 1 with real and imaginary parts of variance 1/2.
    double re2 = 0.0, im2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        CounterStream s = CounterStream::for_sample(9, i);
        const cplx a = sample_function(weyl(0, 1), s).coefficients()[0];
        re2 += a.real() * a.real();
        im2 += a.imag() * a.imag();
    }
    EXPECT_NEAR(re2 / n, 0.5, 0.03);
    EXPECT_NEAR(im2 / n, 0.5, 0.03);
}

TEST(Sampling, Errors) {
    CounterStream s(4);
    EXPECT_THROW(sample_function(weyl(2, 2), s), DimensionError);
    EXPECT_THROW(sample_function(gef(), s, 0), DomainError);
    EXPECT_THROW(mc_expected_count(weyl(2, 1), 1.0, 1, 0), DomainError);
    EXPECT_THROW(mc_expected_count(weyl(2, 1), 0.0, 100, 0), DomainError);
}

TEST(Random, StreamsAreKeyedBySeedAndIndex) {
    CounterStream a = CounterStream::for_sample(1, 5), b = CounterStream::for_sample(1, 5);
    CounterStream c = CounterStream::for_sample(1, 6), d = CounterStream::for_sample(2, 5);
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
    EXPECT_NE(a.split(0)(), a.split(1)());
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) mean += a.uniform();
    EXPECT_NEAR(mean / 100000, 0.5, 0.005);
}

struct McCase {
    const char* name;
    SpaceExpr space;
    double radius;
    double expect;
};

TEST(MonteCarlo, Examples) {
    const std::vector<McCase> cases{
        {"Weyl(4,1)", weyl(4, 1), 1.0, 2.0},
        {"ExpSpan*Weyl(3,1)", product(exp_span_1d({0.0, 1.0}), weyl(3, 1)), 1.0, 1.702918921282},
        {"GAF", hyperbolic_gaf(), 0.5, 1.0 / 3.0},
    };
    for (const auto& c : cases) {
        const MCReport r = mc_expected_count(c.space, c.radius, 20000, 42);
        EXPECT_LE(std::abs(r.mean - c.expect), 3.0 * r.std_error) << c.name << " mean " << r.mean;
        std::int64_t total = 0;
        for (const auto& [k, n] : r.histogram) total += n;
        EXPECT_EQ(total, r.samples);
        EXPECT_EQ(r.samples + r.discarded, 20000);
    }
}

TEST(MonteCarlo, GafTruncationBiasChecked) {
    const MCReport r = mc_expected_count(hyperbolic_gaf(), 0.5, 20000, 7);
    EXPECT_TRUE(r.truncation_checked);
    EXPECT_TRUE(r.truncation_ok);
    EXPECT_LE(r.truncation_bias, r.std_error / 3.0);
}

TEST(MonteCarlo, AgreesWithQuadrature) {
    const std::vector<McCase> cases{
        {"GEF", gef(), 1.0, 0.0},
        {"Laurent", sparse_laurent(SupportWeights(1, {{{-1}, 1.0}, {{0}, 2.0}, {{2}, 1.0}})), 1.2, 0.0},
        {"Power(ExpSpan,2)", power(exp_span_1d({0.0, 1.0}), 2), 1.5, 0.0},
        {"Product(GAF,Weyl(2,1))", product(hyperbolic_gaf(), weyl(2, 1)), 0.7, 0.0},
    };
    for (const auto& c : cases) {
        QuadOptions q;
        q.tol = 1e-8;
        const double quad =
            integrate_density(MixedDensityQuery::unmixed(c.space), domain::Disk{0.0, c.radius}, q).value;
        const MCReport r = mc_expected_count(c.space, c.radius, 10000, 99);
        EXPECT_LE(std::abs(r.mean - quad), 3.0 * r.std_error) << c.name << ": mc " << r.mean << " quad " << quad;
    }
}

TEST(MonteCarlo, DeterministicAcrossThreads) {
    McOptions one, four;
    four.threads = 4;
    const SpaceExpr s = product(exp_span_1d({0.0, 1.0}), weyl(3, 1));
    const MCReport a = mc_expected_count(s, 1.0, 3000, 5, one);
    const MCReport b = mc_expected_count(s, 1.0, 3000, 5, four);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.histogram, b.histogram);
    EXPECT_NE(mc_expected_count(s, 1.0, 3000, 6, one).mean, a.mean);
}

TEST(MonteCarlo, DiscardRateAborts) {
    McOptions opts;
    opts.contour.near_zero_ratio = 2.0;
    opts.contour.max_retries = 0;
    EXPECT_THROW(mc_expected_count(weyl(2, 1), 1.0, 100, 0, opts), SamplingError);
}

TEST(Properties, WeylCountsBoundedByDegree) {
    for (int d : {1, 3, 6}) {
        for (double rho : {0.5, 1.0, 3.0}) {
            const MCReport r = mc_expected_count(weyl(d, 1), rho, 2000, 11);
            EXPECT_LE(r.histogram.rbegin()->first, d);
            EXPECT_GE(r.histogram.begin()->first, 0);
        }
    }
}

TEST(Properties, WindingStableUnderArcHalving) {
    ContourOptions coarse;
    coarse.initial_arcs = 32;
    const std::vector<SpaceExpr> corpus{weyl(6, 1), product(exp_span_1d({0.0, 1.0}), weyl(3, 1)), hyperbolic_gaf(),
                                        gef()};
    for (const auto& s : corpus) {
        for (int i = 0; i < 200; ++i) {
            CounterStream st = CounterStream::for_sample(77, i);
            const SampledFunction f = sample_function(s, st);
            const double rho = has_infinite_atom(s) ? 0.6 : 1.0;
            const auto fine = winding_number(f, rho);
            const auto half = winding_number(f, rho, coarse);
            ASSERT_TRUE(fine.has_value());
            EXPECT_EQ(fine, half) << describe(s) << " sample " << i;
        }
    }
}

TEST(Properties, ScaleInvariance) {
    const SpaceExpr s = product(exp_span_1d({0.0, 1.0}), weyl(4, 1));
    for (int i = 0; i < 200; ++i) {
        CounterStream st = CounterStream::for_sample(13, i);
        const SampledFunction f = sample_function(s, st);
        const int base = count_zeros_disk(f, 1.0);
        for (cplx c : {cplx(1e-6, 0.0), cplx(-3.0, 2.0), cplx(0.0, 1e5)})
            EXPECT_EQ(count_zeros_disk(f.scaled(c), 1.0), base);
    }
}

} // namespace
