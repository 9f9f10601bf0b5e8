// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "fewspace/fewspace.hpp"

using namespace fewspace;

namespace {

LatticeSupport s1(std::vector<long long> pts) {
    std::vector<LatticePoint> p;
    for (auto v : pts) p.push_back({v});
    return LatticeSupport(1, p);
}

LatticeSupport s2(std::vector<LatticePoint> pts) { return LatticeSupport(2, std::move(pts)); }

const LatticeSupport kTriangle = s2({{0, 0}, {1, 0}, {0, 1}});
const LatticeSupport kTriangle2 = s2({{0, 0}, {2, 0}, {0, 2}});

TEST(HullVolume, Examples) {
    EXPECT_EQ(hull_volume(s1({0, 3})), 3.0);
    EXPECT_EQ(hull_volume(kTriangle), 0.5);
    EXPECT_EQ(hull_volume(s2({{0, 0}, {2, 0}, {0, 2}, {1, 1}})), 2.0);
    const LatticeVolume v = hull_volume_exact(kTriangle);
    EXPECT_EQ(v.numerator, 1);
    EXPECT_EQ(v.denominator, 2);
    EXPECT_EQ(hull_volume(s2({{0, 0}, {1, 1}, {2, 2}})), 0.0);
    EXPECT_EQ(hull_volume(s2({{4, 4}})), 0.0);
}

TEST(HullVolume, ConvexHullDropsInteriorAndCollinear) {
    const auto h = convex_hull(s2({{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}}));
    EXPECT_EQ(h.size(), 4u);
}

TEST(HullVolume, UnsupportedDimension) {
    const LatticeSupport s3(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    EXPECT_THROW(hull_volume(s3), DimensionError);
    EXPECT_THROW(LatticeSupport(2, {{0, 0}, {1}}), DimensionError);
    EXPECT_THROW(LatticeSupport(2, {}), DomainError);
}

TEST(Bernstein, Examples) {
    EXPECT_EQ(bernstein_count({s2({{0, 0}, {1, 0}}), s2({{0, 0}, {0, 1}})}), 1.0);
    EXPECT_EQ(bernstein_count({kTriangle, kTriangle}), 1.0);
    EXPECT_EQ(bernstein_count({kTriangle, kTriangle2}), 2.0);
    EXPECT_EQ(bernstein_count({s1({2, 7})}), 5.0);
    EXPECT_THROW(bernstein_count({kTriangle}), DimensionError);
}

TEST(Bernstein, BezoutForDenseSupports) {
    // Full simplices of degrees a and b: mixed count a b.
    auto simplex = [](long long d) { return s2({{0, 0}, {d, 0}, {0, d}}); };
    for (int a = 1; a <= 4; ++a)
        for (int b = 1; b <= 4; ++b) EXPECT_EQ(bernstein_count({simplex(a), simplex(b)}), a * b);
}

LatticeSupport random_support(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coord(-3, 3), size(1, 6);
    std::vector<LatticePoint> p;
    const int k = size(rng);
    for (int i = 0; i < k; ++i) p.push_back({coord(rng), coord(rng)});
    return s2(p);
}

TEST(Properties, EqualSupportsReduceToKushnirenko) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const LatticeSupport a = random_support(rng);
        EXPECT_EQ(bernstein_count({a, a}), 2.0 * hull_volume(a));
    }
}

TEST(Properties, SymmetricAndMonotone) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        const LatticeSupport a = random_support(rng), b = random_support(rng), extra = random_support(rng);
        const double ab = bernstein_count({a, b});
        EXPECT_EQ(ab, bernstein_count({b, a}));
        std::vector<LatticePoint> bigger = a.points();
        bigger.insert(bigger.end(), extra.points().begin(), extra.points().end());
        EXPECT_GE(bernstein_count({s2(bigger), b}), ab);
        EXPECT_GE(ab, 0.0);
    }
}

TEST(Properties, TranslationInvariant) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> shift(-50, 50);
    for (int i = 0; i < 100; ++i) {
        const LatticeSupport a = random_support(rng), b = random_support(rng);
        const LatticePoint v{shift(rng), shift(rng)}, w{shift(rng), shift(rng)};
        EXPECT_EQ(hull_volume(a.translated(v)), hull_volume(a));
        EXPECT_EQ(bernstein_count({a.translated(v), b.translated(w)}), bernstein_count({a, b}));
    }
}

TEST(Kushnirenko, OneDimensional) {
    QuadOptions opts;
    opts.tol = 1e-6;
    for (int d = 0; d <= 5; ++d) {
        std::map<Exponent, double> w;
        for (int a = 0; a <= d; ++a) w[{a}] = 1.0;
        const SupportWeights sw(1, w);
        const KushnirenkoCheck k = kushnirenko_check(LatticeSupport::from_weights(sw), sw, opts);
        EXPECT_EQ(k.combinatorial, d);
        EXPECT_NEAR(k.integral.value, d, 1e-6 + k.integral.error);
    }
    const SupportWeights sparse(1, {{{2}, 7.0}, {{5}, 0.1}});
    const KushnirenkoCheck k = kushnirenko_check(LatticeSupport::from_weights(sparse), sparse, opts);
    EXPECT_EQ(k.combinatorial, 3.0);
    EXPECT_NEAR(k.integral.value, 3.0, 1e-6 + k.integral.error);
}

TEST(Kushnirenko, UnitTriangle) {
    QuadOptions opts;
    opts.tol = 1e-3;
    const SupportWeights w(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}});
    const KushnirenkoCheck k = kushnirenko_check(kTriangle, w, opts);
    EXPECT_EQ(k.combinatorial, 1.0);
    EXPECT_NEAR(k.integral.value, 1.0, 1e-3 + k.integral.error);
}

TEST(Kushnirenko, WeightsMustMatchSupport) {
    const SupportWeights w(1, {{{0}, 1.0}, {{2}, 1.0}});
    EXPECT_THROW(kushnirenko_check(s1({0, 1, 2}), w), DomainError);
}

} // namespace
