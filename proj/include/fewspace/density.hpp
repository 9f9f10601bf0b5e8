// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fewspace/kernel.hpp"
#include "fewspace/space.hpp"

namespace fewspace {

/// One space per equation; n equations in n variables.
class MixedDensityQuery {
public:
    explicit MixedDensityQuery(std::vector<SpaceExpr> spaces) : spaces_(std::move(spaces)) {
        if (spaces_.empty()) throw DimensionError("MixedDensityQuery: no equations");
        const int n = static_cast<int>(spaces_.size());
        for (const auto& s : spaces_)
            if (s.nvars() != n)
                throw DimensionError("MixedDensityQuery: " + std::to_string(n) + " equations but a space has nvars " +
                                     std::to_string(s.nvars()));
    }

    /// n copies of the same space.
    static MixedDensityQuery unmixed(const SpaceExpr& space) {
        return MixedDensityQuery(std::vector<SpaceExpr>(static_cast<std::size_t>(space.nvars()), space));
    }

    int nvars() const noexcept { return static_cast<int>(spaces_.size()); }
    const std::vector<SpaceExpr>& spaces() const noexcept { return spaces_; }

    /// True when every equation uses the same expression object.
    bool is_unmixed() const noexcept {
        for (const auto& s : spaces_)
            if (&s.node() != &spaces_.front().node()) return false;
        return true;
    }

private:
    std::vector<SpaceExpr> spaces_;
};

inline constexpr double kNegativeDensityClamp = 1e-12;

namespace detail {

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Sum of |terms| is returned through `magnitude` for round-off scaling.
inline double mixed_determinant_impl(std::span<const CMatrix> matrices, CMatrix& scratch, double& magnitude) {
    const auto n = static_cast<int>(matrices.size());
    const Eigen::Index dim = matrices.front().rows();
    double total = 0.0;
    magnitude = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        scratch.setZero(dim, dim);
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) scratch += matrices[i];
        const double det = scratch.determinant().real();
        const bool odd = ((n - std::popcount(mask)) & 1) != 0;
        total += odd ? -det : det;
        magnitude += std::abs(det);
    }
    return total;
}

inline void check_square_family(std::span<const CMatrix> matrices) {
    if (matrices.empty()) throw DimensionError("mixed_determinant: no matrices");
    const auto n = static_cast<Eigen::Index>(matrices.size());
    for (const auto& m : matrices)
        if (m.rows() != n || m.cols() != n)
            throw DimensionError("mixed_determinant: expected " + std::to_string(n) + " matrices of size " +
                                 std::to_string(n) + "x" + std::to_string(n));
}

inline double clamp_density(double value, double magnitude) {
    if (value >= 0.0) return value;
    if (value >= -kNegativeDensityClamp * std::max(1.0, magnitude)) return 0.0;
    throw NegativeDensity("density " + std::to_string(value) + " is negative beyond round-off");
}

} // namespace detail

/// Coefficient of l_1 l_2 ... l_n in det(l_1 H_1 + ... + l_n H_n), by
/// inclusion-exclusion over subsets. Equals n! det(H) when all H_i = H.
inline double mixed_determinant(std::span<const CMatrix> matrices) {
    detail::check_square_family(matrices);
    CMatrix scratch;
    double magnitude = 0.0;
    return detail::mixed_determinant_impl(matrices, scratch, magnitude);
}

/// Coefficient of l_1 ... l_n of a homogeneous degree-n polynomial p given
/// its values at the 0/1 indicator vectors. Keys are subset bitmasks
/// (bit i set <=> i in S).
inline double multilinear_coefficient(const std::map<std::uint32_t, double>& values, int n) {
    if (n <= 0 || n > 30) throw DimensionError("multilinear_coefficient: n out of range");
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const auto it = values.find(mask);
        if (it == values.end())
            throw DimensionError("multilinear_coefficient: missing value for subset mask " + std::to_string(mask));
        const bool odd = ((n - std::popcount(mask)) & 1) != 0;
        total += odd ? -it->second : it->second;
    }
    return total;
}

/// Reusable evaluator of the expected-zero density pi^{-n} Mdet(H_1..H_n)
/// with respect to Lebesgue measure on C^n. Holds scratch buffers, so one
/// instance per thread.
class DensityEvaluator {
public:
    explicit DensityEvaluator(MixedDensityQuery query)
        : query_(std::move(query)), unmixed_(query_.is_unmixed()),
          hessians_(static_cast<std::size_t>(query_.nvars())) {}

    const MixedDensityQuery& query() const noexcept { return query_; }

    double operator()(std::span<const cplx> x) {
        const int n = query_.nvars();
        const double scale = std::pow(std::numbers::pi, -n);
        if (unmixed_) {
            log_hessian_into(query_.spaces().front(), x, hessians_.front());
            const double det = hessians_.front().determinant().real();
            const double value = detail::factorial(n) * det;
            return detail::clamp_density(value * scale, std::abs(value) * scale);
        }
        for (int i = 0; i < n; ++i) log_hessian_into(query_.spaces()[i], x, hessians_[i]);
        double magnitude = 0.0;
        const double value = detail::mixed_determinant_impl(hessians_, scratch_, magnitude);
        return detail::clamp_density(value * scale, magnitude * scale);
    }

private:
    MixedDensityQuery query_;
    bool unmixed_;
    std::vector<CMatrix> hessians_;
    CMatrix scratch_;
};

/// Expected number of zeros per unit Lebesgue volume at x.
inline double density_at(const MixedDensityQuery& query, std::span<const cplx> x) {
    DensityEvaluator eval(query);
    return eval(x);
}

} // namespace fewspace
