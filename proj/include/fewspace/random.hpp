// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>

namespace fewspace {

namespace detail {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

} // namespace detail

/// Counter-based random stream: the k-th output is a pure function of
/// (key, k), so a stream can be derived for any (seed, index) without
/// touching other streams. Satisfies UniformRandomBitGenerator.
class CounterStream {
public:
    using result_type = std::uint64_t;

    constexpr explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}

    /// Independent stream for sample `index` of a run seeded with `seed`.
    static constexpr CounterStream for_sample(std::uint64_t seed, std::uint64_t index) noexcept {
        return CounterStream(detail::mix64(detail::mix64(seed ^ detail::kGolden) + detail::mix64(index + 1)));
    }

    /// Child stream; distinct tags give unrelated streams.
    constexpr CounterStream split(std::uint64_t tag) const noexcept {
        return CounterStream(detail::mix64(key_ ^ detail::mix64(tag + detail::kGolden)));
    }

    constexpr result_type operator()() noexcept { return detail::mix64(key_ + (++counter_) * detail::kGolden); }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace fewspace
