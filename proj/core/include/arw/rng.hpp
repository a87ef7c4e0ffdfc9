#pragma once

// Counter-based Philox4x32-10 (Salmon et al., Random123): a keyed bijection
// on 128-bit counters, so any (key, counter) block can be generated
// independently of every other one.

#include <array>
#include <cstdint>
#include <string_view>

namespace arw {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

inline constexpr std::string_view kStreamAlgorithm = "philox4x32-10/erfc_inv";

/// Uniform in the open interval (0, 1) from 64 random bits (52 used).
double uniform_open(std::uint64_t bits) noexcept;

/// Inverse-CDF normal with mean 0 and variance 1/2: -erfc^{-1}(2u).
double half_variance_normal(double u);

/// The two normal variates (variance 1/2 each) for stream (seed, trial, index).
std::array<double, 2> coefficient_pair(std::uint64_t master_seed, std::uint64_t trial_index, std::uint64_t index);

}  // namespace arw
