#pragma once

#include <array>
#include <cstddef>

namespace revpred {

inline constexpr int kMinStar = 1;
inline constexpr int kMaxStar = 5;
inline constexpr std::size_t kNumStars = 5;

/// Every star value in ascending order.
inline constexpr std::array<int, kNumStars> kStars = {1, 2, 3, 4, 5};

constexpr bool is_valid_star(int r) { return r >= kMinStar && r <= kMaxStar; }

/// Position of star `r` in per-star arrays.
constexpr std::size_t star_index(int r) { return static_cast<std::size_t>(r - kMinStar); }

}  // namespace revpred
