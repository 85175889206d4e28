#pragma once

#include <cstdint>

namespace icnsim {

// All simulation time is integer microseconds. No floating-point time
// anywhere, so identical runs are bit-identical.
using Timestamp = std::uint64_t;
using Duration = std::uint64_t;

inline constexpr Duration kDefaultInterestLifetimeUs = 4'000'000;
inline constexpr Duration kDefaultRedirectGraceUs = 500'000;

}  // namespace icnsim
