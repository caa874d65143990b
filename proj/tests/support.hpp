#pragma once

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "decaylife/oracle/draws.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;
inline const double kSqrt3 = std::sqrt(3.0);

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace testing
