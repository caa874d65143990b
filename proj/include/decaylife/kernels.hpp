#pragma once

// Data-parallel evaluation of R.  Every OpenMP kernel has a *_serial twin
// that produces bit-identical output; tests compare the two.

#include <span>
#include <vector>

#include "decaylife/lifetime.hpp"

namespace decaylife {

/// R on the tensor grid b_values x theta_values, row-major in b.
/// Infeasible points (vanishing denominator) are NaN.
std::vector<double> evaluate_ratio_grid(const RegimeConfig& cfg, std::span<const double> b_values,
                                        std::span<const double> theta_values);
std::vector<double> evaluate_ratio_grid_serial(const RegimeConfig& cfg,
                                               std::span<const double> b_values,
                                               std::span<const double> theta_values);

/// R(k) at fixed postselection along k_grid.
std::vector<double> ratio_curve(double dm_over_gamma, std::span<const double> k_grid,
                                const PostselectParams& ps);
std::vector<double> ratio_curve_serial(double dm_over_gamma, std::span<const double> k_grid,
                                       const PostselectParams& ps);

/// R or NaN when the postselection is infeasible.
double ratio_or_nan(const RegimeConfig& cfg, const PostselectParams& ps);

}  // namespace decaylife
