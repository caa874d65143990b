#include "decaylife/kernels.hpp"

#include <limits>

namespace decaylife {

namespace {

// Surfaces InvalidParams before any parallel region is entered.
void check_axes(std::span<const double> b_values, std::span<const double> theta_values) {
  for (double b : b_values) PostselectParams(b, 0.0);
  for (double theta : theta_values) PostselectParams(0.5, theta);
}

}  // namespace

double ratio_or_nan(const RegimeConfig& cfg, const PostselectParams& ps) {
  try {
    return ratio_R(cfg, ps);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroPostselection) throw;
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<double> evaluate_ratio_grid(const RegimeConfig& cfg, std::span<const double> b_values,
                                        std::span<const double> theta_values) {
  cfg.validate();
  check_axes(b_values, theta_values);
  const auto nb = static_cast<std::ptrdiff_t>(b_values.size());
  const std::size_t nt = theta_values.size();
  std::vector<double> out(b_values.size() * nt);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nb; ++i) {
    const auto row = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < nt; ++j)
      out[row * nt + j] = ratio_or_nan(cfg, PostselectParams(b_values[row], theta_values[j]));
  }
  return out;
}

std::vector<double> evaluate_ratio_grid_serial(const RegimeConfig& cfg,
                                               std::span<const double> b_values,
                                               std::span<const double> theta_values) {
  cfg.validate();
  check_axes(b_values, theta_values);
  std::vector<double> out;
  out.reserve(b_values.size() * theta_values.size());
  for (double b : b_values)
    for (double theta : theta_values) out.push_back(ratio_or_nan(cfg, PostselectParams(b, theta)));
  return out;
}

std::vector<double> ratio_curve(double dm_over_gamma, std::span<const double> k_grid,
                                const PostselectParams& ps) {
  for (double k : k_grid) RegimeConfig{dm_over_gamma, k}.validate();
  const auto n = static_cast<std::ptrdiff_t>(k_grid.size());
  std::vector<double> out(k_grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = ratio_or_nan({dm_over_gamma, k_grid[idx]}, ps);
  }
  return out;
}

std::vector<double> ratio_curve_serial(double dm_over_gamma, std::span<const double> k_grid,
                                       const PostselectParams& ps) {
  std::vector<double> out;
  out.reserve(k_grid.size());
  for (double k : k_grid) out.push_back(ratio_or_nan({dm_over_gamma, k}, ps));
  return out;
}

}  // namespace decaylife
