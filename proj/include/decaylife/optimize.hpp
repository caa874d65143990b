#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "decaylife/lifetime.hpp"
#include "decaylife/rng.hpp"

namespace decaylife {

struct ExtremizeOptions {
  std::size_t grid_b = 256;
  std::size_t grid_theta = 256;
  double tolerance = 1e-10;  // parameter tolerance of the golden-section steps
  std::size_t max_sweeps = 200;
  std::size_t candidates = 4;  // distinct grid optima refined per direction
  std::size_t probes = 64;
  std::uint64_t seed = kDefaultSeed;
  bool corner_search = true;
  bool parallel = true;  // parallel grid evaluation
};

/// One extremum of R.  When `limit` is set the value is a supremum (infimum)
/// reached only along k -> 1, |b_P| = x (k - 1) -> 0; `arg` then holds
/// |b_P| = x (k - 1) and `limit_x` the corner coordinate.
struct Extremum {
  double value;
  PostselectParams arg;
  bool limit = false;
  std::optional<double> limit_x;
  std::vector<double> trace;  // incumbent after the grid and after every sweep
};

struct ExtremumResult {
  Extremum max;
  Extremum min;
  std::size_t grid_b;
  std::size_t grid_theta;
  bool refined;
  bool symmetry_mapped;  // k < 1 was solved at 1/k and reflected back

  double r_max() const { return max.value; }
  double r_min() const { return min.value; }
  const PostselectParams& argmax() const { return max.arg; }
  const PostselectParams& argmin() const { return min.arg; }
};

/// Global max and min of R over |b_P| in [1e-8, 1 - 1e-8], theta in [0, 2 pi).
ExtremumResult extremize(const RegimeConfig& cfg, const ExtremizeOptions& opts = {});

/// Extrema of R(|b_P|) at a fixed theta.
ExtremumResult extremize_fixed_theta(const RegimeConfig& cfg, double theta,
                                     const ExtremizeOptions& opts = {});

/// Extrema of ratio_limit_x over x in [0, x_max], theta in [0, 2 pi).
/// Arguments are reported as (b_mag, theta) = (x, theta) with limit_x = x.
ExtremumResult extremize_limit_x(double x_max = 10.0, const ExtremizeOptions& opts = {});

/// b grid: 1/4 log-spaced on [1e-8, 0.02), the rest uniform up to 1 - 1e-8,
/// with 1/sqrt(2) swapped in for its nearest node.
std::vector<double> default_b_grid(std::size_t n);
/// n uniform points on [0, 2 pi).
std::vector<double> default_theta_grid(std::size_t n);
/// n points log-spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);
/// 200 points log-spaced on [1, 1e4].
std::vector<double> default_k_grid();

struct EnvelopeCurve {
  double dm_over_gamma;
  std::vector<double> k_grid;
  std::vector<double> upper;
  std::vector<double> lower;
  std::vector<ExtremumResult> detail;
};

EnvelopeCurve envelope(double dm_over_gamma, std::span<const double> k_grid,
                       const ExtremizeOptions& opts = {});
EnvelopeCurve envelope_serial(double dm_over_gamma, std::span<const double> k_grid,
                              const ExtremizeOptions& opts = {});

/// Extrema over |b_P| only, theta held fixed, along k_grid.
EnvelopeCurve envelope_fixed_theta(double dm_over_gamma, double theta,
                                   std::span<const double> k_grid,
                                   const ExtremizeOptions& opts = {});

struct RegionSet {
  std::array<EnvelopeCurve, 3> regions;  // dM/Gamma = 1e-3, 1, 1e3
  EnvelopeCurve fixed_theta_border;      // dM/Gamma = 1e3, theta = pi - 0.01
  double fixed_theta;
};

RegionSet region_figure4(std::span<const double> k_grid, const ExtremizeOptions& opts = {});

}  // namespace decaylife
