#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "decaylife/distributions.hpp"
#include "decaylife/rng.hpp"

namespace decaylife {

enum class SampleKind { unconditional, conditional };

struct SampleBatch {
  std::vector<double> times;
  std::uint64_t seed;
  std::size_t n;
  SampleKind kind;
};

struct LifetimeEstimate {
  double mean;
  double std_error;  // sample standard deviation / sqrt(n)
  std::size_t n;
};

struct SampleOptions {
  bool stratified = false;  // u_i = (i + U_i) / n instead of U_i
  bool parallel = true;
};

/// Draws are split into chunks of this many; chunk c uses derive_seed(seed, c).
inline constexpr std::size_t kSampleChunk = 4096;

/// Inverse-transform draws from N(t|Psi -> Phi).
SampleBatch sample_conditional(const SystemParams& sys, const CoeffPair& c, std::size_t n,
                               std::uint64_t seed, const SampleOptions& opts = {});
/// Inverse-transform draws from N(t|Psi).  Throws NonMonotoneCDF when the
/// density goes negative somewhere.
SampleBatch sample_unconditional(const SystemParams& sys, const BasisMap& basis,
                                 const StateSpec& pre, std::size_t n, std::uint64_t seed,
                                 const SampleOptions& opts = {});

/// Serial references for the two samplers above; output is bit-identical.
SampleBatch sample_conditional_serial(const SystemParams& sys, const CoeffPair& c, std::size_t n,
                                      std::uint64_t seed, bool stratified = false);
SampleBatch sample_unconditional_serial(const SystemParams& sys, const BasisMap& basis,
                                        const StateSpec& pre, std::size_t n, std::uint64_t seed,
                                        bool stratified = false);

/// Throws InsufficientSamples for n < 2.
LifetimeEstimate estimate_lifetime(const SampleBatch& batch);
LifetimeEstimate estimate_lifetime(std::span<const double> times);

/// sup |F_n - F| for the empirical distribution of `times`.
double ks_statistic(std::span<const double> times, const std::function<double(double)>& cdf);
/// Asymptotic 1% critical value 1.6276 / sqrt(n).
double ks_critical_1pct(std::size_t n);

/// Solves S(t) = target for a decreasing tail S, as used by the samplers.
class TailInverter {
 public:
  /// Conditional tail: integral of the transition probability from t, normalized.
  static TailInverter conditional(const SystemParams& sys, const CoeffPair& c);
  /// Unconditional tail: the survival probability.
  static TailInverter unconditional(const SystemParams& sys, const BasisMap& basis,
                                    const StateSpec& pre);

  double tail(double t) const;
  double density(double t) const;
  /// t with tail(t) = target, target in (0, 1].
  double invert(double target) const;
  /// tail(t_max) < 1e-12.
  double t_max() const { return t_max_; }

 private:
  TailInverter(ModeSum law, bool conditional, double norm);

  ModeSum law_;
  bool conditional_;
  double norm_;
  double t_max_;
  double tail_at_max_;
  double tail_rate_;
};

}  // namespace decaylife
