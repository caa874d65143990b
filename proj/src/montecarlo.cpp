#include "decaylife/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace decaylife {

namespace {

constexpr double kTailTarget = 1e-12;
constexpr double kSolveTolerance = 1e-12;
constexpr int kMaxIterations = 200;
constexpr int kMaxDoublings = 64;

// Chunk c covers [c * kSampleChunk, min(n, (c + 1) * kSampleChunk)).
void fill_chunk(std::vector<double>& out, std::size_t chunk, std::size_t n, std::uint64_t seed,
                bool stratified, const TailInverter& inv) {
  Xoshiro256ss rng(derive_seed(seed, chunk));
  const std::size_t begin = chunk * kSampleChunk;
  const std::size_t end = std::min(n, begin + kSampleChunk);
  for (std::size_t i = begin; i < end; ++i) {
    double u = rng.uniform();
    if (stratified) u = (static_cast<double>(i) + u) / static_cast<double>(n);
    out[i] = inv.invert(1.0 - u);
  }
}

std::size_t chunk_count(std::size_t n) { return (n + kSampleChunk - 1) / kSampleChunk; }

void require_draws(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "sample count must be >= 1");
}

SampleBatch run_parallel(const TailInverter& inv, std::size_t n, std::uint64_t seed,
                         bool stratified, SampleKind kind) {
  SampleBatch batch{std::vector<double>(n), seed, n, kind};
  const auto chunks = static_cast<std::ptrdiff_t>(chunk_count(n));
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < chunks; ++c)
    fill_chunk(batch.times, static_cast<std::size_t>(c), n, seed, stratified, inv);
  return batch;
}

SampleBatch run_serial(const TailInverter& inv, std::size_t n, std::uint64_t seed, bool stratified,
                       SampleKind kind) {
  SampleBatch batch{std::vector<double>(n), seed, n, kind};
  for (std::size_t c = 0; c < chunk_count(n); ++c)
    fill_chunk(batch.times, c, n, seed, stratified, inv);
  return batch;
}

void require_monotone(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre) {
  if (const auto t = density_pathology(sys, basis, pre)) {
    std::ostringstream os;
    os << "N(t|Psi) < 0 near t = " << *t << ", survival is not a valid tail";
    throw Error(ErrorKind::NonMonotoneCDF, os.str());
  }
}

}  // namespace

TailInverter::TailInverter(ModeSum law, bool conditional, double norm)
    : law_(std::move(law)), conditional_(conditional), norm_(norm) {
  const SystemParams& sys = law_.system();
  t_max_ = 50.0 / std::min(sys.width_light(), sys.width_heavy());
  for (int i = 0; i < kMaxDoublings && tail(t_max_) >= kTailTarget; ++i) t_max_ *= 2.0;
  tail_at_max_ = tail(t_max_);
  tail_rate_ = law_.dominant_rate();
}

TailInverter TailInverter::conditional(const SystemParams& sys, const CoeffPair& c) {
  return {ModeSum::transition(sys, c), true, norm_integral(sys, c)};
}

TailInverter TailInverter::unconditional(const SystemParams& sys, const BasisMap& basis,
                                         const StateSpec& pre) {
  return {ModeSum::survival(sys, basis, pre), false, 1.0};
}

double TailInverter::tail(double t) const {
  const double s = conditional_ ? law_.tail_integral(t) / norm_ : law_.value(t);
  return std::clamp(s, 0.0, 1.0);
}

double TailInverter::density(double t) const {
  return conditional_ ? law_.value(t) / norm_ : law_.decay_rate(t);
}

double TailInverter::invert(double target) const {
  if (target >= 1.0) return 0.0;
  if (target <= tail_at_max_) {
    if (target <= 0.0) return t_max_;
    return t_max_ + std::log(tail_at_max_ / target) / tail_rate_;
  }

  // Safeguarded Newton on tail(t) - target; tail decreases so
  // tail(lo) > target >= tail(hi) throughout.
  double lo = 0.0;
  double hi = t_max_;
  const DerivedParams d = derive(law_.system());
  double t = std::clamp(-std::log(target) / d.gamma, lo, hi);
  for (int it = 0; it < kMaxIterations; ++it) {
    const double r = tail(t) - target;
    if (std::abs(r) < kSolveTolerance) break;
    if (r > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    const double rho = density(t);
    double next = rho > 0.0 ? t + r / rho : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  for (int polish = 0; polish < 2; ++polish) {
    const double rho = density(t);
    if (!(rho > 0.0)) break;
    const double next = t + (tail(t) - target) / rho;
    if (next >= 0.0 && std::isfinite(next)) t = next;
  }
  return t;
}

SampleBatch sample_conditional(const SystemParams& sys, const CoeffPair& c, std::size_t n,
                               std::uint64_t seed, const SampleOptions& opts) {
  require_draws(n);
  const TailInverter inv = TailInverter::conditional(sys, c);
  return opts.parallel ? run_parallel(inv, n, seed, opts.stratified, SampleKind::conditional)
                       : run_serial(inv, n, seed, opts.stratified, SampleKind::conditional);
}

SampleBatch sample_unconditional(const SystemParams& sys, const BasisMap& basis,
                                 const StateSpec& pre, std::size_t n, std::uint64_t seed,
                                 const SampleOptions& opts) {
  require_draws(n);
  require_monotone(sys, basis, pre);
  const TailInverter inv = TailInverter::unconditional(sys, basis, pre);
  return opts.parallel ? run_parallel(inv, n, seed, opts.stratified, SampleKind::unconditional)
                       : run_serial(inv, n, seed, opts.stratified, SampleKind::unconditional);
}

SampleBatch sample_conditional_serial(const SystemParams& sys, const CoeffPair& c, std::size_t n,
                                      std::uint64_t seed, bool stratified) {
  require_draws(n);
  return run_serial(TailInverter::conditional(sys, c), n, seed, stratified,
                    SampleKind::conditional);
}

SampleBatch sample_unconditional_serial(const SystemParams& sys, const BasisMap& basis,
                                        const StateSpec& pre, std::size_t n, std::uint64_t seed,
                                        bool stratified) {
  require_draws(n);
  require_monotone(sys, basis, pre);
  return run_serial(TailInverter::unconditional(sys, basis, pre), n, seed, stratified,
                    SampleKind::unconditional);
}

LifetimeEstimate estimate_lifetime(std::span<const double> times) {
  const std::size_t n = times.size();
  if (n < 2) throw Error(ErrorKind::InsufficientSamples, "need at least two samples");
  double mean = 0.0;
  for (double t : times) mean += t;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double t : times) ss += (t - mean) * (t - mean);
  const double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

LifetimeEstimate estimate_lifetime(const SampleBatch& batch) { return estimate_lifetime(batch.times); }

double ks_statistic(std::span<const double> times, const std::function<double(double)>& cdf) {
  std::vector<double> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace decaylife
