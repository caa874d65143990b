#include "decaylife/cli/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "decaylife/io.hpp"
#include "decaylife/kernels.hpp"
#include "decaylife/montecarlo.hpp"
#include "decaylife/optimize.hpp"
#include "decaylife/oracle/direct.hpp"
#include "decaylife/oracle/draws.hpp"
#include "decaylife/oracle/quadrature.hpp"

namespace decaylife::cli {

namespace {

using oracle::random_basis;
using oracle::random_postselection;
using oracle::random_state;
using oracle::random_system;

struct Worst {
  double value = 0.0;
  void update(double x) { value = std::isnan(x) ? INFINITY : std::max(value, x); }
};

std::string describe(double worst, double tol) {
  std::ostringstream os;
  os << "worst " << worst << " (tolerance " << tol << ")";
  return os.str();
}

PropertyResult bounded(std::string name, double worst, double tol) {
  return {std::move(name), worst <= tol, describe(worst, tol)};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

PropertyResult survival_at_zero(Xoshiro256ss& rng, int draws) {
  Worst w;
  for (int i = 0; i < draws; ++i) {
    const BasisMap basis = random_basis(rng);
    const MassBasisAmps a = flavor_to_mass(random_state(rng), basis);
    w.update(std::abs(survival(random_system(rng), basis, a, 0.0) - 1.0));
  }
  return bounded("core.survival_at_zero", w.value, 1e-12);
}

PropertyResult basis_round_trip(Xoshiro256ss& rng, int draws) {
  Worst w;
  for (int i = 0; i < draws; ++i) {
    const BasisMap basis = random_basis(rng);
    const StateSpec s = random_state(rng);
    const auto [p, pbar] = mass_to_flavor(flavor_to_mass(s, basis), basis);
    w.update(std::max(std::abs(p - s.a_p()), std::abs(pbar - s.a_pbar())));
  }
  return bounded("core.basis_round_trip", w.value, 1e-12);
}

PropertyResult overlap_conjugate(Xoshiro256ss& rng, int draws) {
  Worst w;
  for (int i = 0; i < draws; ++i) {
    const BasisMap basis = random_basis(rng);
    const Eigen::Matrix2cd s = oracle::eigenvector_matrix(basis);
    const cplx hl = s.col(1).dot(s.col(0));
    const cplx lh = s.col(0).dot(s.col(1));
    w.update(std::abs(eigen_overlap(basis) - hl) + std::abs(std::conj(eigen_overlap(basis)) - lh));
  }
  return bounded("core.overlap_conjugate", w.value, 1e-12);
}

PropertyResult amplitude_oracle(Xoshiro256ss& rng, int draws) {
  Worst w;
  for (int i = 0; i < draws; ++i) {
    const SystemParams sys = random_system(rng);
    const BasisMap basis = random_basis(rng);
    const StateSpec pre = random_state(rng);
    const StateSpec post = random_state(rng);
    const double t = oracle::log_uniform(rng, 1e-3, 5.0) / derive(sys).gamma;
    const CoeffPair c = coeffs(pre, post, basis);
    w.update(std::abs(postselect_prob(sys, c, t) -
                      oracle::transition_probability(sys, basis, pre, post, t)));
  }
  return bounded("distributions.amplitude_oracle", w.value, 1e-12);
}

PropertyResult moments_vs_quadrature(Xoshiro256ss& rng, int draws) {
  Worst w;
  for (int i = 0; i < draws; ++i) {
    const SystemParams sys = random_system(rng);
    const CoeffPair c = coeffs(random_state(rng), random_state(rng), random_basis(rng));
    w.update(rel(norm_integral(sys, c), oracle::quad_norm(sys, c).value));
    w.update(rel(first_moment_integral(sys, c), oracle::quad_first_moment(sys, c).value));
  }
  return bounded("distributions.moments_vs_quadrature", w.value, 1e-10);
}

PropertyResult normalization(Xoshiro256ss& rng, int draws) {
  Worst w;
  for (int i = 0; i < draws; ++i) {
    const SystemParams sys = random_system(rng);
    const BasisMap basis = BasisMap::restricted(0.05 + 0.9 * rng.uniform());
    const StateSpec pre = random_state(rng);
    const CoeffPair c = coeffs(pre, random_state(rng), basis);
    w.update(std::abs(oracle::quad_mass_conditional(sys, c).value - 1.0));
    if (!density_pathology(sys, basis, pre))
      w.update(std::abs(oracle::quad_mass_unconditional(sys, basis, pre).value - 1.0));
  }
  return bounded("distributions.normalization", w.value, 1e-8);
}

PropertyResult cdf_monotone(Xoshiro256ss& rng, int draws) {
  double worst_drop = 0.0;
  for (int i = 0; i < draws; ++i) {
    const SystemParams sys = random_system(rng);
    const CoeffPair c = coeffs(random_state(rng), random_state(rng), random_basis(rng));
    double prev = -1.0;
    for (double t : default_time_grid(sys, truncation_time(sys), 16)) {
      const double f = conditional_cdf(sys, c, t);
      worst_drop = std::max(worst_drop, prev - f);
      prev = f;
    }
  }
  return bounded("distributions.cdf_monotone", worst_drop, 1e-14);
}

PropertyResult exchange_symmetry(Xoshiro256ss& rng, int draws) {
  Worst w;
  for (int i = 0; i < draws; ++i) {
    const double eps = oracle::log_uniform(rng, 1e-3, 1e3);
    const double k = oracle::log_uniform(rng, 1e-3, 1e3);
    const PostselectParams ps = random_postselection(rng);
    const double a = ratio_R({eps, k}, ps);
    const double b = ratio_R({eps, 1.0 / k}, PostselectParams(ps.b_mag(), std::numbers::pi - ps.theta()));
    w.update(std::abs(a - b));
  }
  return bounded("lifetime.exchange_symmetry", w.value, 1e-12);
}

PropertyResult two_path(Xoshiro256ss& rng, int draws) {
  Worst w;
  for (int i = 0; i < draws; ++i) {
    const RegimeConfig cfg{oracle::log_uniform(rng, 1e-3, 1e3), oracle::log_uniform(rng, 1.0, 1e3)};
    const PostselectParams ps = random_postselection(rng);
    const SystemParams sys = cfg.system();
    const CoeffPair c = coeffs(StateSpec::flavor_p(), ps.state(), BasisMap::symmetric());
    const double full = lifetime_conditional(sys, c) /
                        lifetime_unconditional(sys, BasisMap::symmetric(), StateSpec::flavor_p());
    w.update(rel(ratio_R(cfg, ps), full));
  }
  return bounded("lifetime.two_path", w.value, 1e-10);
}

PropertyResult regime_consistency(Xoshiro256ss& rng, int draws) {
  Worst w;
  for (int i = 0; i < draws; ++i) {
    const double k = oracle::log_uniform(rng, 1.0, 1e3);
    const PostselectParams ps = random_postselection(rng);
    const double b = ps.b_mag();
    const double th = ps.theta();
    w.update(std::abs(ratio_caseA(k, b, th) - ratio_R({1e-6, k}, ps)));
    w.update(std::abs(ratio_caseB(k, b, th) - ratio_R({1.0, k}, ps)));
    w.update(std::abs(ratio_caseC(k, b, th) - ratio_R({1e6, k}, ps)));
  }
  return bounded("lifetime.regime_consistency", w.value, 1e-5);
}

PropertyResult weak_value_paths(Xoshiro256ss& rng, int draws) {
  Worst w;
  for (int i = 0; i < draws; ++i) {
    const RegimeConfig cfg{oracle::log_uniform(rng, 1e-3, 1e3), oracle::log_uniform(rng, 1e-2, 1e2)};
    const PostselectParams ps = random_postselection(rng);
    const SystemParams sys = cfg.system();
    const WeakValue a = weak_value(sys, restricted_coeffs(ps));
    const WeakValue b = weak_value_parametric(cfg, ps);
    const WeakValue m =
        oracle::weak_value_matrix(sys, BasisMap::symmetric(), StateSpec::flavor_p(), ps.state());
    const double scale = std::max({1.0, std::abs(b.re), std::abs(b.im)});
    w.update((std::abs(a.re - b.re) + std::abs(a.im - b.im)) / scale);
    w.update((std::abs(m.re - b.re) + std::abs(m.im - b.im)) / scale);
  }
  return bounded("lifetime.weak_value_paths", w.value, 1e-10);
}

PropertyResult sum_rule_linear() {
  const StateSpec post(cplx(0.6, 0.0), std::polar(0.8, 0.9));
  std::vector<double> dev;
  double eps = 1e-3;
  for (int i = 0; i < 3; ++i, eps /= 2.0) {
    const SystemParams sys = SystemParams::from_ratios(eps, 1.0 + 10.0 * eps);
    dev.push_back(sum_rule_check(sys, BasisMap::symmetric(), StateSpec::flavor_p(), post).deviation);
  }
  const bool pass = dev[0] < 5e-3 && dev[1] <= 0.5 * dev[0] && dev[2] <= 0.5 * dev[1];
  std::ostringstream os;
  os << "deviations " << dev[0] << ", " << dev[1] << ", " << dev[2];
  return {"lifetime.sum_rule_linear", pass, os.str()};
}

PropertyResult linear_convergence() {
  const PostselectParams ps(0.4, 2.0);
  std::vector<double> err;
  for (double eps : {1e-2, 5e-3, 2.5e-3}) {
    const SystemParams sys = SystemParams::from_ratios(eps, 1.0 + eps);
    const CoeffPair c = restricted_coeffs(ps);
    const double exact = lifetime_conditional(sys, c);
    err.push_back(std::abs(lifetime_linear(sys, c).tau - exact) / exact);
  }
  const bool pass = err[1] <= 0.5 * err[0] * 1.05 && err[2] <= 0.5 * err[1] * 1.05;
  std::ostringstream os;
  os << "errors " << err[0] << ", " << err[1] << ", " << err[2];
  return {"lifetime.linear_convergence", pass, os.str()};
}

PropertyResult probe_soundness(std::uint64_t seed, int probes) {
  const RegimeConfig cfg{1.0, 2.0};
  const ExtremumResult r = extremize(cfg);
  Xoshiro256ss rng(seed);
  double excess = 0.0;
  for (int i = 0; i < probes; ++i) {
    const double R = ratio_R(cfg, PostselectParams(rng.uniform(), 2.0 * std::numbers::pi * rng.uniform()));
    excess = std::max({excess, R - r.r_max(), r.r_min() - R});
  }
  return bounded("optimize.probe_soundness", excess, 1e-6);
}

PropertyResult envelope_symmetry() {
  const std::vector<double> ks{1.5, 3.0, 20.0};
  std::vector<double> inv;
  for (double k : ks) inv.push_back(1.0 / k);
  const EnvelopeCurve a = envelope(0.5, ks);
  const EnvelopeCurve b = envelope(0.5, inv);
  Worst w;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    w.update(std::abs(a.upper[i] - b.upper[i]));
    w.update(std::abs(a.lower[i] - b.lower[i]));
  }
  return bounded("optimize.envelope_symmetry", w.value, 1e-9);
}

PropertyResult sampler_mean(std::uint64_t seed, int configs, std::size_t n) {
  Xoshiro256ss rng(seed);
  double worst_z = 0.0;
  for (int i = 0; i < configs; ++i) {
    const SystemParams sys = random_system(rng);
    const CoeffPair c = coeffs(random_state(rng), random_state(rng), random_basis(rng));
    const LifetimeEstimate e = estimate_lifetime(sample_conditional(sys, c, n, derive_seed(seed, i)));
    worst_z = std::max(worst_z, std::abs(e.mean - lifetime_conditional(sys, c)) / e.std_error);
  }
  return bounded("montecarlo.mean_vs_closed_form", worst_z, 4.0);
}

PropertyResult sampler_determinism(std::uint64_t seed) {
  const SystemParams sys = SystemParams::from_ratios(0.77, 2.0);
  const CoeffPair c = restricted_coeffs(PostselectParams(0.3, 1.0));
  const SampleBatch a = sample_conditional(sys, c, 10000, seed);
  const SampleBatch b = sample_conditional_serial(sys, c, 10000, seed);
  const SampleBatch again = sample_conditional(sys, c, 10000, seed);
  const bool pass = a.times == b.times && a.times == again.times;
  return {"montecarlo.determinism", pass, pass ? "parallel, serial and repeat runs identical" : "streams differ"};
}

PropertyResult csv_round_trip(Xoshiro256ss& rng, int draws) {
  io::Table t{{"x"}, {{}}};
  for (int i = 0; i < draws; ++i) {
    const double mag = std::exp(80.0 * (rng.uniform() - 0.5));
    t.columns[0].push_back((rng.uniform() - 0.5) * mag);
  }
  const io::Table back = io::parse_csv(io::to_csv(t));
  const bool pass = back.columns == t.columns;
  return {"io.csv_round_trip", pass, pass ? "bit-exact" : "mismatch"};
}

}  // namespace

std::vector<PropertyResult> run_validation(std::uint64_t seed, bool quick) {
  const int scale = quick ? 1 : 5;
  Xoshiro256ss rng(seed);
  std::vector<PropertyResult> out;
  out.push_back(survival_at_zero(rng, 200 * scale));
  out.push_back(basis_round_trip(rng, 200 * scale));
  out.push_back(overlap_conjugate(rng, 200 * scale));
  out.push_back(amplitude_oracle(rng, 200 * scale));
  out.push_back(moments_vs_quadrature(rng, 10 * scale));
  out.push_back(normalization(rng, 10 * scale));
  out.push_back(cdf_monotone(rng, 10 * scale));
  out.push_back(exchange_symmetry(rng, 200 * scale));
  out.push_back(two_path(rng, 200 * scale));
  out.push_back(regime_consistency(rng, 200 * scale));
  out.push_back(weak_value_paths(rng, 200 * scale));
  out.push_back(sum_rule_linear());
  out.push_back(linear_convergence());
  out.push_back(probe_soundness(seed, 2000 * scale));
  out.push_back(envelope_symmetry());
  out.push_back(sampler_mean(seed, 2 * scale, 20000));
  out.push_back(sampler_determinism(seed));
  out.push_back(csv_round_trip(rng, 1000 * scale));
  return out;
}

}  // namespace decaylife::cli
