// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "decaylife/cli/commands.hpp"
#include "decaylife/io.hpp"
#include "decaylife/kernels.hpp"
#include "decaylife/lifetime.hpp"
#include "decaylife/montecarlo.hpp"
#include "decaylife/optimize.hpp"
#include "decaylife/oracle/draws.hpp"
#include "decaylife/oracle/quadrature.hpp"

using namespace decaylife;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& title, double budget_s,
            const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_s) {
    v.pass = false;
    v.detail += " [over time budget]";
  }
  if (!v.pass) ++failures;
  std::printf("%s %-3s %s: %s (%.2f s, budget %.0f s)\n", v.pass ? "PASS" : "FAIL", id.c_str(),
              title.c_str(), v.detail.c_str(), secs, budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict criterion1() {
  const ExtremumResult r = extremize_limit_x();
  const double emax = std::abs(r.r_max() - (2.0 + kSqrt2));
  const double emin = std::abs(r.r_min() - (2.0 - kSqrt2));
  const double xmax = *r.max.limit_x;
  const double xmin = *r.min.limit_x;
  const bool args = std::abs(xmax - (2.0 - kSqrt2) / 4.0) < 1e-6 &&
                    std::abs(xmin - (2.0 + kSqrt2) / 4.0) < 1e-6 &&
                    std::abs(r.argmax().theta() - kPi) < 1e-6 && std::abs(r.argmin().theta() - kPi) < 1e-6;
  return {emax < 1e-9 && emin < 1e-9 && args,
          fmt("max %.12f (err %.1e) at x=%.6f; min %.12f (err %.1e) at x=%.6f", r.r_max(), emax, xmax,
              r.r_min(), emin, xmin)};
}

ExtremumResult case_b() { return extremize({1.0, 1.0 + 1e-9}); }

Verdict criterion2a(const ExtremumResult& r) {
  const double emax = std::abs(r.r_max() - (3.0 + kSqrt3) / 2.0);
  const double emin = std::abs(r.r_min() - (3.0 - kSqrt3) / 2.0);
  return {emax < 1e-3 && emin < 1e-3,
          fmt("R_max %.6f (err %.1e), R_min %.6f (err %.1e)", r.r_max(), emax, r.r_min(), emin)};
}

Verdict criterion2b(const ExtremumResult& r) {
  const RegimeConfig cfg{1.0, 1.0 + 1e-9};
  const WeakValue wmax = weak_value_parametric(cfg, r.argmax());
  const WeakValue wmin = weak_value_parametric(cfg, r.argmin());
  const double emax = std::hypot(wmax.re, wmax.im + (4.0 + 2.0 * kSqrt3));
  const double emin = std::hypot(wmin.re, wmin.im + (4.0 - 2.0 * kSqrt3));
  return {emax < 1e-6 && emin < 1e-6,
          fmt("A_w at argmax (%.6f, %.6f) vs (0, %.6f); at argmin (%.6f, %.6f) vs (0, %.6f)", wmax.re,
              wmax.im, -(4.0 + 2.0 * kSqrt3), wmin.re, wmin.im, -(4.0 - 2.0 * kSqrt3))};
}

Verdict criterion3() {
  const ExtremumResult r = extremize({0.77, 1.0});
  const bool ok = std::abs(r.r_max() - 2.64) <= 0.01 && std::abs(r.r_min() - 0.713) <= 0.01;
  return {ok, fmt("R_max %.5f at (b=%.4f, theta=%.4f), R_min %.5f at (b=%.4f, theta=%.4f); targets 2.64, 0.713",
                  r.r_max(), r.argmax().b_mag(), r.argmax().theta(), r.r_min(), r.argmin().b_mag(),
                  r.argmin().theta())};
}

Verdict criterion4() {
  bool ok = true;
  std::ostringstream os;
  for (double k : {1.0, 2.0, 5.0, 10.0, 100.0}) {
    const ExtremumResult r = extremize({1e3, k});
    const double eu = std::abs(r.r_max() - 2.0 * k / (1.0 + k));
    const double el = std::abs(r.r_min() - 2.0 / (1.0 + k));
    if (eu >= 1e-3 || el >= 1e-3) ok = false;
    os << "k=" << k << " err " << fmt("%.1e/%.1e", eu, el) << (eu >= 1e-3 || el >= 1e-3 ? "!" : "") << "; ";
  }
  return {ok, os.str()};
}

Verdict criterion5() {
  const StateSpec heavy(std::sqrt(0.5), -std::sqrt(0.5));
  double worst_tau = 0.0;
  double worst_r = 0.0;
  for (double k : {1.0, 3.0, 10.0}) {
    for (double eps : {1e-3, 0.77, 1.0, 1e3}) {
      const SystemParams sys = SystemParams::from_ratios(eps, k);
      const CoeffPair c = coeffs(StateSpec::flavor_p(), heavy, BasisMap::symmetric());
      const double tau = lifetime_conditional(sys, c);
      worst_tau = std::max(worst_tau, std::abs(tau * sys.width_heavy() - 1.0));
      const double r = tau / lifetime_unconditional(sys, BasisMap::symmetric(), StateSpec::flavor_p());
      worst_r = std::max(worst_r, std::abs(r - 2.0 / (1.0 + k)));
      worst_r = std::max(worst_r, std::abs(ratio_R({eps, k}, {std::sqrt(0.5), kPi}) - 2.0 / (1.0 + k)));
    }
  }
  return {worst_tau < 1e-12 && worst_r < 1e-12,
          fmt("max |tau*Gamma_H - 1| = %.1e, max |R - 2/(1+k)| = %.1e", worst_tau, worst_r)};
}

Verdict criterion6() {
  Xoshiro256ss rng(0x6a);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SystemParams sys = oracle::random_system(rng);
    const BasisMap b = oracle::random_basis(rng);
    const StateSpec pre = oracle::random_state(rng);
    const StateSpec post = oracle::random_state(rng);
    const double closed = lifetime_conditional(sys, coeffs(pre, post, b));
    const double quad = oracle::quad_conditional_lifetime(sys, b, pre, post);
    worst = std::max(worst, std::abs(closed - quad) / quad);
  }
  double worst_z = 0.0;
  for (int i = 0; i < 50; ++i) {
    const SystemParams sys = oracle::random_system(rng);
    const CoeffPair c = coeffs(oracle::random_state(rng), oracle::random_state(rng), oracle::random_basis(rng));
    const LifetimeEstimate e = estimate_lifetime(sample_conditional(sys, c, 1000000, derive_seed(kDefaultSeed, i)));
    worst_z = std::max(worst_z, std::abs(e.mean - lifetime_conditional(sys, c)) / e.std_error);
  }
  return {worst < 1e-9 && worst_z < 4.0,
          fmt("quadrature max rel err %.2e over 1000; Monte Carlo max |z| %.2f over 50 x 1e6", worst, worst_z)};
}

Verdict criterion7() {
  Xoshiro256ss rng(0x7a);
  double worst_c = 0.0;
  double worst_u = 0.0;
  int skipped = 0;
  for (int done = 0; done < 200;) {
    const SystemParams sys = oracle::random_system(rng);
    const BasisMap b = oracle::random_basis(rng);
    const StateSpec pre = oracle::random_state(rng);
    if (density_pathology(sys, b, pre)) {
      ++skipped;
      continue;
    }
    const CoeffPair c = coeffs(pre, oracle::random_state(rng), b);
    worst_c = std::max(worst_c, std::abs(oracle::quad_mass_conditional(sys, c).value - 1.0));
    worst_u = std::max(worst_u, std::abs(oracle::quad_mass_unconditional(sys, b, pre).value - 1.0));
    ++done;
  }
  return {worst_c < 1e-8 && worst_u < 1e-8,
          fmt("max |mass - 1|: conditional %.1e, unconditional %.1e (%d draws with negative density redrawn)",
              worst_c, worst_u, skipped)};
}

Verdict criterion8() {
  Xoshiro256ss rng(0x8a);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double eps = oracle::log_uniform(rng, 1e-3, 1e3);
    const double k = oracle::log_uniform(rng, 1e-3, 1e3);
    const PostselectParams ps = oracle::random_postselection(rng);
    const double a = ratio_R({eps, k}, ps);
    const double b = ratio_R({eps, 1.0 / k}, {ps.b_mag(), kPi - ps.theta()});
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, a));
  }
  return {worst < 1e-12, fmt("max deviation %.1e", worst)};
}

Verdict criterion9() {
  Xoshiro256ss rng(0x9a);
  double worst = 0.0;
  bool linear = true;
  for (int i = 0; i < 20; ++i) {
    const StateSpec post = oracle::random_postselection(rng).state();
    double eps = 1e-3;
    double km1 = 0.01;
    double dev = sum_rule_check(SystemParams::from_ratios(eps, 1.0 + km1), BasisMap::symmetric(),
                                StateSpec::flavor_p(), post).deviation;
    worst = std::max(worst, dev);
    for (int h = 0; h < 2; ++h) {
      eps /= 2.0;
      km1 /= 2.0;
      const double next = sum_rule_check(SystemParams::from_ratios(eps, 1.0 + km1), BasisMap::symmetric(),
                                         StateSpec::flavor_p(), post).deviation;
      if (next > 0.5 * dev * (1.0 + 1e-6) && next > 1e-14) linear = false;
      dev = next;
    }
  }
  return {worst < 5e-3 && linear,
          fmt("max deviation %.2e at (1e-3, 1.01); halving %s", worst, linear ? "at least linear" : "too slow")};
}

Verdict criterion10() {
  const std::vector<double> k = {1e4};
  const double floor = 2.0 / (1.0 + 1e4);
  bool ok = true;
  std::ostringstream os;
  for (double eps : {1e-3, 1.0, 1e3}) {
    const EnvelopeCurve e = envelope(eps, k);
    const double singular = ratio_R({eps, 1e4}, {std::sqrt(0.5), kPi});
    const bool up = std::abs(e.upper[0] - 2.0) < 0.05;
    const bool low = std::abs(e.lower[0] - floor) < 1e-6 && std::abs(singular - floor) < 1e-6;
    ok = ok && up && low;
    os << fmt("eps=%g upper %.5f lower %.3e; ", eps, e.upper[0], e.lower[0]);
  }
  return {ok, os.str() + fmt("2/(1+k) = %.3e", floor)};
}

Verdict criterion11() {
  const fs::path dir = fs::temp_directory_path() / "decaylife_acceptance_figures";
  fs::remove_all(dir);
  std::ostringstream sink;
  std::vector<json> manifests;
  for (int n = 1; n <= 4; ++n) {
    const int code = cli::run({"decaylife", "figure", std::to_string(n), "--out", dir.string()}, sink, sink);
    if (code != 0) return {false, fmt("figure %d exited %d", n, code)};
    manifests.push_back(json::parse(io::read_file(dir / ("fig" + std::to_string(n) + "_manifest.json"))));
  }
  std::vector<std::string> problems;
  auto curve_params = [](const json& m) {
    std::vector<std::pair<double, double>> out;
    for (const json& c : m.at("curves"))
      if (c.at("caption").get<bool>()) out.emplace_back(c.at("b_mag").get<double>(), c.at("theta").get<double>());
    return out;
  };
  // figure 1: |b_P| = 0.1..0.7, theta = pi, dM/Gamma = 1/1000
  std::vector<std::pair<double, double>> want1;
  for (double b : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}) want1.emplace_back(b, kPi);
  if (curve_params(manifests[0]) != want1 || manifests[0].at("dm_over_gamma") != 1e-3)
    problems.push_back("figure 1 parameters");
  std::vector<std::pair<double, double>> want2;
  for (double b : {0.1, 0.2, 0.3, 0.96}) want2.emplace_back(b, kPi / 2.0);
  for (double b : {0.7, 0.8, 0.9}) want2.emplace_back(b, kPi);
  if (curve_params(manifests[1]) != want2 || manifests[1].at("dm_over_gamma").get<double>() != 1.0 / 1.01)
    problems.push_back("figure 2 parameters");
  std::vector<std::pair<double, double>> want3;
  for (int i = 0; i <= 6; ++i) want3.emplace_back(std::sqrt(0.5), 0.5 * i);
  if (curve_params(manifests[2]) != want3 || manifests[2].at("dm_over_gamma") != 1e3)
    problems.push_back("figure 3 parameters");
  const json& fixed = manifests[3].at("envelopes").back();
  if (fixed.at("theta").get<double>() != kPi - 0.01 || manifests[3].at("envelopes").size() != 7)
    problems.push_back("figure 4 borders");

  double worst_curve = 0.0;
  for (const json& c : manifests[0].at("curves")) {
    const io::Table t = io::read_csv(dir / c.at("file").get<std::string>());
    if (t.columns[0].front() != 1.0) problems.push_back("figure 1 grid does not start at k = 1");
    worst_curve = std::max(worst_curve, std::abs(t.columns[1].front() - 1.0));
  }
  double upper = 0.0;
  double lower = 0.0;
  for (const json& e : manifests[0].at("envelopes")) {
    const double v = io::read_csv(dir / e.at("file").get<std::string>()).columns[1].front();
    (e.at("border") == "upper" ? upper : lower) = v;
  }
  if (worst_curve > 1e-6) problems.push_back("figure 1 curves miss R = 1 at k = 1");
  if (std::abs(upper - (2.0 + kSqrt2)) > 1e-6 || std::abs(lower - (2.0 - kSqrt2)) > 1e-6)
    problems.push_back("figure 1 envelope at k = 1");
  fs::remove_all(dir);
  std::string detail = fmt("fig 1 max |R(1) - 1| = %.1e, envelope at k=1: %.9f / %.9f", worst_curve, upper, lower);
  for (const std::string& p : problems) detail += "; mismatch: " + p;
  return {problems.empty(), detail};
}

}  // namespace

int main() {
  report("1", "corner extrema 2 +- sqrt 2", 1, criterion1);
  report("2a", "case-B extrema (3 +- sqrt 3)/2", 30, [] { return criterion2a(case_b()); });
  report("2b", "case-B weak values (0, -(4 +- 2 sqrt 3))", 30, [] { return criterion2b(case_b()); });
  report("3", "B-meson extrema 2.64 / 0.713", 30, criterion3);
  report("4", "large dM/Gamma envelope 2k/(1+k), 2/(1+k)", 120, criterion4);
  report("5", "post = |P_H>: tau = 1/Gamma_H, R = 2/(1+k)", 1, criterion5);
  report("6", "oracle triangle", 300, criterion6);
  report("7", "normalization of both densities", 60, criterion7);
  report("8", "exchange symmetry", 1, criterion8);
  report("9", "sum rule", 1, criterion9);
  report("10", "large-k universality", 60, criterion10);
  report("11", "figure reproduction", 300, criterion11);
  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
