#include "support.hpp"

#include "decaylife/lifetime.hpp"
#include "decaylife/oracle/direct.hpp"
#include "decaylife/oracle/quadrature.hpp"

using namespace decaylife;
using namespace testing;

namespace {

// R from full state objects, without the restricted closed forms.
double two_path_ratio(double eps, double k, const PostselectParams& ps) {
  const SystemParams sys = SystemParams::from_ratios(eps, k);
  const CoeffPair c = coeffs(StateSpec::flavor_p(), ps.state(), BasisMap::symmetric());
  return lifetime_conditional(sys, c) /
         lifetime_unconditional(sys, BasisMap::symmetric(), StateSpec::flavor_p());
}

const StateSpec kHeavy(std::sqrt(0.5), -std::sqrt(0.5));

}  // namespace

TEST_SUITE("lifetime") {

TEST_CASE("PostselectParams") {
  const PostselectParams ps(0.6, -1.0);
  CHECK(ps.theta() == doctest::Approx(2.0 * kPi - 1.0));
  CHECK(ps.b_bar() == doctest::Approx(0.8));
  CHECK_THROWS_AS(PostselectParams(1.1, 0.0), Error);
  CHECK_THROWS_AS(PostselectParams(-0.1, 0.0), Error);
  CHECK_THROWS_AS(PostselectParams(0.5, INFINITY), Error);
  CHECK_THROWS_AS((RegimeConfig{-1.0, 1.0}.validate()), Error);
  CHECK_THROWS_AS((RegimeConfig{1.0, 0.0}.validate()), Error);
}

TEST_CASE("canonicalize") {
  const CanonicalRegime r = canonicalize(0.25, 1.0);
  CHECK(r.k == 4.0);
  CHECK(r.theta == doctest::Approx(kPi - 1.0));
  CHECK(r.symmetry_mapped);
  CHECK_FALSE(canonicalize(2.0, 1.0).symmetry_mapped);
}

TEST_CASE("lifetime_unconditional examples") {
  const SystemParams flat(0.0, 2.0, 1.0, 1.0);
  Xoshiro256ss rng(31);
  for (int i = 0; i < 20; ++i)
    CHECK(lifetime_unconditional(flat, BasisMap::symmetric(), oracle::random_state(rng)) ==
          doctest::Approx(1.0).epsilon(1e-14));
  const SystemParams sys = SystemParams::from_ratios(0.5, 3.0);
  CHECK(lifetime_unconditional(sys, BasisMap::symmetric(), StateSpec::flavor_p()) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(restricted_lifetime({0.5, 3.0}) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("lifetime_unconditional matches quadrature of t N(t)") {
  Xoshiro256ss rng(32);
  for (int i = 0; i < 200; ++i) {
    const SystemParams sys = oracle::random_system(rng);
    const BasisMap b = oracle::random_basis(rng);
    const StateSpec pre = oracle::random_state(rng);
    CHECK(rel_err(lifetime_unconditional(sys, b, pre),
                  oracle::quad_unconditional_lifetime(sys, b, pre)) < 1e-9);
  }
}

TEST_CASE("lifetime_conditional examples") {
  for (double k : {1.0, 3.0, 10.0}) {
    const SystemParams sys = SystemParams::from_ratios(0.77, k);
    const CoeffPair c = coeffs(StateSpec::flavor_p(), kHeavy, BasisMap::symmetric());
    CHECK(lifetime_conditional(sys, c) == doctest::Approx(1.0 / sys.width_heavy()).epsilon(1e-12));
  }
  const SystemParams sys(0.0, 1.0, 2.5, 1.0);
  CHECK(lifetime_conditional(sys, {1.0, 0.0}) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("lifetime_conditional matches quadrature through the matrix propagator") {
  Xoshiro256ss rng(33);
  for (int i = 0; i < 200; ++i) {
    const SystemParams sys = oracle::random_system(rng);
    const BasisMap b = oracle::random_basis(rng);
    const StateSpec pre = oracle::random_state(rng);
    const StateSpec post = oracle::random_state(rng);
    CHECK(rel_err(lifetime_conditional(sys, coeffs(pre, post, b)),
                  oracle::quad_conditional_lifetime(sys, b, pre, post)) < 1e-9);
  }
}

TEST_CASE("weak_value examples and errors") {
  const SystemParams sys(0.0, 1.0, 1.0, 1.0);
  const WeakValue w = weak_value(sys, {0.4, 0.4});
  CHECK(std::abs(w.re) < 1e-16);
  CHECK(std::abs(w.im) < 1e-16);
  try {
    weak_value(sys, {0.5, -0.5});
    FAIL("expected OrthogonalPrePost");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OrthogonalPrePost);
  }
  try {
    weak_value(SystemParams(0.0, 0.0, 1.0, 2.0), {0.5, 0.2});
    FAIL("expected DegenerateMass");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateMass);
  }
  // g A_w stays finite at dM = 0
  const cplx gaw = coupled_weak_value(SystemParams(0.0, 0.0, 1.0, 2.0), {0.5, 0.2});
  CHECK(std::isfinite(gaw.real()));
  CHECK(std::isfinite(gaw.imag()));
}

TEST_CASE("weak values match the matrix form") {
  Xoshiro256ss rng(34);
  for (int i = 0; i < 500; ++i) {
    SystemParams sys = oracle::random_system(rng);
    const BasisMap b = oracle::random_basis(rng);
    const StateSpec pre = oracle::random_state(rng);
    const StateSpec post = oracle::random_state(rng);
    const CoeffPair c = coeffs(pre, post, b);
    const cplx direct = oracle::coupled_weak_value_matrix(sys, b, pre, post);
    const cplx closed = coupled_weak_value(sys, c);
    CHECK(std::abs(direct - closed) < 1e-9 * std::max(1.0, std::abs(direct)));
    const WeakValue wm = oracle::weak_value_matrix(sys, b, pre, post);
    const WeakValue w = weak_value(sys, c);
    const double scale = std::max(1.0, std::hypot(wm.re, wm.im));
    CHECK(std::abs(w.re - wm.re) < 1e-9 * scale);
    CHECK(std::abs(w.im - wm.im) < 1e-9 * scale);
  }
  const SystemParams degenerate(1.0, 1.0, 0.5, 3.0);
  const cplx d = coupled_weak_value(degenerate, coeffs(StateSpec::flavor_p(),
                                                       StateSpec(0.6, cplx(0, 0.8)),
                                                       BasisMap::symmetric()));
  const cplx dm = oracle::coupled_weak_value_matrix(degenerate, BasisMap::symmetric(),
                                                    StateSpec::flavor_p(),
                                                    StateSpec(0.6, cplx(0, 0.8)));
  CHECK(std::abs(d - dm) < 1e-12);
}

TEST_CASE("weak_value_parametric examples") {
  const RegimeConfig unit{0.77, 1.0};
  for (double b : {0.1, 0.5, 0.9}) {
    for (double theta : {0.0, kPi}) {
      CHECK(std::abs(weak_value_parametric(unit, {b, theta}).im) < 1e-14);
    }
  }
  // Re = 0 and Im = -|b_Pbar|/|b_P| on the theta = pi/2 line
  const double b_min = std::sqrt(2.0 + kSqrt3) / 2.0;
  const WeakValue w = weak_value_parametric(unit, {b_min, kPi / 2});
  CHECK(std::abs(w.re) < 1e-15);
  CHECK(w.im == doctest::Approx(-(2.0 - kSqrt3)).epsilon(1e-12));
  const double b_max = std::sqrt(2.0 - kSqrt3) / 2.0;
  CHECK(weak_value_parametric(unit, {b_max, kPi / 2}).im ==
        doctest::Approx(-(2.0 + kSqrt3)).epsilon(1e-12));
  try {
    weak_value_parametric(unit, {0.0, 1.0});
    FAIL("expected SingularPostselection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularPostselection);
  }
  CHECK_THROWS_AS(weak_value_parametric({0.0, 2.0}, {0.5, 1.0}), Error);
}

TEST_CASE("weak_value_parametric agrees with weak_value") {
  Xoshiro256ss rng(35);
  for (int i = 0; i < 1000; ++i) {
    const double eps = oracle::log_uniform(rng, 1e-3, 1e3);
    const double k = oracle::log_uniform(rng, 1.0, 1e3);
    const PostselectParams ps = oracle::random_postselection(rng);
    const WeakValue a = weak_value_parametric({eps, k}, ps);
    const WeakValue b = weak_value(SystemParams::from_ratios(eps, k), restricted_coeffs(ps));
    const double scale = std::max(1.0, std::hypot(a.re, a.im));
    CHECK(std::abs(a.re - b.re) < 1e-10 * scale);
    CHECK(std::abs(a.im - b.im) < 1e-10 * scale);
  }
}

TEST_CASE("lifetime_linear") {
  const SystemParams sys = SystemParams::from_ratios(1e-3, 1.0);
  const LinearLifetime lin = lifetime_linear(sys, restricted_coeffs({0.5, 0.0}));
  CHECK(lin.tau == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lin.validity == doctest::Approx(5e-4));
  const SystemParams near = SystemParams::from_ratios(1e-3, 1.01);
  Xoshiro256ss rng(36);
  for (int i = 0; i < 100; ++i) {
    const CoeffPair c = restricted_coeffs({0.2 + 0.6 * rng.uniform(), 2.0 * kPi * rng.uniform()});
    const double exact = lifetime_conditional(near, c);
    CHECK(rel_err(lifetime_linear(near, c).tau, exact) < 5e-3);
  }
}

TEST_CASE("linear approximation error falls at least linearly") {
  const PostselectParams ps(0.4, 1.1);
  double prev = 0.0;
  for (double eps : {1e-2, 5e-3, 2.5e-3}) {
    const SystemParams sys = SystemParams::from_ratios(eps, 1.0 + eps);
    const CoeffPair c = restricted_coeffs(ps);
    const double err = rel_err(lifetime_linear(sys, c).tau, lifetime_conditional(sys, c));
    if (prev > 0.0) CHECK(err <= 0.5 * prev * (1.0 + 1e-9));
    prev = err;
  }
}

TEST_CASE("ratio_R examples") {
  for (double eps : {1e-3, 0.77, 1.0, 26.89, 1e3}) {
    for (double k : {1.0, 3.0, 10.0, 0.2}) {
      CHECK(ratio_R({eps, k}, {std::sqrt(0.5), kPi}) == doctest::Approx(2.0 / (1.0 + k)).epsilon(1e-12));
    }
  }
  Xoshiro256ss rng(37);
  for (int i = 0; i < 100; ++i)
    CHECK(std::abs(ratio_R({1e3, 1.0}, oracle::random_postselection(rng)) - 1.0) < 1.1e-3);
}

TEST_CASE("ratio_R two-path identity") {
  Xoshiro256ss rng(38);
  for (int i = 0; i < 1000; ++i) {
    const double eps = oracle::log_uniform(rng, 1e-3, 1e3);
    const double k = oracle::log_uniform(rng, 1e-3, 1e3);
    const PostselectParams ps = oracle::random_postselection(rng);
    CHECK(rel_err(ratio_R({eps, k}, ps), two_path_ratio(eps, k, ps)) < 1e-10);
  }
}

TEST_CASE("exchange symmetry") {
  Xoshiro256ss rng(39);
  for (int i = 0; i < 1000; ++i) {
    const double eps = oracle::log_uniform(rng, 1e-3, 1e3);
    const double k = oracle::log_uniform(rng, 1e-3, 1e3);
    const PostselectParams ps = oracle::random_postselection(rng);
    const double a = ratio_R({eps, k}, ps);
    const double b = ratio_R({eps, 1.0 / k}, {ps.b_mag(), kPi - ps.theta()});
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, a));
  }
}

TEST_CASE("ratio_limit_x") {
  CHECK(ratio_limit_x(0.0, 0.3) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(ratio_limit_x((2.0 - std::sqrt(2.0)) / 4.0, kPi) ==
        doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
  CHECK(ratio_limit_x((2.0 + std::sqrt(2.0)) / 4.0, kPi) ==
        doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK(ratio_limit_x(INFINITY, 1.0) == 1.0);
  CHECK_THROWS_AS(ratio_limit_x(-1.0, 0.0), Error);
  // R along k = 1 + d, |b_P| = x d tends to the corner formula
  const double x = 0.7;
  const double d = 1e-5;
  CHECK(std::abs(ratio_R({1e-12, 1.0 + d}, {x * d, 2.0}) - ratio_limit_x(x, 2.0)) < 1e-4);
}

TEST_CASE("ratio_caseA") {
  Xoshiro256ss rng(40);
  for (int i = 0; i < 50; ++i) {
    const PostselectParams ps = oracle::random_postselection(rng);
    CHECK(ratio_caseA(1.0, ps.b_mag(), ps.theta()) == 1.0);
    CHECK(std::abs(ratio_caseA(1e6, ps.b_mag(), ps.theta()) - 2.0) < 1e-3);
  }
  try {
    ratio_caseA(1.0, 0.0, 0.0);
    FAIL("expected IndeterminateAtOrigin");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndeterminateAtOrigin);
  }
  // corner redirect
  const double k = 1.0 + 1e-8;
  CHECK(ratio_caseA(k, 0.3e-8, 1.0) == doctest::Approx(ratio_limit_x(0.3e-8 / (k - 1.0), 1.0)).epsilon(1e-12));
}

TEST_CASE("regime formulas agree with ratio_R") {
  Xoshiro256ss rng(41);
  for (int i = 0; i < 500; ++i) {
    const double k = oracle::log_uniform(rng, 1e-2, 1e2);
    const PostselectParams ps = oracle::random_postselection(rng);
    const double b = ps.b_mag();
    const double t = ps.theta();
    CHECK(std::abs(ratio_caseA(k, b, t) - ratio_R({1e-6, k}, ps)) < 1e-5);
    CHECK(std::abs(ratio_caseB(k, b, t) - ratio_R({1.0, k}, ps)) < 1e-12 * std::max(1.0, ratio_caseB(k, b, t)));
    CHECK(std::abs(ratio_caseC(k, b, t) - ratio_R({1e6, k}, ps)) < 1e-5);
  }
}

TEST_CASE("ratio_caseB and caseC examples") {
  const double k = 1.0 + 1e-9;
  CHECK(ratio_caseB(k, std::sqrt(2.0 - kSqrt3) / 2.0, kPi / 2) ==
        doctest::Approx((3.0 + kSqrt3) / 2.0).epsilon(1e-8));
  CHECK(ratio_caseB(k, std::sqrt(2.0 + kSqrt3) / 2.0, kPi / 2) ==
        doctest::Approx((3.0 - kSqrt3) / 2.0).epsilon(1e-8));
  for (double kk : {1.0, 2.0, 5.0, 100.0}) {
    CHECK(ratio_caseC(kk, std::sqrt(0.5), 0.0) == doctest::Approx(2.0 * kk / (1.0 + kk)).epsilon(1e-14));
    CHECK(ratio_caseC(kk, std::sqrt(0.5), kPi) == doctest::Approx(2.0 / (1.0 + kk)).epsilon(1e-14));
  }
}

TEST_CASE("sum rule") {
  const SystemParams flat(0.0, 0.0, 1.3, 1.3);
  const StateSpec post = StateSpec::from_postselection(0.3, 0.4);
  CHECK(sum_rule_check(flat, BasisMap::symmetric(), StateSpec::flavor_p(), post).deviation < 1e-12);

  const SystemParams linear = SystemParams::from_ratios(1e-3, 1.01);
  Xoshiro256ss rng(42);
  for (int i = 0; i < 50; ++i) {
    const PostselectParams ps = oracle::random_postselection(rng);
    CHECK(sum_rule_check(linear, BasisMap::symmetric(), StateSpec::flavor_p(), ps.state()).deviation <
          5e-3);
  }
  const SumRule far = sum_rule_check(SystemParams::from_ratios(1.0, 2.0), BasisMap::symmetric(),
                                     StateSpec::flavor_p(), post);
  CHECK(std::isfinite(far.deviation));
}

TEST_CASE("sum rule deviation falls at least linearly") {
  const StateSpec post = StateSpec::from_postselection(0.3, 0.4);
  double eps = 1e-3;
  double km1 = 0.01;
  double prev = sum_rule_check(SystemParams::from_ratios(eps, 1.0 + km1), BasisMap::symmetric(),
                               StateSpec::flavor_p(), post).deviation;
  for (int i = 0; i < 2; ++i) {
    eps /= 2.0;
    km1 /= 2.0;
    const double dev = sum_rule_check(SystemParams::from_ratios(eps, 1.0 + km1),
                                      BasisMap::symmetric(), StateSpec::flavor_p(), post).deviation;
    CHECK(dev <= 0.5 * prev * (1.0 + 1e-6));
    prev = dev;
  }
}

}
