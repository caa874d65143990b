#include "decaylife/lifetime.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace decaylife {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTiny = 1e-300;
constexpr double kCornerRadius = 1e-6;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

void require_unit_interval(double b_mag) {
  if (!(b_mag >= 0.0 && b_mag <= 1.0)) {
    std::ostringstream os;
    os << "|b_P| must lie in [0,1], got " << b_mag;
    throw Error(ErrorKind::InvalidParams, os.str());
  }
}

void require_positive_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidParams, "k must be positive");
}

double checked_ratio(double num, double den, const char* where) {
  if (!(std::abs(den) > kTiny)) {
    throw Error(ErrorKind::ZeroPostselection, std::string(where) + ": vanishing denominator");
  }
  return num / den;
}

}  // namespace

PostselectParams::PostselectParams(double b_mag, double theta) : b_mag_(b_mag), theta_(theta) {
  require_unit_interval(b_mag);
  if (!std::isfinite(theta)) throw Error(ErrorKind::InvalidParams, "theta must be finite");
  theta_ = wrap_angle(theta);
}

double PostselectParams::b_bar() const { return std::sqrt(1.0 - b_mag_ * b_mag_); }

void RegimeConfig::validate() const {
  if (!(dm_over_gamma >= 0.0) || !std::isfinite(dm_over_gamma))
    throw Error(ErrorKind::InvalidParams, "dm_over_gamma must be >= 0");
  require_positive_k(k);
}

CanonicalRegime canonicalize(double k, double theta) {
  require_positive_k(k);
  if (k >= 1.0) return {k, theta, false};
  return {1.0 / k, wrap_angle(std::numbers::pi - theta), true};
}

double lifetime_unconditional(const SystemParams& sys, const BasisMap& basis,
                              const StateSpec& pre) {
  const DerivedParams d = derive(sys);
  const MassBasisAmps a = flavor_to_mass(pre, basis);
  const cplx z = std::conj(a.a_light) * a.a_heavy * std::conj(eigen_overlap(basis));
  const double g2 = d.gamma * d.gamma;
  const double m2 = d.delta_m * d.delta_m;
  const double denom2 = (g2 + m2) * (g2 + m2);
  const double osc = (g2 - m2) / denom2;
  const double mix = 2.0 * d.gamma * d.delta_m / denom2;
  return std::norm(a.a_light) / sys.width_light() + std::norm(a.a_heavy) / sys.width_heavy() +
         2.0 * d.gamma * z.real() * osc - 2.0 * d.delta_m * z.imag() * osc +
         2.0 * d.gamma * z.imag() * mix + 2.0 * d.delta_m * z.real() * mix;
}

double lifetime_conditional(const SystemParams& sys, const CoeffPair& c) {
  const double norm = norm_integral(sys, c);
  return first_moment_integral(sys, c) / norm;
}

cplx coupled_weak_value(const SystemParams& sys, const CoeffPair& c) {
  const cplx sum = c.c_light + c.c_heavy;
  if (!(std::abs(sum) >= kTiny))
    throw Error(ErrorKind::OrthogonalPrePost, "<Phi|Psi> = 0, weak value undefined");
  const DerivedParams d = derive(sys);
  const double dgamma = sys.width_heavy() - sys.width_light();
  // Shifted eigenvalues E_X - (M - i Gamma/2).
  const cplx shift_light(-0.5 * d.delta_m, 0.25 * dgamma);
  const cplx shift_heavy(0.5 * d.delta_m, -0.25 * dgamma);
  return (shift_light * c.c_light + shift_heavy * c.c_heavy) / sum;
}

WeakValue weak_value(const SystemParams& sys, const CoeffPair& c) {
  const cplx sum = c.c_light + c.c_heavy;
  if (!(std::abs(sum) >= kTiny))
    throw Error(ErrorKind::OrthogonalPrePost, "<Phi|Psi> = 0, weak value undefined");
  const DerivedParams d = derive(sys);
  if (d.delta_m == 0.0)
    throw Error(ErrorKind::DegenerateMass, "A_w is normalized by g = dM/2 = 0");
  const double norm_sum = std::norm(sum);
  const double contrast = (std::norm(c.c_heavy) - std::norm(c.c_light)) / norm_sum;
  const double cross_im = std::imag(std::conj(c.c_light) * c.c_heavy) / norm_sum;
  const double width_over_mass = (sys.width_heavy() - sys.width_light()) / d.delta_m;
  return {contrast + cross_im * width_over_mass, -contrast * 0.5 * width_over_mass + 2.0 * cross_im};
}

WeakValue weak_value_parametric(const RegimeConfig& cfg, const PostselectParams& ps) {
  cfg.validate();
  if (ps.b_mag() == 0.0)
    throw Error(ErrorKind::SingularPostselection, "|b_P| = 0 makes <Phi|Psi> vanish");
  if (cfg.dm_over_gamma == 0.0)
    throw Error(ErrorKind::DegenerateMass, "A_w is normalized by g = dM/2 = 0");
  const double lever = ps.b_bar() / ps.b_mag();
  const double beta = (cfg.k - 1.0) / ((cfg.k + 1.0) * cfg.dm_over_gamma);
  const double c = std::cos(ps.theta());
  const double s = std::sin(ps.theta());
  return {-lever * (c + beta * s), -lever * (s - beta * c)};
}

LinearLifetime lifetime_linear(const SystemParams& sys, const CoeffPair& c) {
  const DerivedParams d = derive(sys);
  const cplx gaw = coupled_weak_value(sys, c);
  return {1.0 / d.gamma + 2.0 / (d.gamma * d.gamma) * gaw.imag(), d.delta_m / (2.0 * d.gamma)};
}

double ratio_R(const RegimeConfig& cfg, const PostselectParams& ps) {
  cfg.validate();
  const double k = cfg.k;
  const double eps = cfg.dm_over_gamma;
  const double b = ps.b_mag();
  const double bs = b * ps.b_bar();
  const double asym = 2.0 * b * b - 1.0;  // |b_P|^2 - |b_Pbar|^2
  const double c = std::cos(ps.theta());
  const double s = std::sin(ps.theta());
  const double d = 1.0 + eps * eps;
  const double kp = 1.0 + k;
  const double plus = 0.25 + 0.5 * bs * c;
  const double minus = 0.25 - 0.5 * bs * c;

  const double num = plus * k + minus / k + 2.0 * k * (1.0 - eps * eps) / (d * d) * asym / (kp * kp) -
                     8.0 * k * eps / (kp * kp * d * d) * bs * s;
  const double den = plus * kp / 2.0 + minus * kp / (2.0 * k) + asym / (2.0 * d) - eps / d * bs * s;
  return checked_ratio(num, den, "ratio_R");
}

double ratio_limit_x(double x, double theta) {
  if (!(x >= 0.0)) throw Error(ErrorKind::InvalidParams, "x must be >= 0");
  const double c = std::cos(theta);
  if (std::isinf(x)) return 1.0;
  const double num = 0.375 + c * x + x * x;
  const double den = 0.125 + 0.5 * c * x + x * x;
  return checked_ratio(num, den, "ratio_limit_x");
}

double ratio_caseA(double k, double b_mag, double theta) {
  require_unit_interval(b_mag);
  const CanonicalRegime r = canonicalize(k, theta);
  const double km1 = r.k - 1.0;
  if (km1 == 0.0) {
    if (b_mag == 0.0)
      throw Error(ErrorKind::IndeterminateAtOrigin, "k = 1 and |b_P| = 0; use ratio_limit_x");
    return 1.0;
  }
  if (std::hypot(km1, b_mag) < kCornerRadius) return ratio_limit_x(b_mag / km1, r.theta);

  const double kk = r.k;
  const double kp = 1.0 + kk;
  const double cross = b_mag * std::sqrt(1.0 - b_mag * b_mag) * std::cos(r.theta);
  const double num = km1 * km1 * (kk * kk + 4.0 * kk + 1.0) / (4.0 * kp * kp) +
                     0.5 * (kk * kk - 1.0) * cross + 4.0 * kk * kk * b_mag * b_mag / (kp * kp);
  const double den = km1 * km1 / 8.0 + 0.25 * (kk * kk - 1.0) * cross + kk * b_mag * b_mag;
  return checked_ratio(num, den, "ratio_caseA");
}

double ratio_caseB(double k, double b_mag, double theta) {
  require_unit_interval(b_mag);
  const CanonicalRegime r = canonicalize(k, theta);
  const double kk = r.k;
  const double kp = 1.0 + kk;
  const double bs = b_mag * std::sqrt(1.0 - b_mag * b_mag);
  const double c = std::cos(r.theta);
  const double s = std::sin(r.theta);
  const double top = kp * kp * (1.0 + kk * kk) + 2.0 * bs * (kk - 1.0) * kp * kp * kp * c -
                     8.0 * kk * kk * bs * s;
  const double bottom = 1.0 + kk * kk + 4.0 * kk * b_mag * b_mag +
                        2.0 * bs * (kk * kk - 1.0) * c - 4.0 * kk * bs * s;
  return checked_ratio(2.0 * top, kp * kp * bottom, "ratio_caseB");
}

double ratio_caseC(double k, double b_mag, double theta) {
  require_unit_interval(b_mag);
  const CanonicalRegime r = canonicalize(k, theta);
  const double kk = r.k;
  const double cross = b_mag * std::sqrt(1.0 - b_mag * b_mag) * std::cos(r.theta);
  const double num = 0.25 * (kk * kk + 1.0) + 0.5 * (kk * kk - 1.0) * cross;
  const double den = 0.125 * (1.0 + kk) * (1.0 + kk) + 0.25 * (kk * kk - 1.0) * cross;
  return checked_ratio(num, den, "ratio_caseC");
}

CoeffPair restricted_coeffs(const PostselectParams& ps) {
  return coeffs(StateSpec::flavor_p(), ps.state(), BasisMap::symmetric());
}

double restricted_lifetime(const RegimeConfig& cfg) {
  cfg.validate();
  return (1.0 + cfg.k) * (1.0 + cfg.k) / (4.0 * cfg.k);
}

SumRule sum_rule_check(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre,
                       const StateSpec& post) {
  double lhs = 0.0;
  for (const StateSpec& phi : {post, post.orthogonal()}) {
    const CoeffPair c = coeffs(pre, phi, basis);
    const double weight = std::norm(c.c_light + c.c_heavy);
    lhs += weight * lifetime_conditional(sys, c);
  }
  const double rhs = lifetime_unconditional(sys, basis, pre);
  return {lhs, rhs, std::abs(lhs - rhs) / rhs};
}

}  // namespace decaylife
