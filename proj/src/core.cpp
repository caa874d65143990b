#include "decaylife/core.hpp"

#include <cmath>
#include <sstream>

namespace decaylife {

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os << what << " = " << value;
  return os.str();
}

}  // namespace

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::NegativeTime, describe("t", t));
}

SystemParams::SystemParams(double mass_light, double mass_heavy, double width_light,
                           double width_heavy)
    : mass_light_(mass_light),
      mass_heavy_(mass_heavy),
      width_light_(width_light),
      width_heavy_(width_heavy) {
  if (!std::isfinite(mass_light) || !std::isfinite(mass_heavy))
    throw Error(ErrorKind::InvalidParams, "masses must be finite");
  if (!(width_light > 0.0) || !std::isfinite(width_light))
    throw Error(ErrorKind::InvalidParams, describe("Gamma_L must be positive, got", width_light));
  if (!(width_heavy > 0.0) || !std::isfinite(width_heavy))
    throw Error(ErrorKind::InvalidParams, describe("Gamma_H must be positive, got", width_heavy));
  if (mass_light > mass_heavy)
    throw Error(ErrorKind::InvalidParams, "M_L <= M_H is required");
}

SystemParams SystemParams::from_ratios(double dm_over_gamma, double k, double gamma) {
  if (!(dm_over_gamma >= 0.0) || !std::isfinite(dm_over_gamma))
    throw Error(ErrorKind::InvalidParams, describe("dm_over_gamma must be >= 0, got", dm_over_gamma));
  if (!(k > 0.0) || !std::isfinite(k))
    throw Error(ErrorKind::InvalidParams, describe("k must be positive, got", k));
  if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidParams, "gamma must be positive");
  const double width_light = 2.0 * gamma / (1.0 + k);
  const double width_heavy = 2.0 * gamma * k / (1.0 + k);
  return {0.0, dm_over_gamma * gamma, width_light, width_heavy};
}

SystemParams SystemParams::normalized() const {
  const double gamma = 0.5 * (width_light_ + width_heavy_);
  return {mass_light_ / gamma, mass_heavy_ / gamma, width_light_ / gamma, width_heavy_ / gamma};
}

DerivedParams derive(const SystemParams& p) {
  DerivedParams d{};
  d.delta_m = p.mass_heavy() - p.mass_light();
  d.gamma = 0.5 * (p.width_light() + p.width_heavy());
  d.mass = 0.5 * (p.mass_light() + p.mass_heavy());
  d.g = 0.5 * d.delta_m;
  d.k = p.width_heavy() / p.width_light();
  return d;
}

BasisMap::BasisMap(cplx p1, cplx q1, cplx p2, cplx q2) : p1_(p1), q1_(q1), p2_(p2), q2_(q2) {
  if (std::abs(std::norm(p1) + std::norm(q1) - 1.0) > kNormTolerance)
    throw Error(ErrorKind::InvalidParams, "|p1|^2 + |q1|^2 must equal 1");
  if (std::abs(std::norm(p2) + std::norm(q2) - 1.0) > kNormTolerance)
    throw Error(ErrorKind::InvalidParams, "|p2|^2 + |q2|^2 must equal 1");
}

BasisMap BasisMap::restricted(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorKind::InvalidParams, describe("restricted basis needs p in [0,1], got", p));
  const double q = std::sqrt(1.0 - p * p);
  return {p, q, p, q};
}

BasisMap BasisMap::symmetric() { return restricted(1.0 / std::sqrt(2.0)); }

StateSpec::StateSpec(cplx a_p, cplx a_pbar) : a_p_(a_p), a_pbar_(a_pbar) {
  if (std::abs(std::norm(a_p) + std::norm(a_pbar) - 1.0) > kNormTolerance)
    throw Error(ErrorKind::InvalidParams, "state must be normalized");
}

StateSpec StateSpec::from_postselection(double b_mag, double theta) {
  if (!(b_mag >= 0.0 && b_mag <= 1.0))
    throw Error(ErrorKind::InvalidParams, describe("|b_P| must lie in [0,1], got", b_mag));
  const double b_bar = std::sqrt(1.0 - b_mag * b_mag);
  return {b_mag, std::polar(b_bar, -theta)};
}

StateSpec StateSpec::orthogonal() const { return {-std::conj(a_pbar_), std::conj(a_p_)}; }

cplx eigen_overlap(const BasisMap& basis) {
  return std::conj(basis.p2()) * basis.p1() - std::conj(basis.q2()) * basis.q1();
}

MassBasisAmps flavor_to_mass(const StateSpec& state, const BasisMap& basis) {
  const cplx d = basis.determinant();
  if (std::abs(d) <= BasisMap::kSingularThreshold)
    throw Error(ErrorKind::SingularBasis, describe("|det| of basis map", std::abs(d)));
  const cplx a_p = state.a_p();
  const cplx a_pbar = state.a_pbar();
  return {(-basis.q2() * a_p - basis.p2() * a_pbar) / d,
          (-basis.q1() * a_p + basis.p1() * a_pbar) / d};
}

std::pair<cplx, cplx> mass_to_flavor(const MassBasisAmps& amps, const BasisMap& basis) {
  return {amps.a_light * basis.p1() + amps.a_heavy * basis.p2(),
          amps.a_light * basis.q1() - amps.a_heavy * basis.q2()};
}

MassBasisAmps evolve(const SystemParams& sys, const MassBasisAmps& amps, double t) {
  require_nonnegative_time(t);
  const auto phase = [t](double mass, double width) {
    return std::exp(cplx(-0.5 * t * width, -t * mass));
  };
  return {amps.a_light * phase(sys.mass_light(), sys.width_light()),
          amps.a_heavy * phase(sys.mass_heavy(), sys.width_heavy())};
}

double survival(const SystemParams& sys, const BasisMap& basis, const MassBasisAmps& amps,
                double t) {
  require_nonnegative_time(t);
  const DerivedParams d = derive(sys);
  // <P_L|P_H> is the conjugate of <P_H|P_L>.
  const cplx cross = std::conj(amps.a_light) * amps.a_heavy * std::conj(eigen_overlap(basis));
  const double interference =
      2.0 * std::exp(-d.gamma * t) * std::real(cross * std::polar(1.0, -t * d.delta_m));
  return std::norm(amps.a_light) * std::exp(-sys.width_light() * t) +
         std::norm(amps.a_heavy) * std::exp(-sys.width_heavy() * t) + interference;
}

}  // namespace decaylife
