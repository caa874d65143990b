#include "decaylife/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace decaylife {

namespace {

constexpr double kDensityFloor = -1e-12;
constexpr double kZeroMass = 1e-300;

double min_width(const SystemParams& sys) {
  return std::min(sys.width_light(), sys.width_heavy());
}

double max_width(const SystemParams& sys) {
  return std::max(sys.width_light(), sys.width_heavy());
}

}  // namespace

ModeSum::ModeSum(const SystemParams& sys, double weight_light, double weight_heavy, cplx cross)
    : sys_(sys), weight_light_(weight_light), weight_heavy_(weight_heavy), cross_(cross) {
  const DerivedParams d = derive(sys);
  gamma_ = d.gamma;
  delta_m_ = d.delta_m;
}

ModeSum ModeSum::transition(const SystemParams& sys, const CoeffPair& c) {
  return {sys, std::norm(c.c_light), std::norm(c.c_heavy), std::conj(c.c_light) * c.c_heavy};
}

ModeSum ModeSum::survival(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre) {
  const MassBasisAmps a = flavor_to_mass(pre, basis);
  const cplx cross = std::conj(a.a_light) * a.a_heavy * std::conj(eigen_overlap(basis));
  return {sys, std::norm(a.a_light), std::norm(a.a_heavy), cross};
}

double ModeSum::value(double t) const {
  return weight_light_ * std::exp(-sys_.width_light() * t) +
         weight_heavy_ * std::exp(-sys_.width_heavy() * t) +
         2.0 * std::exp(-gamma_ * t) * std::real(cross_ * std::polar(1.0, -delta_m_ * t));
}

double ModeSum::decay_rate(double t) const {
  const cplx rotated = cross_ * std::polar(1.0, -delta_m_ * t);
  return weight_light_ * sys_.width_light() * std::exp(-sys_.width_light() * t) +
         weight_heavy_ * sys_.width_heavy() * std::exp(-sys_.width_heavy() * t) +
         2.0 * gamma_ * std::exp(-gamma_ * t) * std::real(rotated) -
         2.0 * delta_m_ * std::exp(-gamma_ * t) * std::imag(rotated);
}

double ModeSum::tail_integral(double t) const {
  const cplx rate(gamma_, delta_m_);
  return weight_light_ * std::exp(-sys_.width_light() * t) / sys_.width_light() +
         weight_heavy_ * std::exp(-sys_.width_heavy() * t) / sys_.width_heavy() +
         2.0 * std::real(cross_ * std::exp(-rate * t) / rate);
}

double ModeSum::dominant_rate() const {
  double rate = std::numeric_limits<double>::infinity();
  if (weight_light_ > 0.0) rate = std::min(rate, sys_.width_light());
  if (weight_heavy_ > 0.0) rate = std::min(rate, sys_.width_heavy());
  if (std::abs(cross_) > 0.0) rate = std::min(rate, gamma_);
  return std::isfinite(rate) ? rate : min_width(sys_);
}

double ModeSum::envelope(double t) const {
  return std::abs(weight_light_) * std::exp(-sys_.width_light() * t) +
         std::abs(weight_heavy_) * std::exp(-sys_.width_heavy() * t) +
         2.0 * std::abs(cross_) * std::exp(-gamma_ * t);
}

double decay_density(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre,
                     double t) {
  require_nonnegative_time(t);
  const double n = ModeSum::survival(sys, basis, pre).decay_rate(t);
  if (n < kDensityFloor) {
    std::ostringstream os;
    os << "N(t|Psi) = " << n << " at t = " << t;
    throw Error(ErrorKind::NegativeDensity, os.str());
  }
  return std::max(n, 0.0);
}

std::optional<double> density_pathology(const SystemParams& sys, const BasisMap& basis,
                                        const StateSpec& pre) {
  const ModeSum law = ModeSum::survival(sys, basis, pre);
  for (double t : default_time_grid(sys, truncation_time(sys), 16)) {
    if (law.decay_rate(t) < kDensityFloor) return t;
  }
  return std::nullopt;
}

CoeffPair coeffs(const StateSpec& pre, const StateSpec& post, const BasisMap& basis) {
  const MassBasisAmps a = flavor_to_mass(pre, basis);
  const MassBasisAmps b = flavor_to_mass(post, basis);
  const cplx overlap_hl = eigen_overlap(basis);
  const cplx overlap_lh = std::conj(overlap_hl);
  return {(std::conj(b.a_light) + std::conj(b.a_heavy) * overlap_hl) * a.a_light,
          (std::conj(b.a_heavy) + std::conj(b.a_light) * overlap_lh) * a.a_heavy};
}

double postselect_prob(const SystemParams& sys, const CoeffPair& c, double t) {
  require_nonnegative_time(t);
  return std::max(ModeSum::transition(sys, c).value(t), 0.0);
}

double norm_integral(const SystemParams& sys, const CoeffPair& c) {
  const DerivedParams d = derive(sys);
  const cplx w = std::conj(c.c_light) * c.c_heavy;
  const double denom = d.gamma * d.gamma + d.delta_m * d.delta_m;
  const double value = std::norm(c.c_light) / sys.width_light() +
                       std::norm(c.c_heavy) / sys.width_heavy() +
                       2.0 * d.gamma / denom * w.real() + 2.0 * d.delta_m / denom * w.imag();
  if (!(value >= kZeroMass)) {
    std::ostringstream os;
    os << "integrated transition probability " << value;
    throw Error(ErrorKind::ZeroPostselection, os.str());
  }
  return value;
}

double first_moment_integral(const SystemParams& sys, const CoeffPair& c) {
  // Validates the postselection the same way as the normalization.
  norm_integral(sys, c);
  const DerivedParams d = derive(sys);
  const cplx w = std::conj(c.c_light) * c.c_heavy;
  const double g2 = d.gamma * d.gamma;
  const double m2 = d.delta_m * d.delta_m;
  const double denom2 = (g2 + m2) * (g2 + m2);
  const double wl = sys.width_light();
  const double wh = sys.width_heavy();
  return std::norm(c.c_light) / (wl * wl) + std::norm(c.c_heavy) / (wh * wh) +
         (2.0 * g2 - 2.0 * m2) / denom2 * w.real() + 4.0 * d.gamma * d.delta_m / denom2 * w.imag();
}

double conditional_density(const SystemParams& sys, const CoeffPair& c, double t) {
  const double norm = norm_integral(sys, c);
  return postselect_prob(sys, c, t) / norm;
}

double conditional_tail(const SystemParams& sys, const CoeffPair& c, double t) {
  require_nonnegative_time(t);
  const double norm = norm_integral(sys, c);
  return std::clamp(ModeSum::transition(sys, c).tail_integral(t) / norm, 0.0, 1.0);
}

double conditional_cdf(const SystemParams& sys, const CoeffPair& c, double t) {
  return 1.0 - conditional_tail(sys, c, t);
}

double truncation_time(const SystemParams& sys) { return 50.0 / min_width(sys); }

double tail_mass_bound(const SystemParams& sys, const CoeffPair& c, double t_max) {
  const double gmin = min_width(sys);
  const double amp = std::abs(c.c_light) + std::abs(c.c_heavy);
  return std::exp(-gmin * t_max) * amp * amp / gmin;
}

DecayCurve sample_unconditional_curve(const SystemParams& sys, const BasisMap& basis,
                                      const StateSpec& pre, std::span<const double> t_grid) {
  DecayCurve curve{{t_grid.begin(), t_grid.end()}, {}, CurveKind::unconditional};
  curve.density.reserve(t_grid.size());
  for (double t : t_grid) curve.density.push_back(decay_density(sys, basis, pre, t));
  return curve;
}

DecayCurve sample_conditional_curve(const SystemParams& sys, const CoeffPair& c,
                                    std::span<const double> t_grid) {
  const double norm = norm_integral(sys, c);
  const ModeSum law = ModeSum::transition(sys, c);
  DecayCurve curve{{t_grid.begin(), t_grid.end()}, {}, CurveKind::conditional};
  curve.density.reserve(t_grid.size());
  for (double t : t_grid) {
    require_nonnegative_time(t);
    curve.density.push_back(std::max(law.value(t), 0.0) / norm);
  }
  return curve;
}

std::vector<double> default_time_grid(const SystemParams& sys, double t_end,
                                      std::size_t points_per_scale) {
  if (!(t_end > 0.0)) return {0.0};
  const DerivedParams d = derive(sys);
  double scale = 1.0 / max_width(sys);
  if (d.delta_m > 0.0) scale = std::min(scale, 2.0 * std::numbers::pi / d.delta_m);
  // The interference term and the faster mode are gone (e^-40) after 40/Gamma;
  // past that only the slow mode needs resolving.
  const double t_fast = std::min(t_end, 40.0 / d.gamma);
  const double fine = scale / static_cast<double>(points_per_scale);
  const double coarse = 1.0 / (min_width(sys) * static_cast<double>(points_per_scale));

  std::vector<double> grid;
  const auto fine_steps = static_cast<std::size_t>(std::ceil(t_fast / fine));
  grid.reserve(fine_steps + 1);
  for (std::size_t i = 0; i <= fine_steps; ++i)
    grid.push_back(t_fast * static_cast<double>(i) / static_cast<double>(fine_steps));
  if (t_end > t_fast) {
    const auto coarse_steps =
        static_cast<std::size_t>(std::ceil((t_end - t_fast) / std::max(coarse, fine)));
    for (std::size_t i = 1; i <= coarse_steps; ++i)
      grid.push_back(t_fast + (t_end - t_fast) * static_cast<double>(i) /
                                  static_cast<double>(coarse_steps));
  }
  return grid;
}

double trapezoid_mass(const DecayCurve& curve) {
  double mass = 0.0;
  for (std::size_t i = 1; i < curve.t_grid.size(); ++i)
    mass += 0.5 * (curve.density[i] + curve.density[i - 1]) * (curve.t_grid[i] - curve.t_grid[i - 1]);
  return mass;
}

}  // namespace decaylife
