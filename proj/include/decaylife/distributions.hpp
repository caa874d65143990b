#pragma once

#include <optional>
#include <span>
#include <vector>

#include "decaylife/core.hpp"

namespace decaylife {

/// (c_L, c_H): <Phi|Psi(t)> = c_L e^{-t Gamma_L/2 - i t M_L} + c_H e^{-t Gamma_H/2 - i t M_H}.
struct CoeffPair {
  cplx c_light;
  cplx c_heavy;
};

/// Two damped modes plus their interference,
///   w_L e^{-Gamma_L t} + w_H e^{-Gamma_H t} + 2 e^{-Gamma t} Re[x e^{-i dM t}].
/// Both the survival probability ||Psi(t)||^2 and the postselected transition
/// probability |<Phi|Psi(t)>|^2 have this shape.
class ModeSum {
 public:
  ModeSum(const SystemParams& sys, double weight_light, double weight_heavy, cplx cross);

  static ModeSum transition(const SystemParams& sys, const CoeffPair& c);
  static ModeSum survival(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre);

  double value(double t) const;
  /// -d/dt value(t).
  double decay_rate(double t) const;
  /// Integral of value over [t, inf).
  double tail_integral(double t) const;
  /// Slowest rate among modes with nonzero weight; governs the far tail.
  double dominant_rate() const;
  /// Upper bound on |value(s)| for s >= t.
  double envelope(double t) const;

  const SystemParams& system() const { return sys_; }

 private:
  SystemParams sys_;
  double weight_light_;
  double weight_heavy_;
  cplx cross_;
  double gamma_;
  double delta_m_;
};

/// N(t|Psi) = -d/dt ||Psi(t)||^2.  Values in [-1e-12, 0) are clamped to 0;
/// anything lower raises NegativeDensity (non-orthogonal eigenstates can
/// produce transient norm growth, which is a model pathology).
double decay_density(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre,
                     double t);

/// First time on [0, 50/min(Gamma)] where N(t|Psi) < -1e-12, if any.
std::optional<double> density_pathology(const SystemParams& sys, const BasisMap& basis,
                                        const StateSpec& pre);

/// c_L = (b_L^* + b_H^* <P_H|P_L>) a_L,  c_H = (b_H^* + b_L^* <P_L|P_H>) a_H.
CoeffPair coeffs(const StateSpec& pre, const StateSpec& post, const BasisMap& basis);

/// |<Phi|Psi(t)>|^2.
double postselect_prob(const SystemParams& sys, const CoeffPair& c, double t);

/// Integral of |<Phi|Psi(t)>|^2 over [0, inf).  Throws ZeroPostselection if < 1e-300.
double norm_integral(const SystemParams& sys, const CoeffPair& c);

/// Integral of t |<Phi|Psi(t)>|^2 over [0, inf).
double first_moment_integral(const SystemParams& sys, const CoeffPair& c);

/// N(t|Psi -> Phi): the transition probability normalized to unit mass.
double conditional_density(const SystemParams& sys, const CoeffPair& c, double t);

/// Closed-form CDF of N(t|Psi -> Phi).
double conditional_cdf(const SystemParams& sys, const CoeffPair& c, double t);

/// 1 - conditional_cdf, evaluated without cancellation in the tail.
double conditional_tail(const SystemParams& sys, const CoeffPair& c, double t);

/// 50 / min(Gamma_L, Gamma_H): the truncation point used by the oracles.
double truncation_time(const SystemParams& sys);

/// e^{-min(Gamma) t_max} (|c_L| + |c_H|)^2 / min(Gamma), a bound on the
/// transition-probability mass beyond t_max.
double tail_mass_bound(const SystemParams& sys, const CoeffPair& c, double t_max);

enum class CurveKind { unconditional, conditional };

struct DecayCurve {
  std::vector<double> t_grid;
  std::vector<double> density;
  CurveKind kind;
};

DecayCurve sample_unconditional_curve(const SystemParams& sys, const BasisMap& basis,
                                      const StateSpec& pre, std::span<const double> t_grid);
DecayCurve sample_conditional_curve(const SystemParams& sys, const CoeffPair& c,
                                    std::span<const double> t_grid);

/// Grid on [0, t_end] fine enough to resolve both decay and oscillation.
std::vector<double> default_time_grid(const SystemParams& sys, double t_end,
                                      std::size_t points_per_scale = 512);

/// Trapezoid mass over the grid.
double trapezoid_mass(const DecayCurve& curve);

}  // namespace decaylife
