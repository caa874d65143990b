#pragma once

#include "decaylife/core.hpp"
#include "decaylife/distributions.hpp"

namespace decaylife {

/// Weak value A_w = <Phi|A|Psi>/<Phi|Psi> of the normalized Hamiltonian
/// A = (H - (M - i Gamma/2)) / g.
struct WeakValue {
  double re;
  double im;
};

/// Postselection in the restricted setting: |b_P| and the relative phase
/// theta of b_P b_Pbar^*.
class PostselectParams {
 public:
  PostselectParams(double b_mag, double theta);

  double b_mag() const { return b_mag_; }
  double theta() const { return theta_; }
  /// |b_Pbar| = sqrt(1 - |b_P|^2).
  double b_bar() const;

  StateSpec state() const { return StateSpec::from_postselection(b_mag_, theta_); }

 private:
  double b_mag_;
  double theta_;
};

/// Physics of the restricted setting, reduced to two numbers.
struct RegimeConfig {
  double dm_over_gamma;
  double k;

  /// Validates dm_over_gamma >= 0 and k > 0.
  void validate() const;
  /// System in units Gamma = 1.
  SystemParams system() const { return SystemParams::from_ratios(dm_over_gamma, k); }
};

/// (k, theta) mapped into k >= 1 with the exchange symmetry
/// k -> 1/k, theta -> pi - theta.
struct CanonicalRegime {
  double k;
  double theta;
  bool symmetry_mapped;
};

CanonicalRegime canonicalize(double k, double theta);

// -- lifetimes ---------------------------------------------------------------

/// tau(Psi) = integral of t N(t|Psi), in closed form.
double lifetime_unconditional(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre);

/// tau(Psi -> Phi): exact ratio of the first-moment and norm integrals.
double lifetime_conditional(const SystemParams& sys, const CoeffPair& c);

/// g * A_w = <Phi|H - (M - i Gamma/2)|Psi> / <Phi|Psi>.  Finite at dM = 0.
/// Throws OrthogonalPrePost when |c_L + c_H| < 1e-300.
cplx coupled_weak_value(const SystemParams& sys, const CoeffPair& c);

/// A_w from (c_L, c_H).  Throws OrthogonalPrePost or DegenerateMass (dM = 0).
WeakValue weak_value(const SystemParams& sys, const CoeffPair& c);

/// A_w in the restricted setting (p = q = 1/sqrt(2), Psi = |P>):
///   Re A_w = -(s/b) (cos theta + beta sin theta)
///   Im A_w = -(s/b) (sin theta - beta cos theta)
/// with b = |b_P|, s = |b_Pbar|, beta = (k-1) Gamma / ((k+1) dM).
/// Throws SingularPostselection at b = 0 and DegenerateMass at dM = 0.
WeakValue weak_value_parametric(const RegimeConfig& cfg, const PostselectParams& ps);

struct LinearLifetime {
  double tau;       // 1/Gamma + (2g/Gamma^2) Im A_w
  double validity;  // dM / (2 Gamma), i.e. t g at t = 1/Gamma; must be << 1
};

/// Conditional lifetime to first order in t g.  Never substituted for
/// lifetime_conditional.
LinearLifetime lifetime_linear(const SystemParams& sys, const CoeffPair& c);

// -- ratio R = tau(Psi -> Phi) / tau(Psi) in the restricted setting ----------

/// Exact R for any dM/Gamma.
double ratio_R(const RegimeConfig& cfg, const PostselectParams& ps);

/// k -> 1, |b_P| -> 0 with x = |b_P|/(k-1) fixed:
///   R = (3/8 + x cos theta + x^2) / (1/8 + (x/2) cos theta + x^2).
double ratio_limit_x(double x, double theta);

/// dM/Gamma -> 0 limit.  Points within 1e-6 of the corner (k = 1, b = 0) are
/// redirected to ratio_limit_x; the corner itself raises IndeterminateAtOrigin.
double ratio_caseA(double k, double b_mag, double theta);

/// dM = Gamma.
double ratio_caseB(double k, double b_mag, double theta);

/// dM/Gamma -> infinity.
double ratio_caseC(double k, double b_mag, double theta);

/// Builds (c_L, c_H) for the restricted setting from full state objects.
CoeffPair restricted_coeffs(const PostselectParams& ps);

/// tau(Psi) in the restricted setting, (1+k)^2 / (4 k Gamma).
double restricted_lifetime(const RegimeConfig& cfg);

struct SumRule {
  double lhs;        // sum_k |<Phi_k|Psi>|^2 tau(Psi -> Phi_k) over {Phi, Phi_perp}
  double rhs;        // tau(Psi)
  double deviation;  // |lhs - rhs| / rhs
};

/// Weighted conditional lifetimes over the complete pair {Phi, Phi_perp}
/// against the unconditional lifetime.  Exact only to first order in dM/Gamma
/// and dGamma/Gamma.
SumRule sum_rule_check(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre,
                       const StateSpec& post);

}  // namespace decaylife
