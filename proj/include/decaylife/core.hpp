#pragma once

// Two-level unstable system described by a non-Hermitian Hamiltonian with
// eigenstates |P_L>, |P_H> (eigenvalues M_X - i Gamma_X / 2), expressed in an
// orthonormal measurement basis (|P>, |Pbar>).  hbar = 1 throughout.

#include <complex>
#include <utility>

#include "decaylife/error.hpp"

namespace decaylife {

using cplx = std::complex<double>;

/// Masses and widths of the light and heavy eigenstates.
class SystemParams {
 public:
  /// Throws InvalidParams unless both widths are positive and finite and
  /// mass_light <= mass_heavy.
  SystemParams(double mass_light, double mass_heavy, double width_light, double width_heavy);

  /// System with average width `gamma`, mass splitting dm_over_gamma * gamma
  /// and width ratio k = Gamma_H / Gamma_L.  M_L is pinned at 0.
  static SystemParams from_ratios(double dm_over_gamma, double k, double gamma = 1.0);

  double mass_light() const { return mass_light_; }
  double mass_heavy() const { return mass_heavy_; }
  double width_light() const { return width_light_; }
  double width_heavy() const { return width_heavy_; }

  /// Same physics expressed in units where the average width is 1.
  SystemParams normalized() const;

 private:
  double mass_light_;
  double mass_heavy_;
  double width_light_;
  double width_heavy_;
};

struct DerivedParams {
  double delta_m;  // M_H - M_L
  double gamma;    // (Gamma_L + Gamma_H) / 2
  double mass;     // (M_L + M_H) / 2
  double g;        // delta_m / 2
  double k;        // Gamma_H / Gamma_L
};

DerivedParams derive(const SystemParams& params);

/// Transcription |P_L> = p1|P> + q1|Pbar>, |P_H> = p2|P> - q2|Pbar>.
class BasisMap {
 public:
  static constexpr double kNormTolerance = 1e-12;
  static constexpr double kSingularThreshold = 1e-12;

  /// Throws InvalidParams unless |p_i|^2 + |q_i|^2 = 1 within 1e-12.
  BasisMap(cplx p1, cplx q1, cplx p2, cplx q2);

  /// p1 = p2 = p, q1 = q2 = q with p, q real and nonnegative, q = sqrt(1 - p^2).
  static BasisMap restricted(double p);
  /// p = q = 1/sqrt(2): orthogonal eigenstates.
  static BasisMap symmetric();

  cplx p1() const { return p1_; }
  cplx q1() const { return q1_; }
  cplx p2() const { return p2_; }
  cplx q2() const { return q2_; }

  /// d = -(p1 q2 + p2 q1); conversions require |d| > 1e-12.
  cplx determinant() const { return -(p1_ * q2_ + p2_ * q1_); }

 private:
  cplx p1_, q1_, p2_, q2_;
};

/// Normalized state a_P|P> + a_Pbar|Pbar>.
class StateSpec {
 public:
  static constexpr double kNormTolerance = 1e-12;

  StateSpec(cplx a_p, cplx a_pbar);

  static StateSpec flavor_p() { return {1.0, 0.0}; }
  static StateSpec flavor_pbar() { return {0.0, 1.0}; }
  /// |b_P| = b_mag, |b_Pbar| = sqrt(1 - b_mag^2), b_P b_Pbar^* = |b_P||b_Pbar| e^{i theta}.
  static StateSpec from_postselection(double b_mag, double theta);

  cplx a_p() const { return a_p_; }
  cplx a_pbar() const { return a_pbar_; }

  /// The unique (up to phase) normalized state orthogonal to this one.
  StateSpec orthogonal() const;

 private:
  cplx a_p_, a_pbar_;
};

struct MassBasisAmps {
  cplx a_light;
  cplx a_heavy;
};

/// <P_H|P_L> = p2^* p1 - q2^* q1.
cplx eigen_overlap(const BasisMap& basis);

/// Solves a_P = a_L p1 + a_H p2, a_Pbar = a_L q1 - a_H q2 for (a_L, a_H).
/// Throws SingularBasis when |determinant| <= 1e-12.
MassBasisAmps flavor_to_mass(const StateSpec& state, const BasisMap& basis);

/// Forward map; returns the unnormalized flavor amplitudes (a_P, a_Pbar).
std::pair<cplx, cplx> mass_to_flavor(const MassBasisAmps& amps, const BasisMap& basis);

/// a_X(t) = a_X exp(-t Gamma_X / 2 - i t M_X).  Throws NegativeTime for t < 0.
MassBasisAmps evolve(const SystemParams& sys, const MassBasisAmps& amps, double t);

/// ||Psi(t)||^2, the probability that no decay has happened by time t.
double survival(const SystemParams& sys, const BasisMap& basis, const MassBasisAmps& amps,
                double t);

void require_nonnegative_time(double t);

}  // namespace decaylife
