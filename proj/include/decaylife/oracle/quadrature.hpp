#pragma once

// Adaptive Gauss-Kronrod quadrature over [0, t_max] with t_max = 50/min(Gamma),
// panels cut at half-periods pi/dM while the interference term is alive, plus
// an analytic bound on the discarded tail.

#include <functional>
#include <vector>

#include "decaylife/core.hpp"
#include "decaylife/distributions.hpp"

namespace decaylife::oracle {

struct Quadrature {
  double value;
  double error;       // summed Gauss-Kronrod error estimates
  double tail_bound;  // bound on the integral beyond t_max
};

/// Panel edges from 0 to t_max.
std::vector<double> panel_breaks(const SystemParams& sys);

Quadrature integrate(const SystemParams& sys, const std::function<double(double)>& f,
                     double tail_bound = 0.0);

/// Integrals of |<Phi|Psi(t)>|^2 and t |<Phi|Psi(t)>|^2 from the amplitude
/// c_L e^{-i lambda_L t} + c_H e^{-i lambda_H t}.
Quadrature quad_norm(const SystemParams& sys, const CoeffPair& c);
Quadrature quad_first_moment(const SystemParams& sys, const CoeffPair& c);
double quad_conditional_lifetime(const SystemParams& sys, const CoeffPair& c);

/// Same, from full states through the matrix propagator.
double quad_conditional_lifetime(const SystemParams& sys, const BasisMap& basis,
                                 const StateSpec& pre, const StateSpec& post);
/// Integral of t N(t|Psi) with N from the matrix propagator.
double quad_unconditional_lifetime(const SystemParams& sys, const BasisMap& basis,
                                   const StateSpec& pre);

/// Masses of the library densities decay_density and conditional_density.
Quadrature quad_mass_unconditional(const SystemParams& sys, const BasisMap& basis,
                                   const StateSpec& pre);
Quadrature quad_mass_conditional(const SystemParams& sys, const CoeffPair& c);

}  // namespace decaylife::oracle
