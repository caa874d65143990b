#pragma once

// Amplitude-level evaluation straight from the 2x2 Hamiltonian, without any
// of the closed forms.  Test and validation use only.

#include <Eigen/Dense>

#include "decaylife/core.hpp"
#include "decaylife/distributions.hpp"
#include "decaylife/lifetime.hpp"

namespace decaylife::oracle {

/// Columns are |P_L> and |P_H> in the (P, Pbar) basis.
Eigen::Matrix2cd eigenvector_matrix(const BasisMap& basis);
/// H = S diag(M_L - i Gamma_L/2, M_H - i Gamma_H/2) S^-1.
Eigen::Matrix2cd hamiltonian(const SystemParams& sys, const BasisMap& basis);

Eigen::Vector2cd as_vector(const StateSpec& s);

/// e^{-i t H} |Psi>.
Eigen::Vector2cd evolve_state(const SystemParams& sys, const BasisMap& basis,
                              const StateSpec& pre, double t);

/// <Phi|e^{-i t H}|Psi>.
cplx amplitude(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre,
               const StateSpec& post, double t);
double transition_probability(const SystemParams& sys, const BasisMap& basis,
                              const StateSpec& pre, const StateSpec& post, double t);
double survival_direct(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre,
                       double t);
/// -d/dt ||Psi(t)||^2 = i <Psi(t)|H - H^dagger|Psi(t)>.
double decay_density_direct(const SystemParams& sys, const BasisMap& basis,
                            const StateSpec& pre, double t);

/// c_L e^{-i t (M_L - i Gamma_L/2)} + c_H e^{-i t (M_H - i Gamma_H/2)}.
cplx amplitude_from_coeffs(const SystemParams& sys, const CoeffPair& c, double t);

/// <Phi|(H - (M - i Gamma/2))|Psi> / <Phi|Psi>.
cplx coupled_weak_value_matrix(const SystemParams& sys, const BasisMap& basis,
                               const StateSpec& pre, const StateSpec& post);
/// The above divided by g = dM/2.
WeakValue weak_value_matrix(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre,
                            const StateSpec& post);

}  // namespace decaylife::oracle
