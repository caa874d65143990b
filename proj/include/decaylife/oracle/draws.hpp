#pragma once

// Random valid inputs for property checks.

#include "decaylife/core.hpp"
#include "decaylife/lifetime.hpp"
#include "decaylife/rng.hpp"

namespace decaylife::oracle {

/// Log-uniform on [lo, hi].
double log_uniform(Xoshiro256ss& rng, double lo, double hi);

/// dM/Gamma log-uniform on [1e-3, 1e3], k log-uniform on [1, 1e3],
/// average width log-uniform on [0.1, 10], M_L uniform on [-5, 5].
SystemParams random_system(Xoshiro256ss& rng);
/// Unit complex pairs with |determinant| >= 0.2.
BasisMap random_basis(Xoshiro256ss& rng);
/// Haar-random normalized state.
StateSpec random_state(Xoshiro256ss& rng);
/// |b_P| uniform on [0.01, 0.99], theta uniform on [0, 2 pi).
PostselectParams random_postselection(Xoshiro256ss& rng);

}  // namespace decaylife::oracle
