#include "decaylife/oracle/draws.hpp"

#include <cmath>
#include <numbers>

namespace decaylife::oracle {

namespace {

cplx unit_phase(Xoshiro256ss& rng) { return std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform()); }

double gaussian(Xoshiro256ss& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

double log_uniform(Xoshiro256ss& rng, double lo, double hi) {
  return lo * std::exp(std::log(hi / lo) * rng.uniform());
}

SystemParams random_system(Xoshiro256ss& rng) {
  const double eps = log_uniform(rng, 1e-3, 1e3);
  const double k = log_uniform(rng, 1.0, 1e3);
  const double gamma = log_uniform(rng, 0.1, 10.0);
  const double ml = -5.0 + 10.0 * rng.uniform();
  return {ml, ml + eps * gamma, 2.0 * gamma / (1.0 + k), 2.0 * gamma * k / (1.0 + k)};
}

BasisMap random_basis(Xoshiro256ss& rng) {
  while (true) {
    const double a1 = 0.5 * std::numbers::pi * rng.uniform();
    const double a2 = 0.5 * std::numbers::pi * rng.uniform();
    const BasisMap b(std::cos(a1) * unit_phase(rng), std::sin(a1) * unit_phase(rng),
                     std::cos(a2) * unit_phase(rng), std::sin(a2) * unit_phase(rng));
    if (std::abs(b.determinant()) >= 0.2) return b;
  }
}

StateSpec random_state(Xoshiro256ss& rng) {
  const cplx a(gaussian(rng), gaussian(rng));
  const cplx b(gaussian(rng), gaussian(rng));
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

PostselectParams random_postselection(Xoshiro256ss& rng) {
  const double b = 0.01 + 0.98 * rng.uniform();
  return {b, 2.0 * std::numbers::pi * rng.uniform()};
}

}  // namespace decaylife::oracle
