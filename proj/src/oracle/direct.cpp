#include "decaylife/oracle/direct.hpp"

#include <cmath>

namespace decaylife::oracle {

namespace {

Eigen::Vector2cd eigenvalues(const SystemParams& sys) {
  return {cplx(sys.mass_light(), -0.5 * sys.width_light()),
          cplx(sys.mass_heavy(), -0.5 * sys.width_heavy())};
}

}  // namespace

Eigen::Matrix2cd eigenvector_matrix(const BasisMap& basis) {
  Eigen::Matrix2cd s;
  s << basis.p1(), basis.p2(), basis.q1(), -basis.q2();
  return s;
}

Eigen::Matrix2cd hamiltonian(const SystemParams& sys, const BasisMap& basis) {
  const Eigen::Matrix2cd s = eigenvector_matrix(basis);
  return s * eigenvalues(sys).asDiagonal() * s.inverse();
}

Eigen::Vector2cd as_vector(const StateSpec& st) { return {st.a_p(), st.a_pbar()}; }

Eigen::Vector2cd evolve_state(const SystemParams& sys, const BasisMap& basis,
                              const StateSpec& pre, double t) {
  const Eigen::Matrix2cd s = eigenvector_matrix(basis);
  const Eigen::Vector2cd lambda = eigenvalues(sys);
  Eigen::Vector2cd phase;
  for (int i = 0; i < 2; ++i) phase(i) = std::exp(cplx(0.0, -t) * lambda(i));
  return s * phase.asDiagonal() * s.inverse() * as_vector(pre);
}

cplx amplitude(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre,
               const StateSpec& post, double t) {
  return as_vector(post).dot(evolve_state(sys, basis, pre, t));
}

double transition_probability(const SystemParams& sys, const BasisMap& basis,
                              const StateSpec& pre, const StateSpec& post, double t) {
  return std::norm(amplitude(sys, basis, pre, post, t));
}

double survival_direct(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre,
                       double t) {
  return evolve_state(sys, basis, pre, t).squaredNorm();
}

double decay_density_direct(const SystemParams& sys, const BasisMap& basis,
                            const StateSpec& pre, double t) {
  const Eigen::Vector2cd psi = evolve_state(sys, basis, pre, t);
  const Eigen::Matrix2cd h = hamiltonian(sys, basis);
  const Eigen::Matrix2cd anti = h - h.adjoint();
  return (cplx(0.0, 1.0) * psi.dot(anti * psi)).real();
}

cplx amplitude_from_coeffs(const SystemParams& sys, const CoeffPair& c, double t) {
  const Eigen::Vector2cd lambda = eigenvalues(sys);
  return c.c_light * std::exp(cplx(0.0, -t) * lambda(0)) +
         c.c_heavy * std::exp(cplx(0.0, -t) * lambda(1));
}

cplx coupled_weak_value_matrix(const SystemParams& sys, const BasisMap& basis,
                               const StateSpec& pre, const StateSpec& post) {
  const double mass = 0.5 * (sys.mass_light() + sys.mass_heavy());
  const double gamma = 0.5 * (sys.width_light() + sys.width_heavy());
  const Eigen::Matrix2cd shifted =
      hamiltonian(sys, basis) - cplx(mass, -0.5 * gamma) * Eigen::Matrix2cd::Identity();
  const Eigen::Vector2cd phi = as_vector(post);
  const Eigen::Vector2cd psi = as_vector(pre);
  const cplx overlap = phi.dot(psi);
  if (std::abs(overlap) < 1e-300) throw Error(ErrorKind::OrthogonalPrePost, "<Phi|Psi> = 0");
  return phi.dot(shifted * psi) / overlap;
}

WeakValue weak_value_matrix(const SystemParams& sys, const BasisMap& basis, const StateSpec& pre,
                            const StateSpec& post) {
  const double g = 0.5 * (sys.mass_heavy() - sys.mass_light());
  if (g == 0.0) throw Error(ErrorKind::DegenerateMass, "g = 0");
  const cplx aw = coupled_weak_value_matrix(sys, basis, pre, post) / g;
  return {aw.real(), aw.imag()};
}

}  // namespace decaylife::oracle
