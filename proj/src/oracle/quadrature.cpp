#include "decaylife/oracle/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "decaylife/oracle/direct.hpp"

namespace decaylife::oracle {

namespace {

constexpr double kRelTol = 1e-13;
constexpr unsigned kMaxDepth = 12;

double min_width(const SystemParams& sys) { return std::min(sys.width_light(), sys.width_heavy()); }

double t_max_of(const SystemParams& sys) { return 50.0 / min_width(sys); }

// Bound on integral of t^n (|c_L| + |c_H|)^2 e^{-gmin t} over [T, inf), n = 0 or 1.
double tail_bound(const SystemParams& sys, double amp2, int n) {
  const double g = min_width(sys);
  const double t = t_max_of(sys);
  const double e = std::exp(-g * t) * amp2;
  return n == 0 ? e / g : e * (t / g + 1.0 / (g * g));
}

double amp2_of(const CoeffPair& c) {
  const double a = std::abs(c.c_light) + std::abs(c.c_heavy);
  return a * a;
}

}  // namespace

std::vector<double> panel_breaks(const SystemParams& sys) {
  const double t_max = t_max_of(sys);
  const double dm = sys.mass_heavy() - sys.mass_light();
  const double gamma = 0.5 * (sys.width_light() + sys.width_heavy());
  const double gmax = std::max(sys.width_light(), sys.width_heavy());
  double fine = 1.0 / gmax;
  if (dm > 0.0) fine = std::min(fine, std::numbers::pi / dm);
  const double t_fine = std::min(t_max, 40.0 / gamma);
  const double coarse = std::max(fine, 1.0 / min_width(sys));

  std::vector<double> edges{0.0};
  const auto n_fine = static_cast<std::size_t>(std::ceil(t_fine / fine));
  for (std::size_t i = 1; i <= n_fine; ++i)
    edges.push_back(t_fine * static_cast<double>(i) / static_cast<double>(n_fine));
  if (t_max > t_fine) {
    const auto n_coarse = static_cast<std::size_t>(std::ceil((t_max - t_fine) / coarse));
    for (std::size_t i = 1; i <= n_coarse; ++i)
      edges.push_back(t_fine + (t_max - t_fine) * static_cast<double>(i) / static_cast<double>(n_coarse));
  }
  return edges;
}

Quadrature integrate(const SystemParams& sys, const std::function<double(double)>& f,
                     double bound) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  const std::vector<double> edges = panel_breaks(sys);
  const double span = edges.back() - edges.front();

  // One Gauss-Kronrod pass fixes the scale; panels are then bisected until
  // their error share falls below kRelTol of the total absolute integral.
  struct Panel {
    double a, b, value, error, l1;
  };
  auto estimate = [&](double a, double b) {
    double l1 = 0.0;
    const double v = GK::integrate(f, a, b, 0, 0.0, nullptr, &l1);
    const double g = boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
    return Panel{a, b, v, std::abs(v - g), l1};
  };
  std::vector<Panel> panels;
  panels.reserve(edges.size());
  double scale = 0.0;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    panels.push_back(estimate(edges[i - 1], edges[i]));
    scale += panels.back().l1;
  }
  const double budget = kRelTol * scale;

  Quadrature q{0.0, 0.0, bound};
  struct Pending {
    Panel panel;
    unsigned depth;
    double parent_error;
  };
  std::vector<Pending> stack;
  for (const Panel& p : panels) {
    stack.push_back({p, 0u, INFINITY});
    while (!stack.empty()) {
      const Pending cur = stack.back();
      stack.pop_back();
      const Panel& c = cur.panel;
      const double share = budget * (c.b - c.a) / span;
      // An error that bisection no longer shrinks is rounding noise in f.
      const bool stalled = cur.depth > 1 && c.error > 0.25 * cur.parent_error;
      if (c.error <= share || stalled || cur.depth >= kMaxDepth) {
        q.value += c.value;
        q.error += c.error;
        continue;
      }
      const double mid = 0.5 * (c.a + c.b);
      stack.push_back({estimate(c.a, mid), cur.depth + 1, c.error});
      stack.push_back({estimate(mid, c.b), cur.depth + 1, c.error});
    }
  }
  return q;
}

Quadrature quad_norm(const SystemParams& sys, const CoeffPair& c) {
  return integrate(
      sys, [&](double t) { return std::norm(amplitude_from_coeffs(sys, c, t)); },
      tail_bound(sys, amp2_of(c), 0));
}

Quadrature quad_first_moment(const SystemParams& sys, const CoeffPair& c) {
  return integrate(
      sys, [&](double t) { return t * std::norm(amplitude_from_coeffs(sys, c, t)); },
      tail_bound(sys, amp2_of(c), 1));
}

double quad_conditional_lifetime(const SystemParams& sys, const CoeffPair& c) {
  return quad_first_moment(sys, c).value / quad_norm(sys, c).value;
}

double quad_conditional_lifetime(const SystemParams& sys, const BasisMap& basis,
                                 const StateSpec& pre, const StateSpec& post) {
  const double num =
      integrate(sys, [&](double t) { return t * transition_probability(sys, basis, pre, post, t); })
          .value;
  const double den =
      integrate(sys, [&](double t) { return transition_probability(sys, basis, pre, post, t); })
          .value;
  return num / den;
}

double quad_unconditional_lifetime(const SystemParams& sys, const BasisMap& basis,
                                   const StateSpec& pre) {
  return integrate(sys, [&](double t) { return t * decay_density_direct(sys, basis, pre, t); })
      .value;
}

Quadrature quad_mass_unconditional(const SystemParams& sys, const BasisMap& basis,
                                   const StateSpec& pre) {
  // Beyond t_max the density is bounded by the decay of the survival itself.
  const double bound = survival_direct(sys, basis, pre, t_max_of(sys));
  return integrate(sys, [&](double t) { return decay_density(sys, basis, pre, t); }, bound);
}

Quadrature quad_mass_conditional(const SystemParams& sys, const CoeffPair& c) {
  const double norm = norm_integral(sys, c);
  return integrate(
      sys, [&](double t) { return conditional_density(sys, c, t); },
      tail_bound(sys, amp2_of(c), 0) / norm);
}

}  // namespace decaylife::oracle
