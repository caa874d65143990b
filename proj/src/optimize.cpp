#include "decaylife/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "decaylife/kernels.hpp"

namespace decaylife {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEdge = 1e-8;
constexpr double kLogBreak = 0.02;
constexpr double kCornerMaxDm = 1e-2;
constexpr double kCornerMaxKm1 = 1e-6;
constexpr double kTieRelative = 1e-12;
constexpr double kInvPhi = 0.6180339887498949;

using Objective = std::function<double(double, double)>;

double wrap(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

struct Point {
  double u;
  double v;
  double score;  // sign * value, -inf when infeasible
};

// Maximizes sign * f over u in [u_lo, u_hi] and periodic v (or v held fixed).
class Search {
 public:
  Search(Objective f, double sign, double u_lo, double u_hi, bool fixed_v,
         const ExtremizeOptions& opts)
      : f_(std::move(f)), sign_(sign), u_lo_(u_lo), u_hi_(u_hi), fixed_v_(fixed_v), opts_(opts) {}

  double score(double u, double v) const {
    const double value = f_(u, v);
    return std::isnan(value) ? -std::numeric_limits<double>::infinity() : sign_ * value;
  }

  // Candidate points from a precomputed grid, best first, at most `count`,
  // skipping neighbours of already selected nodes.
  std::vector<Point> candidates(std::span<const double> us, std::span<const double> vs,
                                std::span<const double> values, std::size_t count) const {
    const std::size_t nv = vs.size();
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto key = [&](std::size_t i) {
      const double v = values[i];
      return std::isnan(v) ? -std::numeric_limits<double>::infinity() : sign_ * v;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double ka = key(a);
      const double kb = key(b);
      if (ka != kb) return ka > kb;
      if (vs[a % nv] != vs[b % nv]) return vs[a % nv] < vs[b % nv];
      return us[a / nv] < us[b / nv];
    });

    std::vector<Point> picked;
    std::vector<std::size_t> picked_idx;
    for (std::size_t idx : order) {
      if (picked.size() >= count || !std::isfinite(key(idx))) break;
      const auto iu = static_cast<std::ptrdiff_t>(idx / nv);
      const auto iv = static_cast<std::ptrdiff_t>(idx % nv);
      bool near = false;
      for (std::size_t p : picked_idx) {
        const auto du = std::abs(iu - static_cast<std::ptrdiff_t>(p / nv));
        auto dv = std::abs(iv - static_cast<std::ptrdiff_t>(p % nv));
        dv = std::min(dv, static_cast<std::ptrdiff_t>(nv) - dv);
        if (du <= 2 && dv <= 2) near = true;
      }
      if (near) continue;
      picked_idx.push_back(idx);
      picked.push_back({us[idx / nv], vs[idx % nv], key(idx)});
    }
    return picked;
  }

  // Alternating golden-section refinement; only improvements are accepted.
  Point refine(Point start, double hu, double hv, std::vector<double>& trace) const {
    Point best = start;
    trace.push_back(best.score);
    for (std::size_t sweep = 0; sweep < opts_.max_sweeps; ++sweep) {
      const Point before = best;
      {
        const double lo = std::max(u_lo_, best.u - hu);
        const double hi = std::min(u_hi_, best.u + hu);
        const double v = best.v;
        const auto [u, s] = golden([&](double x) { return score(x, v); }, lo, hi);
        if (s > best.score) best = {u, v, s};
      }
      if (!fixed_v_) {
        const double u = best.u;
        const auto [v, s] =
            golden([&](double y) { return score(u, wrap(y)); }, best.v - hv, best.v + hv);
        if (s > best.score) best = {u, wrap(v), s};
      }
      trace.push_back(best.score);
      double dv = std::abs(best.v - before.v);
      dv = std::min(dv, kTwoPi - dv);
      if (std::abs(best.u - before.u) < opts_.tolerance && dv < opts_.tolerance) break;
    }
    return best;
  }

  // Golden-section search returning the best point evaluated.
  std::pair<double, double> golden(const std::function<double(double)>& g, double a,
                                   double b) const {
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = g(x1);
    double f2 = g(x2);
    double best_x = f1 >= f2 ? x1 : x2;
    double best_f = std::max(f1, f2);
    for (const double x : {a, b}) {
      const double fx = g(x);
      if (fx > best_f) {
        best_f = fx;
        best_x = x;
      }
    }
    while (b - a > opts_.tolerance) {
      if (f1 >= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = g(x1);
        if (f1 > best_f) {
          best_f = f1;
          best_x = x1;
        }
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = g(x2);
        if (f2 > best_f) {
          best_f = f2;
          best_x = x2;
        }
      }
    }
    return {best_x, best_f};
  }

  double u_lo() const { return u_lo_; }
  double u_hi() const { return u_hi_; }

 private:
  Objective f_;
  double sign_;
  double u_lo_;
  double u_hi_;
  bool fixed_v_;
  ExtremizeOptions opts_;
};

// a strictly better than b, with ties broken by smaller v then smaller u.
bool better(const Point& a, const Point& b) {
  const double scale = std::max(std::abs(a.score), std::abs(b.score));
  if (std::isfinite(scale) && std::abs(a.score - b.score) <= kTieRelative * scale) {
    if (a.v != b.v) return a.v < b.v;
    return a.u < b.u;
  }
  return a.score > b.score;
}

// Widest gap between x's grid neighbours; `fallback` when there are none.
double local_spacing(std::span<const double> grid, double x, double fallback) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  const auto i = static_cast<std::size_t>(it - grid.begin());
  double h = 0.0;
  if (i > 0 && i < grid.size()) h = std::max(h, grid[i] - grid[i - 1]);
  if (i + 1 < grid.size()) h = std::max(h, grid[i + 1] - grid[i]);
  if (i == grid.size() && grid.size() >= 2) h = grid.back() - grid[grid.size() - 2];
  return h > 0.0 ? h : fallback;
}

struct Solved {
  Point point;
  std::vector<double> trace;
};

Solved solve_direction(const Search& search, std::span<const double> us,
                       std::span<const double> vs, std::span<const double> values,
                       const ExtremizeOptions& opts, double hv) {
  Solved out{{0.0, 0.0, -std::numeric_limits<double>::infinity()}, {}};
  const double u_fallback = (search.u_hi() - search.u_lo()) / static_cast<double>(us.size());
  for (const Point& start : search.candidates(us, vs, values, std::max<std::size_t>(opts.candidates, 1))) {
    std::vector<double> trace;
    const Point p = search.refine(start, local_spacing(us, start.u, u_fallback), hv, trace);
    if (out.trace.empty() || better(p, out.point)) out = {p, std::move(trace)};
  }
  // Probe check: a random point beating the incumbent is refined in turn.
  for (std::size_t i = 0; i < opts.probes; ++i) {
    Xoshiro256ss rng(derive_seed(opts.seed, i));
    const double u = search.u_lo() + (search.u_hi() - search.u_lo()) * rng.uniform();
    const double v = vs.size() == 1 ? vs[0] : kTwoPi * rng.uniform();
    const Point probe{u, v, search.score(u, v)};
    if (probe.score > out.point.score) {
      std::vector<double> trace;
      const Point p = search.refine(probe, local_spacing(us, u, u_fallback), hv, trace);
      if (better(p, out.point)) out = {p, std::move(trace)};
    }
  }
  return out;
}

Extremum to_extremum(const Solved& s, double sign) {
  std::vector<double> trace;
  trace.reserve(s.trace.size());
  for (double t : s.trace) trace.push_back(sign * t);
  return {sign * s.point.score, PostselectParams(s.point.u, s.point.v), false, std::nullopt,
          std::move(trace)};
}

ExtremumResult run_search(const Objective& f, std::span<const double> us,
                          std::span<const double> vs, std::span<const double> values, double u_lo,
                          double u_hi, bool fixed_v, const ExtremizeOptions& opts) {
  const double hv = fixed_v ? 0.0 : kTwoPi / static_cast<double>(vs.size());
  const Search maxer(f, 1.0, u_lo, u_hi, fixed_v, opts);
  const Search miner(f, -1.0, u_lo, u_hi, fixed_v, opts);
  return {to_extremum(solve_direction(maxer, us, vs, values, opts, hv), 1.0),
          to_extremum(solve_direction(miner, us, vs, values, opts, hv), -1.0),
          us.size(),
          vs.size(),
          opts.max_sweeps > 0,
          false};
}

// Replaces an extremum by the corner value when the corner is strictly better.
void merge_corner(Extremum& target, const Extremum& corner, double sign, double km1) {
  if (sign * corner.value <= sign * target.value) return;
  const double x = corner.arg.b_mag();
  target.value = corner.value;
  target.arg = PostselectParams(std::min(x * km1, 1.0), corner.arg.theta());
  target.limit = true;
  target.limit_x = x;
  target.trace.push_back(corner.value);
}

ExtremumResult reflect(ExtremumResult r) {
  for (Extremum* e : {&r.max, &r.min})
    e->arg = PostselectParams(e->arg.b_mag(), wrap(std::numbers::pi - e->arg.theta()));
  r.symmetry_mapped = true;
  return r;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0)
    throw Error(ErrorKind::InvalidParams, "log grid needs 0 < lo <= hi and n >= 1");
  if (n == 1) return {lo};
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_k_grid() { return log_grid(1.0, 1e4, 200); }

std::vector<double> default_b_grid(std::size_t n) {
  if (n < 8) throw Error(ErrorKind::InvalidParams, "b grid needs at least 8 points");
  const std::size_t n_log = n / 4;
  const std::size_t n_lin = n - n_log;
  std::vector<double> g;
  g.reserve(n);
  const double log_step = std::log(kLogBreak / kEdge) / static_cast<double>(n_log);
  for (std::size_t i = 0; i < n_log; ++i) g.push_back(kEdge * std::exp(log_step * static_cast<double>(i)));
  const double hi = 1.0 - kEdge;
  for (std::size_t i = 0; i < n_lin; ++i)
    g.push_back(kLogBreak + (hi - kLogBreak) * static_cast<double>(i) / static_cast<double>(n_lin - 1));
  const double special = std::numbers::sqrt2 / 2.0;
  auto nearest = std::min_element(g.begin() + static_cast<std::ptrdiff_t>(n_log), g.end(),
                                  [&](double a, double b) {
                                    return std::abs(a - special) < std::abs(b - special);
                                  });
  *nearest = special;
  return g;
}

std::vector<double> default_theta_grid(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidParams, "theta grid needs n >= 1");
  std::vector<double> g(n);
  const double step = kTwoPi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = step * static_cast<double>(i);
  return g;
}

ExtremumResult extremize_limit_x(double x_max, const ExtremizeOptions& opts) {
  if (!(x_max > 0.0)) throw Error(ErrorKind::InvalidParams, "x_max must be positive");
  std::vector<double> xs(opts.grid_b);
  for (std::size_t i = 0; i < xs.size(); ++i)
    xs[i] = x_max * static_cast<double>(i) / static_cast<double>(xs.size() - 1);
  const std::vector<double> thetas = default_theta_grid(opts.grid_theta);
  std::vector<double> values;
  values.reserve(xs.size() * thetas.size());
  for (double x : xs)
    for (double t : thetas) values.push_back(ratio_limit_x(x, t));
  // The search runs on u = x / x_max so that points fit the (b, theta) domain.
  const Objective f = [x_max](double u, double t) { return ratio_limit_x(u * x_max, t); };
  std::vector<double> us(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) us[i] = xs[i] / x_max;
  ExtremumResult r = run_search(f, us, thetas, values, 0.0, 1.0, false, opts);
  for (Extremum* e : {&r.max, &r.min}) {
    const double x = e->arg.b_mag() * x_max;
    e->limit = true;
    e->limit_x = x;
    e->arg = PostselectParams(std::min(x, 1.0), e->arg.theta());
  }
  return r;
}

ExtremumResult extremize(const RegimeConfig& cfg, const ExtremizeOptions& opts) {
  cfg.validate();
  if (cfg.k < 1.0) {
    const RegimeConfig mapped{cfg.dm_over_gamma, 1.0 / cfg.k};
    return reflect(extremize(mapped, opts));
  }
  const std::vector<double> bs = default_b_grid(opts.grid_b);
  const std::vector<double> thetas = default_theta_grid(opts.grid_theta);
  const std::vector<double> values = opts.parallel ? evaluate_ratio_grid(cfg, bs, thetas)
                                                   : evaluate_ratio_grid_serial(cfg, bs, thetas);
  const Objective f = [&](double b, double t) { return ratio_or_nan(cfg, PostselectParams(b, t)); };
  ExtremumResult r = run_search(f, bs, thetas, values, kEdge, 1.0 - kEdge, false, opts);

  const double km1 = cfg.k - 1.0;
  if (opts.corner_search && cfg.dm_over_gamma <= kCornerMaxDm && km1 <= kCornerMaxKm1) {
    ExtremizeOptions corner_opts = opts;
    corner_opts.probes = 0;
    const ExtremumResult corner = extremize_limit_x(10.0, corner_opts);
    merge_corner(r.max, corner.max, 1.0, km1);
    merge_corner(r.min, corner.min, -1.0, km1);
  }
  return r;
}

ExtremumResult extremize_fixed_theta(const RegimeConfig& cfg, double theta,
                                     const ExtremizeOptions& opts) {
  cfg.validate();
  const double t = PostselectParams(0.5, theta).theta();
  const std::vector<double> bs = default_b_grid(opts.grid_b);
  const std::vector<double> thetas{t};
  const std::vector<double> values = evaluate_ratio_grid_serial(cfg, bs, thetas);
  const Objective f = [&](double b, double th) { return ratio_or_nan(cfg, PostselectParams(b, th)); };
  return run_search(f, bs, thetas, values, kEdge, 1.0 - kEdge, true, opts);
}

namespace {

EnvelopeCurve assemble(double dm_over_gamma, std::span<const double> k_grid,
                       std::vector<ExtremumResult> detail) {
  EnvelopeCurve curve{dm_over_gamma, {k_grid.begin(), k_grid.end()}, {}, {}, std::move(detail)};
  for (const ExtremumResult& r : curve.detail) {
    curve.upper.push_back(r.r_max());
    curve.lower.push_back(r.r_min());
  }
  return curve;
}

void check_k_grid(double dm_over_gamma, std::span<const double> k_grid) {
  for (double k : k_grid) RegimeConfig{dm_over_gamma, k}.validate();
}

}  // namespace

EnvelopeCurve envelope(double dm_over_gamma, std::span<const double> k_grid,
                       const ExtremizeOptions& opts) {
  check_k_grid(dm_over_gamma, k_grid);
  ExtremizeOptions inner = opts;
  inner.parallel = false;
  std::vector<std::optional<ExtremumResult>> slots(k_grid.size());
  const auto n = static_cast<std::ptrdiff_t>(k_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    slots[idx] = extremize({dm_over_gamma, k_grid[idx]}, inner);
  }
  std::vector<ExtremumResult> detail;
  detail.reserve(slots.size());
  for (auto& s : slots) detail.push_back(std::move(*s));
  return assemble(dm_over_gamma, k_grid, std::move(detail));
}

EnvelopeCurve envelope_serial(double dm_over_gamma, std::span<const double> k_grid,
                              const ExtremizeOptions& opts) {
  check_k_grid(dm_over_gamma, k_grid);
  ExtremizeOptions inner = opts;
  inner.parallel = false;
  std::vector<ExtremumResult> detail;
  detail.reserve(k_grid.size());
  for (double k : k_grid) detail.push_back(extremize({dm_over_gamma, k}, inner));
  return assemble(dm_over_gamma, k_grid, std::move(detail));
}

EnvelopeCurve envelope_fixed_theta(double dm_over_gamma, double theta,
                                   std::span<const double> k_grid,
                                   const ExtremizeOptions& opts) {
  check_k_grid(dm_over_gamma, k_grid);
  std::vector<std::optional<ExtremumResult>> slots(k_grid.size());
  const auto n = static_cast<std::ptrdiff_t>(k_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    slots[idx] = extremize_fixed_theta({dm_over_gamma, k_grid[idx]}, theta, opts);
  }
  std::vector<ExtremumResult> detail;
  detail.reserve(slots.size());
  for (auto& s : slots) detail.push_back(std::move(*s));
  return assemble(dm_over_gamma, k_grid, std::move(detail));
}

RegionSet region_figure4(std::span<const double> k_grid, const ExtremizeOptions& opts) {
  const double fixed = std::numbers::pi - 0.01;
  return {{envelope(1e-3, k_grid, opts), envelope(1.0, k_grid, opts), envelope(1e3, k_grid, opts)},
          envelope_fixed_theta(1e3, fixed, k_grid, opts),
          fixed};
}

}  // namespace decaylife
