#include "decaylife/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "decaylife/cli/validate.hpp"
#include "decaylife/io.hpp"
#include "decaylife/kernels.hpp"
#include "decaylife/montecarlo.hpp"
#include "decaylife/optimize.hpp"

namespace decaylife::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDefaultBmag = 0.5;
constexpr double kDefaultTheta = std::numbers::pi / 2.0;

enum class Format { csv, json };

Format resolve_format(const Settings& s, Format fallback) {
  const auto it = s.find("format");
  if (it == s.end()) return fallback;
  if (it->second == "csv") return Format::csv;
  if (it->second == "json") return Format::json;
  throw Error(ErrorKind::InvalidParams, "--format must be csv or json");
}

// Writes to --out atomically, or to `out` when no path was given.
void emit(const Settings& s, std::ostream& out, const std::string& text) {
  if (const auto it = s.find("out"); it != s.end()) {
    io::write_atomic(it->second, text);
  } else {
    out << text;
  }
}

json system_json(const SystemParams& sys) {
  const DerivedParams d = derive(sys);
  return {{"mass_light", sys.mass_light()},   {"mass_heavy", sys.mass_heavy()},
          {"width_light", sys.width_light()}, {"width_heavy", sys.width_heavy()},
          {"delta_m", d.delta_m},             {"gamma", d.gamma},
          {"mass", d.mass},                   {"g", d.g},
          {"k", d.k},                         {"dm_over_gamma", d.delta_m / d.gamma}};
}

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::size_t resolve_count(const Settings& s, const std::string& key, std::size_t fallback) {
  const auto v = find_double(s, key);
  if (!v) return fallback;
  if (!(*v >= 1.0) || *v != std::floor(*v) || *v > 1e9)
    throw Error(ErrorKind::InvalidParams, "--" + key + " must be a positive integer");
  return static_cast<std::size_t>(*v);
}

ExtremizeOptions extremize_options(const Settings& s) {
  ExtremizeOptions o;
  o.seed = resolve_seed(s);
  const std::size_t g = resolve_count(s, "grid", o.grid_b);
  if (g < 8) throw Error(ErrorKind::InvalidParams, "--grid must be >= 8");
  o.grid_b = o.grid_theta = g;
  return o;
}

std::vector<double> resolve_k_grid(const Settings& s) {
  if (const auto it = s.find("k-grid"); it != s.end()) return parse_grid(it->second).values();
  return default_k_grid();
}

std::vector<double> grid_or_single(const Settings& s, const std::string& grid_key,
                                   std::optional<double> single, double fallback) {
  if (const auto it = s.find(grid_key); it != s.end()) return parse_grid(it->second).values();
  return {single.value_or(fallback)};
}

struct ChosenPost {
  PostselectParams params;
  std::string source;
  std::optional<ExtremumResult> extremum;
};

ChosenPost resolve_post(const Settings& s, const SystemParams& sys) {
  const auto it = s.find("post");
  if (it == s.end()) {
    return {PostselectParams(find_double(s, "bmag").value_or(kDefaultBmag),
                             find_double(s, "theta").value_or(kDefaultTheta)),
            "params",
            std::nullopt};
  }
  if (it->second != "argmax" && it->second != "argmin")
    throw Error(ErrorKind::InvalidParams, "--post must be argmax or argmin");
  if (s.count("bmag") || s.count("theta"))
    throw Error(ErrorKind::InvalidParams, "--post excludes --bmag/--theta");
  if (!is_restricted(s))
    throw Error(ErrorKind::InvalidParams, "--post argmax|argmin needs the symmetric basis and --pre P");
  const DerivedParams d = derive(sys);
  const ExtremumResult r = extremize({d.delta_m / d.gamma, d.k}, extremize_options(s));
  const bool want_max = it->second == "argmax";
  return {want_max ? r.argmax() : r.argmin(), it->second, r};
}

json extremum_json(const Extremum& e) {
  json j{{"value", e.value}, {"b_mag", e.arg.b_mag()}, {"theta", e.arg.theta()}, {"limit", e.limit}};
  if (e.limit_x) j["limit_x"] = *e.limit_x;
  return j;
}

std::string csv_of(std::vector<std::string> header, std::vector<std::vector<double>> columns) {
  return io::to_csv({std::move(header), std::move(columns)});
}

// -- figure -------------------------------------------------------------------

struct CurveSpec {
  double b_mag;
  double theta;
  bool caption;
};

std::string tag(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  std::string t = os.str();
  for (char& ch : t)
    if (ch == '.') ch = 'p';
  return t;
}

json write_curve(const fs::path& dir, const std::string& name, std::span<const double> ks,
                 const std::vector<double>& r) {
  io::write_atomic(dir / name, csv_of({"k", "R"}, {{ks.begin(), ks.end()}, r}));
  return {{"file", name}};
}

json write_envelope(const fs::path& dir, const std::string& stem, const EnvelopeCurve& env) {
  json files = json::array();
  files.push_back(write_curve(dir, stem + "_upper.csv", env.k_grid, env.upper));
  files.back()["border"] = "upper";
  files.push_back(write_curve(dir, stem + "_lower.csv", env.k_grid, env.lower));
  files.back()["border"] = "lower";
  for (auto& f : files) f["dm_over_gamma"] = env.dm_over_gamma;
  json limits = json::array();
  for (std::size_t i = 0; i < env.detail.size(); ++i)
    if (env.detail[i].max.limit || env.detail[i].min.limit) limits.push_back(env.k_grid[i]);
  for (auto& f : files) f["limit_points_k"] = limits;
  return files;
}

json figure_curves(int n, const fs::path& dir, std::span<const double> ks,
                   const ExtremizeOptions& opts) {
  const double pi = std::numbers::pi;
  json m{{"figure", n}, {"k_grid", {{"lo", ks.front()}, {"hi", ks.back()}, {"n", ks.size()}}}};
  json curves = json::array();
  json envelopes = json::array();
  json notes = json::array();

  auto emit_curves = [&](double eps, const std::vector<CurveSpec>& specs, bool limit_formula) {
    for (const CurveSpec& c : specs) {
      const PostselectParams ps(c.b_mag, c.theta);
      std::vector<double> r;
      if (limit_formula) {
        r.reserve(ks.size());
        for (double k : ks) r.push_back(ratio_caseA(k, c.b_mag, c.theta));
      } else {
        r = ratio_curve(eps, ks, ps);
      }
      const std::string name = "fig" + std::to_string(n) + "_b" + tag(c.b_mag) + "_theta" +
                               tag(c.theta) + ".csv";
      json entry = write_curve(dir, name, ks, r);
      entry["b_mag"] = c.b_mag;
      entry["theta"] = c.theta;
      entry["dm_over_gamma"] = eps;
      entry["caption"] = c.caption;
      curves.push_back(entry);
    }
  };

  switch (n) {
    case 1: {
      std::vector<CurveSpec> specs;
      for (double b : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}) specs.push_back({b, pi, true});
      m["dm_over_gamma"] = 1e-3;
      m["formula"] = "limit_dm0";
      emit_curves(1e-3, specs, true);
      for (auto& e : write_envelope(dir, "fig1_envelope", envelope(0.0, ks, opts)))
        envelopes.push_back(e);
      notes.push_back("curves and envelopes use the dM/Gamma -> 0 limit of R");
      break;
    }
    case 2: {
      const double eps = 1.0 / 1.01;
      std::vector<CurveSpec> specs;
      for (double b : {0.1, 0.2, 0.3, 0.96}) specs.push_back({b, pi / 2.0, true});
      for (double b : {0.7, 0.8, 0.9}) specs.push_back({b, pi, true});
      specs.push_back({std::sqrt(2.0 + std::sqrt(3.0)) / 2.0, pi / 2.0, false});
      m["dm_over_gamma"] = eps;
      m["formula"] = "exact";
      emit_curves(eps, specs, false);
      for (auto& e : write_envelope(dir, "fig2_envelope", envelope(eps, ks, opts)))
        envelopes.push_back(e);
      notes.push_back("caption states dM/Gamma = 1/1.01 while the text sets dM = Gamma; emitted at 1/1.01");
      notes.push_back("b_mag = sqrt(2+sqrt(3))/2 is the exact k = 1 minimizer that 0.96 rounds");
      break;
    }
    case 3: {
      std::vector<CurveSpec> specs;
      for (int i = 0; i <= 6; ++i) specs.push_back({std::numbers::sqrt2 / 2.0, 0.5 * i, true});
      m["dm_over_gamma"] = 1e3;
      m["formula"] = "exact";
      emit_curves(1e3, specs, false);
      for (auto& e : write_envelope(dir, "fig3_envelope", envelope(1e3, ks, opts)))
        envelopes.push_back(e);
      break;
    }
    case 4: {
      const RegionSet regions = region_figure4(ks, opts);
      m["formula"] = "exact";
      m["dm_over_gamma"] = {1e-3, 1.0, 1e3};
      const char* names[] = {"fig4_region_dm1e-3", "fig4_region_dm1", "fig4_region_dm1e3"};
      for (int i = 0; i < 3; ++i)
        for (auto& e : write_envelope(dir, names[i], regions.regions[static_cast<std::size_t>(i)]))
          envelopes.push_back(e);
      json fixed = write_curve(dir, "fig4_fixed_theta_lower.csv", ks, regions.fixed_theta_border.lower);
      fixed["border"] = "lower";
      fixed["theta"] = regions.fixed_theta;
      fixed["dm_over_gamma"] = 1e3;
      envelopes.push_back(fixed);
      break;
    }
    default:
      throw Error(ErrorKind::InvalidParams, "figure number must be 1, 2, 3 or 4");
  }
  m["curves"] = curves;
  m["envelopes"] = envelopes;
  m["notes"] = notes;
  return m;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  return kind == ErrorKind::InvalidParams ? kExitUsage : kExitDomain;
}

int cmd_eval(const Settings& s, std::ostream& out) {
  const SystemChoice choice = resolve_system(s);
  const SystemParams& sys = choice.system;
  const BasisMap basis = resolve_basis(s);
  const StateSpec pre = resolve_pre(s);
  const ChosenPost post = resolve_post(s, sys);
  const CoeffPair c = coeffs(pre, post.params.state(), basis);
  const DerivedParams d = derive(sys);

  const double tau_u = lifetime_unconditional(sys, basis, pre);
  const double tau_c = lifetime_conditional(sys, c);
  json report{{"command", "eval"},
              {"system", system_json(sys)},
              {"basis", {{"p1", complex_json(basis.p1())}, {"q1", complex_json(basis.q1())},
                         {"p2", complex_json(basis.p2())}, {"q2", complex_json(basis.q2())}}},
              {"pre", s.count("pre") ? s.at("pre") : "P"},
              {"post", {{"b_mag", post.params.b_mag()}, {"theta", post.params.theta()},
                        {"source", post.source}}},
              {"tau_unconditional", tau_u},
              {"tau_conditional", tau_c},
              {"R", tau_c / tau_u},
              {"validity", d.delta_m / (2.0 * d.gamma)}};
  if (choice.preset) {
    report["preset"] = choice.preset->name;
    report["provenance"] = choice.preset->provenance;
  }
  if (post.extremum) {
    const Extremum& e = post.source == "argmax" ? post.extremum->max : post.extremum->min;
    report["post"]["limit"] = e.limit;
    report["post"]["symmetry_mapped"] = post.extremum->symmetry_mapped;
  }

  double gaw_re = NAN, gaw_im = NAN, w_re = NAN, w_im = NAN, tau_lin = NAN;
  try {
    const cplx gaw = coupled_weak_value(sys, c);
    gaw_re = gaw.real();
    gaw_im = gaw.imag();
    report["coupled_weak_value"] = complex_json(gaw);
    const LinearLifetime lin = lifetime_linear(sys, c);
    tau_lin = lin.tau;
    report["tau_linear"] = lin.tau;
    if (d.delta_m > 0.0) {
      const WeakValue w = weak_value(sys, c);
      w_re = w.re;
      w_im = w.im;
      report["weak_value"] = {{"re", w.re}, {"im", w.im}};
    } else {
      report["weak_value"] = nullptr;
      report["weak_value_note"] = "dM = 0: only g*A_w is finite";
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OrthogonalPrePost) throw;
    report["coupled_weak_value"] = nullptr;
    report["weak_value"] = nullptr;
    report["tau_linear"] = nullptr;
    report["weak_value_note"] = e.what();
  }

  if (is_restricted(s)) {
    const RegimeConfig cfg{d.delta_m / d.gamma, d.k};
    report["R_closed_form"] = ratio_R(cfg, post.params);
    report["symmetry_mapped"] = canonicalize(d.k, post.params.theta()).symmetry_mapped;
  }

  if (resolve_format(s, Format::json) == Format::csv) {
    emit(s, out,
         csv_of({"tau_unconditional", "tau_conditional", "tau_linear", "R", "validity",
                 "weak_value_re", "weak_value_im", "coupled_weak_value_re", "coupled_weak_value_im"},
                {{tau_u}, {tau_c}, {tau_lin}, {tau_c / tau_u}, {d.delta_m / (2.0 * d.gamma)},
                 {w_re}, {w_im}, {gaw_re}, {gaw_im}}));
  } else {
    emit(s, out, report.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_figure(const Settings& s, std::ostream& out) {
  const auto it = s.find("figure");
  if (it == s.end()) throw Error(ErrorKind::InvalidParams, "figure number required (1..4)");
  const double n = io::parse_double(it->second);
  if (n != 1.0 && n != 2.0 && n != 3.0 && n != 4.0)
    throw Error(ErrorKind::InvalidParams, "figure number must be 1, 2, 3 or 4");
  const fs::path dir = s.count("out") ? fs::path(s.at("out")) : fs::path("figures");
  const std::vector<double> ks = resolve_k_grid(s);
  const json manifest = figure_curves(static_cast<int>(n), dir, ks, extremize_options(s));
  const std::string text = manifest.dump(2) + "\n";
  io::write_atomic(dir / ("fig" + std::to_string(static_cast<int>(n)) + "_manifest.json"), text);
  out << text;
  return kExitOk;
}

int cmd_sweep(const Settings& s, std::ostream& out) {
  std::optional<double> eps_single;
  if (!s.count("eps-grid")) eps_single = resolve_dm_over_gamma(s);
  const std::vector<double> eps = grid_or_single(s, "eps-grid", eps_single, 0.0);
  const std::vector<double> ks = resolve_k_grid(s);
  const std::vector<double> bs = grid_or_single(s, "bmag-grid", find_double(s, "bmag"), kDefaultBmag);
  const std::vector<double> ths =
      grid_or_single(s, "theta-grid", find_double(s, "theta"), kDefaultTheta);

  std::vector<std::vector<double>> cols(5);
  for (double e : eps) {
    for (double k : ks) {
      const std::vector<double> r = evaluate_ratio_grid({e, k}, bs, ths);
      for (std::size_t i = 0; i < bs.size(); ++i)
        for (std::size_t j = 0; j < ths.size(); ++j) {
          cols[0].push_back(e);
          cols[1].push_back(k);
          cols[2].push_back(bs[i]);
          cols[3].push_back(ths[j]);
          cols[4].push_back(r[i * ths.size() + j]);
        }
    }
  }
  if (resolve_format(s, Format::csv) == Format::json) {
    emit(s, out,
         json{{"command", "sweep"}, {"dm_over_gamma", cols[0]}, {"k", cols[1]}, {"b_mag", cols[2]},
              {"theta", cols[3]}, {"R", cols[4]}}
                 .dump() + "\n");
  } else {
    emit(s, out, csv_of({"dm_over_gamma", "k", "b_mag", "theta", "R"}, std::move(cols)));
  }
  return kExitOk;
}

int cmd_envelope(const Settings& s, std::ostream& out) {
  const double eps = resolve_dm_over_gamma(s);
  const std::vector<double> ks = resolve_k_grid(s);
  const EnvelopeCurve env = envelope(eps, ks, extremize_options(s));
  std::vector<double> amax_b, amax_t, amin_b, amin_t, max_lim, min_lim;
  for (const ExtremumResult& r : env.detail) {
    amax_b.push_back(r.argmax().b_mag());
    amax_t.push_back(r.argmax().theta());
    amin_b.push_back(r.argmin().b_mag());
    amin_t.push_back(r.argmin().theta());
    max_lim.push_back(r.max.limit ? 1.0 : 0.0);
    min_lim.push_back(r.min.limit ? 1.0 : 0.0);
  }
  if (resolve_format(s, Format::csv) == Format::json) {
    json details = json::array();
    for (const ExtremumResult& r : env.detail)
      details.push_back({{"max", extremum_json(r.max)}, {"min", extremum_json(r.min)},
                         {"symmetry_mapped", r.symmetry_mapped}});
    emit(s, out,
         json{{"command", "envelope"}, {"dm_over_gamma", eps}, {"k", env.k_grid},
              {"upper", env.upper}, {"lower", env.lower}, {"detail", details}}
                 .dump() + "\n");
  } else {
    emit(s, out,
         csv_of({"k", "upper", "lower", "argmax_b", "argmax_theta", "argmin_b", "argmin_theta",
                 "max_limit", "min_limit"},
                {env.k_grid, env.upper, env.lower, amax_b, amax_t, amin_b, amin_t, max_lim, min_lim}));
  }
  return kExitOk;
}

int cmd_sample(const Settings& s, std::ostream& out) {
  const SystemChoice choice = resolve_system(s);
  const SystemParams& sys = choice.system;
  const BasisMap basis = resolve_basis(s);
  const StateSpec pre = resolve_pre(s);
  const std::size_t n = resolve_count(s, "n", 100000);
  const std::uint64_t seed = resolve_seed(s);
  const SampleOptions opts{get_flag(s, "stratified"), true};

  json report{{"command", "sample"}, {"system", system_json(sys)}, {"n", n}, {"seed", seed},
              {"stratified", opts.stratified}};
  SampleBatch batch{{}, seed, n, SampleKind::conditional};
  double closed_form = 0.0;
  if (get_flag(s, "unconditional")) {
    batch = sample_unconditional(sys, basis, pre, n, seed, opts);
    closed_form = lifetime_unconditional(sys, basis, pre);
    report["kind"] = "unconditional";
  } else {
    const ChosenPost post = resolve_post(s, sys);
    const CoeffPair c = coeffs(pre, post.params.state(), basis);
    batch = sample_conditional(sys, c, n, seed, opts);
    closed_form = lifetime_conditional(sys, c);
    report["kind"] = "conditional";
    report["post"] = {{"b_mag", post.params.b_mag()}, {"theta", post.params.theta()},
                      {"source", post.source}};
  }
  if (choice.preset) {
    report["preset"] = choice.preset->name;
    report["provenance"] = choice.preset->provenance;
  }
  report["closed_form_lifetime"] = closed_form;
  if (n >= 2) {
    const LifetimeEstimate e = estimate_lifetime(batch);
    report["estimate"] = {{"mean", e.mean}, {"stderr", e.std_error}, {"n", e.n}};
    report["z_score"] = e.std_error > 0.0 ? (e.mean - closed_form) / e.std_error : 0.0;
  } else {
    report["estimate"] = nullptr;
  }
  const std::string text = report.dump(2) + "\n";
  if (const auto it = s.find("out"); it != s.end()) {
    const fs::path path = it->second;
    io::write_atomic(path, csv_of({"t"}, {batch.times}));
    fs::path est = path;
    est.replace_extension(".estimate.json");
    io::write_atomic(est, text);
  }
  out << text;
  return kExitOk;
}

int cmd_validate(const Settings& s, std::ostream& out, std::ostream& err) {
  const std::vector<PropertyResult> results = run_validation(resolve_seed(s), get_flag(s, "quick"));
  json j{{"command", "validate"}, {"properties", json::array()}};
  std::vector<std::string> failed;
  for (const PropertyResult& r : results) {
    j["properties"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    if (!r.pass) failed.push_back(r.name);
  }
  j["pass"] = failed.empty();
  emit(s, out, j.dump(2) + "\n");
  if (failed.empty()) return kExitOk;
  json e{{"error", {{"kind", "PropertyFailure"}, {"failed", failed}, {"exit_code", kExitInternal}}}};
  err << e.dump() << "\n";
  return kExitInternal;
}

namespace {

struct OptionSpec {
  const char* name;
  const char* help;
  bool flag;
};

constexpr OptionSpec kCommon[] = {
    {"preset", "dmeson | bmeson | bsmeson", false},
    {"dm", "mass splitting M_H - M_L", false},
    {"gl", "width of the light eigenstate", false},
    {"gh", "width of the heavy eigenstate", false},
    {"ml", "mass of the light eigenstate (default 0)", false},
    {"mh", "mass of the heavy eigenstate", false},
    {"eps", "dM/Gamma for sweep and envelope", false},
    {"normalize-gamma", "rescale the system to Gamma = 1", true},
    {"p", "restricted basis p = |<P|P_L>| (default 1/sqrt(2))", false},
    {"pre", "preselection P | Pbar", false},
    {"bmag", "|b_P| of the postselection", false},
    {"theta", "relative phase of the postselection", false},
    {"post", "argmax | argmin of R", false},
    {"k-grid", "lo:hi:n or lo:hi:n(log)", false},
    {"eps-grid", "dM/Gamma grid for sweep", false},
    {"bmag-grid", "|b_P| grid for sweep", false},
    {"theta-grid", "theta grid for sweep", false},
    {"grid", "extremize grid size per axis (default 256)", false},
    {"seed", "RNG seed (default 0x5eed or DECAYLIFE_SEED)", false},
    {"out", "output path", false},
    {"format", "csv | json", false},
    {"n", "number of draws", false},
    {"unconditional", "sample N(t|Psi) instead of the postselected density", true},
    {"stratified", "stratified uniforms", true},
    {"quick", "smaller validation suite", true},
    {"config", "key = value file; command-line flags win", false},
};

struct Bound {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

void add_common(CLI::App* app, Bound& b) {
  for (const OptionSpec& o : kCommon) {
    const std::string key = o.name;
    if (o.flag) {
      b.options[key] = app->add_flag("--" + key, o.help);
    } else {
      b.options[key] = app->add_option("--" + key, b.values[key], o.help);
    }
  }
}

Settings collect(const Bound& b) {
  Settings cli;
  for (const auto& [key, opt] : b.options) {
    if (opt->count() == 0) continue;
    const auto it = b.values.find(key);
    cli[key] = it == b.values.end() ? "true" : it->second;
  }
  return cli;
}

void write_error(std::ostream& err, std::string_view kind, std::string_view message, int code) {
  json e{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  err << e.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lifetimes of postselected two-level decaying systems", "decaylife"};
  app.require_subcommand(1);
  const char* names[] = {"eval", "figure", "sweep", "envelope", "sample", "validate"};
  const char* helps[] = {"lifetimes, weak value and R for one configuration",
                         "data files for figure 1-4",
                         "R over user grids",
                         "extrema of R over the postselection along a k grid",
                         "Monte Carlo decay times and lifetime estimate",
                         "run every module's invariant checks"};
  std::map<std::string, Bound> bound;
  std::string figure_number;
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], helps[i]);
    add_common(sub, bound[names[i]]);
    if (std::string_view(names[i]) == "figure")
      bound["figure"].options["figure"] = sub->add_option("figure", figure_number, "1..4");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, "Usage", e.what(), kExitUsage);
    return kExitUsage;
  }

  try {
    for (int i = 0; i < 6; ++i) {
      CLI::App* sub = app.get_subcommand(names[i]);
      if (!sub->parsed()) continue;
      Bound& b = bound[names[i]];
      if (std::string_view(names[i]) == "figure") b.values["figure"] = figure_number;
      const Settings cli = collect(b);
      Settings file;
      if (const auto it = cli.find("config"); it != cli.end()) file = io::read_key_values(it->second);
      const Settings s = merge_settings(cli, file);
      const std::string cmd = names[i];
      if (cmd == "eval") return cmd_eval(s, out);
      if (cmd == "figure") return cmd_figure(s, out);
      if (cmd == "sweep") return cmd_sweep(s, out);
      if (cmd == "envelope") return cmd_envelope(s, out);
      if (cmd == "sample") return cmd_sample(s, out);
      return cmd_validate(s, out, err);
    }
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    write_error(err, to_string(e.kind()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    write_error(err, "Internal", e.what(), kExitInternal);
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace decaylife::cli
