#include "decaylife/cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "decaylife/io.hpp"
#include "decaylife/optimize.hpp"
#include "decaylife/rng.hpp"

namespace decaylife::cli {

namespace {

constexpr std::array<Preset, 3> kPresets{{
    {"dmeson", 1e-3, 1.0, "ΔM/Γ~10⁻³"},
    {"bmeson", 0.77, 1.0, "ΔM/Γ≈0.77, k≈1"},
    {"bsmeson", 26.89, 1.0, "ΔM/Γ=26.89"},
}};

constexpr std::array<std::string_view, 27> kKeys{
    "preset", "dm",       "gl",        "gh",           "ml",         "mh",     "eps",
    "normalize-gamma",    "p",         "pre",          "bmag",       "theta",  "post",
    "k-grid", "eps-grid", "bmag-grid", "theta-grid",   "seed",       "out",    "format",
    "n",      "figure",   "unconditional", "stratified", "quick",    "config", "grid"};

constexpr std::array<std::string_view, 5> kSystemKeys{"dm", "gl", "gh", "ml", "mh"};

bool has(const Settings& s, std::string_view key) { return s.count(std::string(key)) > 0; }

}  // namespace

std::span<const Preset> presets() { return kPresets; }

const Preset& find_preset(std::string_view name) {
  for (const Preset& p : kPresets)
    if (p.name == name) return p;
  throw Error(ErrorKind::InvalidParams, "unknown preset '" + std::string(name) + "'");
}

std::span<const std::string_view> known_keys() { return kKeys; }

Settings merge_settings(const Settings& cli, const Settings& file) {
  Settings merged;
  for (const auto& [key, value] : file) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw Error(ErrorKind::InvalidParams, "unknown config key '" + key + "'");
    merged[key] = value;
  }
  for (const auto& [key, value] : cli) merged[key] = value;
  return merged;
}

std::vector<double> GridSpec::values() const {
  if (n == 1) return {lo};
  if (log) return log_grid(lo, hi, n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

GridSpec parse_grid(std::string_view text) {
  std::string t(text);
  bool log = false;
  if (t.size() > 5 && t.ends_with("(log)")) {
    log = true;
    t.resize(t.size() - 5);
  } else if (t.size() > 4 && t.ends_with(":log")) {
    log = true;
    t.resize(t.size() - 4);
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = t.find(':', start);
    parts.push_back(t.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) throw Error(ErrorKind::InvalidParams, "grid must be lo:hi:n[(log)]");
  GridSpec g{io::parse_double(parts[0]), io::parse_double(parts[1]), 0, log};
  const double n = io::parse_double(parts[2]);
  if (!(n >= 1.0) || n != std::floor(n) || n > 1e7)
    throw Error(ErrorKind::InvalidParams, "grid point count must be a positive integer");
  g.n = static_cast<std::size_t>(n);
  if (!(g.hi >= g.lo)) throw Error(ErrorKind::InvalidParams, "grid needs lo <= hi");
  if (log && !(g.lo > 0.0)) throw Error(ErrorKind::InvalidParams, "log grid needs lo > 0");
  return g;
}

double get_double(const Settings& s, const std::string& key) {
  const auto it = s.find(key);
  if (it == s.end()) throw Error(ErrorKind::InvalidParams, "missing --" + key);
  return io::parse_double(it->second);
}

std::optional<double> find_double(const Settings& s, const std::string& key) {
  if (!has(s, key)) return std::nullopt;
  return get_double(s, key);
}

bool get_flag(const Settings& s, const std::string& key) {
  const auto it = s.find(key);
  if (it == s.end()) return false;
  const std::string& v = it->second;
  if (v.empty() || v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(ErrorKind::InvalidParams, "--" + key + " expects a boolean");
}

SystemChoice resolve_system(const Settings& s) {
  const bool explicit_system =
      std::any_of(kSystemKeys.begin(), kSystemKeys.end(), [&](auto k) { return has(s, k); });
  if (has(s, "preset") && explicit_system)
    throw Error(ErrorKind::InvalidParams, "give either --preset or an explicit system, not both");

  SystemChoice choice{SystemParams(0.0, 0.0, 1.0, 1.0), std::nullopt};
  if (has(s, "preset")) {
    const Preset& p = find_preset(s.at("preset"));
    choice = {SystemParams::from_ratios(p.dm_over_gamma, p.k), p};
  } else if (explicit_system) {
    if (!has(s, "gl") || !has(s, "gh"))
      throw Error(ErrorKind::InvalidParams, "explicit system needs --gl and --gh");
    const double ml = find_double(s, "ml").value_or(0.0);
    const auto dm = find_double(s, "dm");
    const auto mh = find_double(s, "mh");
    double heavy = ml;
    if (dm && mh) {
      if (std::abs(*mh - ml - *dm) > 1e-12 * std::max(1.0, std::abs(*mh)))
        throw Error(ErrorKind::InvalidParams, "--dm disagrees with --mh - --ml");
      heavy = *mh;
    } else if (dm) {
      if (*dm < 0.0) throw Error(ErrorKind::InvalidParams, "--dm must be >= 0");
      heavy = ml + *dm;
    } else if (mh) {
      heavy = *mh;
    }
    choice = {SystemParams(ml, heavy, get_double(s, "gl"), get_double(s, "gh")), std::nullopt};
  } else {
    throw Error(ErrorKind::InvalidParams, "no system: use --preset NAME or --gl/--gh [--dm]");
  }
  if (get_flag(s, "normalize-gamma")) choice.system = choice.system.normalized();
  return choice;
}

double resolve_dm_over_gamma(const Settings& s) {
  if (const auto eps = find_double(s, "eps")) {
    if (!(*eps >= 0.0) || !std::isfinite(*eps))
      throw Error(ErrorKind::InvalidParams, "--eps must be a finite value >= 0");
    return *eps;
  }
  const DerivedParams d = derive(resolve_system(s).system);
  return d.delta_m / d.gamma;
}

BasisMap resolve_basis(const Settings& s) {
  if (const auto p = find_double(s, "p")) {
    if (!(*p >= 0.0 && *p <= 1.0)) throw Error(ErrorKind::InvalidParams, "--p must lie in [0,1]");
    return BasisMap::restricted(*p);
  }
  return BasisMap::symmetric();
}

StateSpec resolve_pre(const Settings& s) {
  const auto it = s.find("pre");
  if (it == s.end() || it->second == "P") return StateSpec::flavor_p();
  if (it->second == "Pbar") return StateSpec::flavor_pbar();
  throw Error(ErrorKind::InvalidParams, "--pre must be P or Pbar");
}

std::uint64_t resolve_seed(const Settings& s) {
  auto parse = [](std::string_view text, std::string_view what) {
    std::uint64_t v = 0;
    int base = 10;
    if (text.starts_with("0x") || text.starts_with("0X")) {
      text.remove_prefix(2);
      base = 16;
    }
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v, base);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
      throw Error(ErrorKind::InvalidParams, std::string(what) + " is not an unsigned integer");
    return v;
  };
  if (const auto it = s.find("seed"); it != s.end()) return parse(it->second, "--seed");
  if (const char* env = std::getenv("DECAYLIFE_SEED"); env && *env) return parse(env, "DECAYLIFE_SEED");
  return kDefaultSeed;
}

bool is_restricted(const Settings& s) {
  if (const auto p = find_double(s, "p"); p && std::abs(*p - std::sqrt(0.5)) > 1e-15) return false;
  const auto it = s.find("pre");
  return it == s.end() || it->second == "P";
}

}  // namespace decaylife::cli
