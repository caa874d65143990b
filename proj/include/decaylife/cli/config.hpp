#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decaylife/core.hpp"
#include "decaylife/lifetime.hpp"

namespace decaylife::cli {

struct Preset {
  std::string_view name;
  double dm_over_gamma;
  double k;
  std::string_view provenance;
};

std::span<const Preset> presets();
/// Throws InvalidParams for unknown names.
const Preset& find_preset(std::string_view name);

/// Flat option map, keyed by long flag name without dashes.
using Settings = std::map<std::string, std::string>;

/// Keys accepted on the command line and in config files.
std::span<const std::string_view> known_keys();

/// Entries in `cli` win over `file`.  Unknown file keys raise InvalidParams.
Settings merge_settings(const Settings& cli, const Settings& file);

/// `lo:hi:n`, `lo:hi:n:log` or `lo:hi:n(log)`.
struct GridSpec {
  double lo;
  double hi;
  std::size_t n;
  bool log;

  std::vector<double> values() const;
};
GridSpec parse_grid(std::string_view text);

double get_double(const Settings& s, const std::string& key);
std::optional<double> find_double(const Settings& s, const std::string& key);
bool get_flag(const Settings& s, const std::string& key);

struct SystemChoice {
  SystemParams system;
  std::optional<Preset> preset;
};

/// Exactly one of `preset` or an explicit system (gl, gh with dm or ml/mh).
/// With `normalize-gamma` the result is rescaled to Gamma = 1.
SystemChoice resolve_system(const Settings& s);

/// dM/Gamma from `eps`, a preset or an explicit system, in that order.
double resolve_dm_over_gamma(const Settings& s);

/// Symmetric unless `p` is given (restricted basis with real p, q).
BasisMap resolve_basis(const Settings& s);
/// `P` (default) or `Pbar`.
StateSpec resolve_pre(const Settings& s);

/// `seed`, else DECAYLIFE_SEED, else the built-in default.
std::uint64_t resolve_seed(const Settings& s);

/// True for p = q = 1/sqrt(2) with Psi = |P>.
bool is_restricted(const Settings& s);

}  // namespace decaylife::cli
