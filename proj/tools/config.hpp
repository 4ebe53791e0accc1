#pragma once

// Run configuration for the command-line harness: key=value files plus flag
// overrides (flags win).

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ccim/coupling.hpp"

namespace ccim::cli {

using KeyValues = std::map<std::string, std::string>;

/// '#' starts a comment; blank lines are skipped; other lines must be key = value.
/// Throws ParseError with the 1-based line number.
KeyValues parse_key_values(std::string_view text);
KeyValues load_key_values(const std::string& path);

struct RunConfig {
  std::string surface = "ellipsoid";
  std::string problem = "example1";
  std::vector<int> ns{20, 40, 80};
  double tolerance = 1e-9;
  int max_iterations = 20000;
  bool precondition = true;
  std::string output = "out";
  int threads = 1;
  int verbosity = 0;
  bool tie_break = true;
  std::vector<SchemeOverride> overrides;
  // molecule
  std::string pqr;
  double level = 0.25;
  double eta = 1.0 / 40.0;
  double margin = 0.2;
  // evolve
  double t_end = 0.1;
  double r0 = 0.5;
  double cfl = 0.5;
  double dt_h2 = 1.0;
};

/// Keys: surface, problem, n (single N), ns (comma list, strictly increasing),
/// tolerance, max_iterations, precondition, output, threads, verbosity,
/// tie_break, force_scheme ("i,j,k:k,l:kind" entries separated by ';'), pqr,
/// level, eta, margin, t_end, r0, cfl, dt_h2. Throws ConfigError on unknown keys
/// or invalid values.
RunConfig make_config(const KeyValues& values);

/// `base` with every entry of `overrides` replacing or adding.
KeyValues merge(KeyValues base, const KeyValues& overrides);

std::vector<int> parse_int_list(std::string_view text);
MixedKind parse_mixed_kind(std::string_view name);

}  // namespace ccim::cli
