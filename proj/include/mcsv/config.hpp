#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcsv/background.hpp"
#include "mcsv/solver.hpp"

namespace mcsv {

struct PhysicalConstants {
  double q = 1.0;
  double kappa = 1.0;
  double S = 0.0;
};

/// Parsed run configuration.
///
/// The text format is line based: `[section]` headers and `key = value`
/// pairs whose values are JSON literals, `#` starts a comment. Top-level keys:
/// grid_n, profile, s, lambda ("auto" or a number), lambda_factor, eps,
/// eps_ladder, seed, output, mask_radius. Sections: [vortices] (positives,
/// negatives as lists of [x1, x2]), [solver] (SolverOptions fields) and the
/// optional [physical] (q, kappa, S), which replaces lambda, eps and s.
struct RunConfig {
  int grid_n = 64;
  VortexConfig vortices;
  std::string profile = "cp1";
  double s = 0.0;
  /// nullopt selects lambda_factor * lambda0.
  std::optional<double> lambda;
  double lambda_factor = 1.2;
  double eps = 0.01;
  std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.02, 0.01};
  std::uint64_t seed = 0;
  std::string output = "out";
  double mask_radius = 0.0;
  std::optional<PhysicalConstants> physical;
  SolverOptions solver;

  /// Model parameters with lambda filled in (pass lambda0 for "auto").
  ModelParams model(double lambda0) const;
};

/// Parses and validates. Throws Error(Config) with a line number for syntax
/// and key errors, Error(Scope) for m <= n and Error(Parameter) when the
/// profile audit rejects s.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

}  // namespace mcsv
