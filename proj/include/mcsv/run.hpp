#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mcsv/config.hpp"

namespace mcsv {

struct RunOptions {
  /// Output directory; empty selects the config's `output` entry.
  std::filesystem::path out;
  std::optional<int> grid_n;
  bool quiet = false;
};

/// Runs `solve`, `sweep`, `barrier` or `verify`. Writes artifacts under the
/// output directory and a human-readable summary to `log` (suppressed when
/// quiet). Returns 0 iff every certificate of the subcommand passes, 1 when
/// some certificate fails, 2 on errors.
int run_subcommand(const std::string& name, const RunConfig& config, const RunOptions& options,
                   std::ostream& log, std::ostream& err);

}  // namespace mcsv
