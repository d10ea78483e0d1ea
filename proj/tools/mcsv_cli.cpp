#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mcsv/config.hpp"
#include "mcsv/error.hpp"
#include "mcsv/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Doubly periodic Maxwell-Chern-Simons vortex solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int grid_n = 0;
  bool quiet = false;

  for (const char* name : {"solve", "sweep", "barrier", "verify"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--grid-n", grid_n, "grid resolution override");
    sub->add_flag("--quiet", quiet, "only print failures");
  }
  app.get_subcommand("solve")->description("two-solution pipeline, field dumps and report");
  app.get_subcommand("sweep")->description("eps continuation table as CSV");
  app.get_subcommand("barrier")->description("supersolution construction and lambda0");
  app.get_subcommand("verify")->description("operator, gradient and identity checks");

  CLI11_PARSE(app, argc, argv);

  try {
    const mcsv::RunConfig cfg = mcsv::load_config(config_path);
    mcsv::RunOptions opts;
    opts.out = out_dir;
    if (grid_n > 0) opts.grid_n = grid_n;
    opts.quiet = quiet;
    return mcsv::run_subcommand(app.get_subcommands().front()->get_name(), cfg, opts, std::cout,
                                std::cerr);
  } catch (const mcsv::Error& e) {
    std::cerr << "error (" << mcsv::to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  }
}
