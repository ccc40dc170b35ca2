#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frlab.h"

int main(int argc, char** argv) {
  CLI::App app{"frlab: fractional-Laplacian stochastic PDE laboratory"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", run_config, "JSON config file")->required();

  std::string sweep_config, axis;
  std::vector<double> factors;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Refinement sweep along one axis");
  sweep->add_option("config", sweep_config, "JSON config file")->required();
  sweep->add_option("--axis", axis, "dt | grid | K | K_basis | mc_paths")
      ->required();
  sweep->add_option("--factors", factors, "scale factors per level")
      ->required()
      ->expected(-1);

  CLI::App* list =
      app.add_subcommand("list-experiments", "Print known experiment names");

  CLI11_PARSE(app, argc, argv);

  struct SessionDeleter {
    void operator()(frlab_session* s) const { frlab_session_destroy(s); }
  };
  std::unique_ptr<frlab_session, SessionDeleter> session(
      frlab_session_create());
  if (!session) {
    std::fprintf(stderr, "failed to create session\n");
    return 1;
  }

  if (list->parsed()) {
    std::printf("%s\n", frlab_list_experiments(session.get()));
    return 0;
  }

  int code = 0;
  if (run->parsed()) {
    code = frlab_run(session.get(), run_config.c_str());
  } else if (sweep->parsed()) {
    code = frlab_sweep(session.get(), sweep_config.c_str(), axis.c_str(),
                       factors.data(), static_cast<int>(factors.size()));
  }
  const char* msg = frlab_last_error(session.get());
  if (msg && msg[0]) std::fprintf(code == 0 ? stdout : stderr, "%s\n", msg);
  return code;
}
