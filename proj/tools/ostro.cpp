#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "ostrovsky/ostrovsky.h"

namespace {

enum Exit { exit_ok = 0, exit_config = 1, exit_solver = 2, exit_inconclusive = 3 };

int exit_for(ost_status status) {
  switch (status) {
    case OST_OK: return exit_ok;
    case OST_ERR_CONFIG:
    case OST_ERR_INVALID_ARGUMENT:
    case OST_ERR_IO: return exit_config;
    case OST_INCONCLUSIVE:
    case OST_ERR_QUADRATURE: return exit_inconclusive;
    default: return exit_solver;
  }
}

int load(const std::string& path, ost_config** config) {
  const ost_status st = ost_config_load(path.c_str(), config);
  if (st != OST_OK) {
    std::fprintf(stderr, "error: %s: %s\n", path.c_str(), ost_last_error());
    return exit_config;
  }
  return exit_ok;
}

int validate(const std::string& path) {
  ost_config* config = nullptr;
  if (const int rc = load(path, &config); rc != exit_ok) return rc;
  std::printf("%s: valid %s configuration\n", path.c_str(), ost_config_kind(config));
  ost_config_free(config);
  return exit_ok;
}

int run(const std::string& path) {
  ost_config* config = nullptr;
  if (const int rc = load(path, &config); rc != exit_ok) return rc;
  const ost_status st = ost_run(config);
  const int rc = exit_for(st);
  if (st == OST_OK) {
    std::printf("%s: done, outputs in %s\n", ost_config_kind(config), ost_config_output_dir(config));
  } else if (st == OST_ERR_CONVERGENCE || st == OST_INCONCLUSIVE) {
    std::fprintf(stderr, "%s: %s: %s (outputs in %s)\n", ost_config_kind(config), ost_status_string(st),
                 ost_config_run_message(config), ost_config_output_dir(config));
  } else {
    std::fprintf(stderr, "error: %s: %s\n", ost_status_string(st), ost_last_error());
  }
  ost_config_free(config);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral Ostrovsky solver and inequality verification experiments"};
  app.require_subcommand(1);
  std::string run_path, validate_path;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  run_cmd->add_option("config", run_path, "INI configuration")->required();
  auto* validate_cmd = app.add_subcommand("validate", "Check a config file without running it");
  validate_cmd->add_option("config", validate_path, "INI configuration")->required();
  auto* version_cmd = app.add_subcommand("version", "Print the library version");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }
  if (*version_cmd) {
    std::printf("%s\n", ost_version());
    return exit_ok;
  }
  if (*validate_cmd) return validate(validate_path);
  if (*run_cmd) return run(run_path);
  return exit_config;
}
