// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  capid::cli::RunConfig config;
  CLI::App app{"Identification of decision-rule distributions from aggregate choice data", "capid"};
  app.add_option("command", config.command, "What to compute")
      ->required()
      ->check(CLI::IsMember(capid::cli::command_names()));
  app.add_option("-i,--input", config.input_path, "Problem file (JSON, schema capid/1)")->required();
  app.add_option("-o,--output", config.output_path, "Write the report here instead of stdout");
  app.add_option("--mode", config.mode, "Arithmetic: exact rationals or floats with 1e-9 tolerance")
      ->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--format", config.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", config.seed, "Seed for simulate");
  app.add_option("--q", config.q, "Distribution over rules as inline JSON, e.g. '{\"r1\": \"1/2\", \"r2\": \"1/2\"}'");
  app.add_option("--kappa", config.kappa, "Average bias to check in identify-kappa");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : capid::cli::kExitInvalid;
  }
  return capid::cli::run(config, std::cout, std::cerr);
}
