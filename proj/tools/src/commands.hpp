// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace capid::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUnreadable = 1,
  kExitInvalid = 2,
  kExitSizeLimit = 3,
  kExitInternal = 4,
};

struct RunConfig {
  std::string command;
  std::string input_path;
  std::optional<std::string> output_path;
  std::string mode = "exact";
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> q;  // inline JSON
  std::optional<std::string> kappa;
};

const std::vector<std::string>& command_names();

/// Runs one command. The report goes to config.output_path when set, else
/// to `out`; diagnostics go to `err`. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace capid::cli
