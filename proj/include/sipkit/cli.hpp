#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sipkit/numeric.hpp"

namespace sipkit::cli {

using Json = nlohmann::json;

// One executed command, fully echoed.  `params` carries every input
// including defaulted ones plus a reconstructed argv (so re-running
// params["argv"] reproduces the report), `witnesses` the command-specific
// payload, `counts` the search statistics.  Big integers travel as decimal
// strings and rationals as "p/q"; nothing is rounded.
struct RunReport {
  std::string command;
  Json params = Json::object();
  Verdict verdict = Verdict::pass;
  Json witnesses = Json::object();
  Json counts = Json::object();
  double elapsed_ms = 0.0;

  Json to_json() const;
  // Two-line CSV: a header of flattened JSON-pointer keys, then the values.
  // Encodes exactly the same content as to_json().
  std::string to_csv() const;
};

struct CliResult {
  int exit_code = 0;   // 0 pass, 1 fail/refuted, 2 inconclusive, 64 usage
  RunReport report;    // meaningful unless exit_code == 64
  std::string output;  // rendered report, or usage/help text
};

// Runs one tokenized command line (program name excluded).
CliResult execute(const std::vector<std::string>& args);

// Prints the rendered output (stderr for usage errors) and returns the
// exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace sipkit::cli
