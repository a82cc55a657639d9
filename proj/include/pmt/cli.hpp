#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pmt/agents.hpp"

namespace pmt {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitValidation = 2, kExitFixtureMismatch = 3 };

/// Directory holding table4.csv, table5.csv and table7.csv.
std::filesystem::path default_fixture_dir();

/// "retention:p=0.5..1.0:step0.1" -> one policy per grid value, in increasing order.
struct SweepSpec {
  AgentPolicy base;
  std::string parameter;
  std::vector<double> values;

  static SweepSpec parse(const std::string& spec);
  AgentPolicy at(double value) const;
};

/// `args` excludes the program name. Output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pmt
