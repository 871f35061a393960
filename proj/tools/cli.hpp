#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rotkit::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kUsage = 2,
  kResource = 3,
  kVerification = 4,
};

enum class OutputFormat { json, csv };

struct RunConfig {
  long float_precision_bits = 128;
  std::optional<std::uint64_t> max_depth;  // unset: lambda-tree default policy
  std::uint64_t orbit_step_cap = 1u << 20;
  std::uint64_t exact_bit_budget = 65536;
  std::uint64_t grid_cap = 1000000;
  OutputFormat output_format = OutputFormat::json;
};

// Applies `key = value` lines ('#' starts a comment). Throws ParseError on
// unknown keys or bad values.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin);

// Runs one command line (args excludes the program name). Output goes to
// `out`, diagnostics to `err`; the return value is the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rotkit::cli
