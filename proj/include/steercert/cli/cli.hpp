#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "steercert/io.hpp"

namespace steercert::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Subcommand { Bounds, Certify, PovmBuild, PovmCheck, Randomness, Bell3, Sweep };
enum class Format { Json, Csv };

std::string to_string(Subcommand s);

struct RunConfig {
  Subcommand subcommand = Subcommand::Bounds;
  std::optional<std::size_t> d;
  std::optional<std::vector<double>> alpha;
  bool normalize_alpha = false;
  double tolerance = 1e-7;
  std::uint64_t seed = 42;
  std::size_t restarts = 32;
  std::optional<Format> format;
  std::string output_path;

  std::string realization_path;      // certify
  std::string povm_kind;             // povm build: covariant | partial
  std::optional<std::vector<cplx>> fiducial;
  std::optional<std::vector<long long>> xi;
  std::string povm_path;             // povm check
  std::string povm_source = "builtin:covariant";  // randomness
  std::size_t iters = 500;           // bell3
  std::size_t theta_grid = 90;       // sweep
};

// Bad flags, malformed values or inconsistent options. what() names the flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --help was given; what() holds the rendered help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// args excludes the program name.
RunConfig parse_args(const std::vector<std::string>& args);

struct RunResult {
  int exit_code = 0;
  std::string output;   // report text (JSON document or CSV)
  std::string message;  // diagnostics for stderr
};

// Exit codes: 0 success, 1 failed verdict, 2 usage error, 3 I/O error.
RunResult run(const RunConfig& config);

// Full command-line entry point; writes the report to out (or the output file)
// and diagnostics to err.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

// Returns the list of schema violations for a report of the given
// subcommand; empty means valid.
std::vector<std::string> validate_report(Subcommand s, const io::json& report);

}  // namespace steercert::cli
