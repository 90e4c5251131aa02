#ifndef MTF_CLI_HPP
#define MTF_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtf::cli {

enum class Command { Limits, FiniteN, QuadratureCheck, Simulate, Verify };
enum class OutFormat { Csv, Json };
enum class McChoice { Chain, Exact, Both };

/// A fully resolved run. validate() enforces the parameter ranges of the
/// operations each command feeds; run_command() assumes a valid config.
struct RunConfig {
  Command command = Command::Limits;
  std::vector<double> gammas;
  std::vector<long> ns;
  int k_max = 2;
  std::uint64_t seed = 1;
  long samples = 500;
  long burn_in = -1; // -1: default 50 n
  long replicates = 200;
  OutFormat format = OutFormat::Csv;
  std::optional<std::string> out_path;
  double tol = 1e-6; // pass/fail tolerance for verify comparisons
  McChoice method = McChoice::Both;
};

/// Thrown for invalid configurations; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parse "0.1,0.2" or "0.1:0.5:0.1" (inclusive range) into values.
std::vector<double> parse_real_grid(const std::string& text);
std::vector<long> parse_int_grid(const std::string& text);

/// Throws ConfigError if any parameter is outside the preconditions of
/// the operations the command feeds.
void validate(const RunConfig& config);

/// Execute the command, writing the table/report to `out` and diagnostics
/// to `diag`. Returns the process exit code: 0 success, 1 verification
/// failure, 2 configuration error.
int run_command(const RunConfig& config, std::ostream& out,
                std::ostream& diag);

} // namespace mtf::cli

#endif
