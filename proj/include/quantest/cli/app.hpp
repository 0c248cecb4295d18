#pragma once

#include "quantest/cli/render.hpp"
#include "quantest/inequality.hpp"
#include "quantest/inference.hpp"
#include "quantest/measures.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace quantest::cli {

enum class Command { QTest, QIneq, QCov, VerifyCoverage, VerifyBootstrap };

struct CliConfig {
  Command command = Command::QTest;
  std::string x_path;
  std::optional<std::string> y_path;
  std::string column;
  Format format = Format::Text;

  MeasureSpec measure;                        // qtest, verify with a quantile measure
  std::optional<InequalitySpec> inequality;   // qineq, verify with --ineq
  TestOptions options;
  std::vector<double> probs;                  // qcov

  std::string dist = "normal";
  std::size_t n = 100;
  std::size_t reps = 1000;
  std::size_t B = 2000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HelpRequested {
  std::string text;
};

inline constexpr std::uint64_t kDefaultSeed = 1234;

/// Parses and validates the command line (argv[0] is the program name).
/// Throws UsageError for invalid input and HelpRequested for --help.
CliConfig parse_args(int argc, const char* const* argv);
CliConfig parse_args(const std::vector<std::string>& args);  // without program name

/// Executes a parsed command. Returns 0 on success, 1 on computation errors.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-code contract: 0 ok, 2 usage error, 1 computation error.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace quantest::cli
