#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsruin/laplace.hpp"
#include "tsruin/model.hpp"
#include "tsruin/sim.hpp"

namespace tsruin::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kRegime = 4 };

enum class Command { B, Surface, Simulate, Benchmark, Scale };

struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  int steps = 1;
};

struct RunConfig {
  Command command = Command::B;

  std::optional<double> c;
  std::optional<double> alpha;
  std::optional<double> rho;
  std::optional<double> premium;
  std::optional<double> xi;

  GridSpec u{1.0, 2.0, 3};
  GridSpec t{10.0, 20.0, 6};

  laplace::InversionSpec inversion;
  sim::SimPlan plan;

  std::string method = "tulta";
  std::string approach = "mc";
  std::optional<std::filesystem::path> out;

  ClaimsModel model() const;
};

// Points of a grid.  min = 0 gives the left-open grid min + (max-min) i/steps,
// i = 1..steps; otherwise `steps` equally spaced points from min to max.
std::vector<double> make_grid(const GridSpec& g);

// %.9g
std::string format_number(double x);

// Tab-separated rows of numbers under a '#' header.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void add(const std::vector<double>& row);
  // Preformatted cells, for integer columns.
  void add_cells(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  void write(std::ostream& os) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Thrown by parse() for --help; what() is the help text.
struct HelpRequested : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses argv into a RunConfig.  Throws CLI::ParseError-derived exceptions
// on malformed input (translated to exit code 2 by run()).
RunConfig parse(int argc, const char* const* argv);

// Executes a parsed command.  Data goes to `out` (or cfg.out), notes and
// warnings to `log`.
void execute(const RunConfig& cfg, std::ostream& out, std::ostream& log);

// parse + execute with error handling; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsruin::cli
