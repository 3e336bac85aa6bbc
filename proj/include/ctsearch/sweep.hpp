#pragma once

// Experiment drivers behind the command-line tool. Each command produces a
// table (emitted as CSV or JSON), a list of self-checks, and for some
// commands an additional summary.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ctsearch {

enum class Command { series, sweep_epsilon, scaling, distribution, validate };
enum class OutputFormat { csv, json };

const char* to_string(Command command);
std::optional<Command> parse_command(const std::string& name);

inline constexpr std::uint64_t kDefaultSeed = 20011017;

struct SweepConfig {
  Command command = Command::series;
  double energy = 1.0;
  std::vector<double> epsilons;
  std::vector<std::size_t> dims;
  std::optional<double> t_max;
  std::optional<double> dt;
  std::size_t samples = 100000;
  std::uint64_t seed = kDefaultSeed;
  std::string output_path;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  bool allow_negative_epsilon = false;
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Fills empty grids with the command's defaults.
SweepConfig with_defaults(SweepConfig config);

// Throws ConfigError with a one-line reason.
void validate_config(const SweepConfig& config);

using Cell = std::variant<std::monostate, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Check {
  std::string name;
  double worst;
  double tolerance;
  bool pass;
  std::string worst_case;  // inputs at which `worst` was attained
};

struct ScalingFit {
  double epsilon;
  double exponent;   // slope of log T against log N
  double intercept;
  double r_squared;
  std::vector<std::pair<double, double>> points;  // (N, T)
  double trials_over_n;  // expected_trials / N at the largest N
};

// Ordinary least squares of log(y) on log(x). Requires >= 3 points with
// positive coordinates.
ScalingFit fit_power_law(std::span<const std::pair<double, double>> points);

struct DistributionSummary {
  std::size_t dim;
  std::size_t samples;
  std::uint64_t seed;
  double ks_exact;
  double ks_paper;
  double ks_paper_real_part;  // |Re<w|s>| samples against the half-normal curve
  double ks_critical_5pct;
  double p_value_exact;
  double mean_x2;
  double mean_x2_standard_error;
  double expected_mean_x2;  // 1/N
};

struct CommandResult {
  Command command;
  Table table;
  std::vector<Check> checks;
  std::vector<ScalingFit> fits;
  std::optional<DistributionSummary> distribution;

  bool all_passed() const;
};

// Columns: t, p_closed, p_oracle, abs_err
CommandResult run_series(const SweepConfig& config);
// Columns: epsilon, omega, p_max, t_star, expected_total_time, eq6_asymptote
CommandResult run_epsilon_sweep(const SweepConfig& config);
// One ScalingFit per epsilon.
CommandResult run_scaling(const SweepConfig& config);
// Columns: x_bin, empirical_density, exact_density, paper_density
CommandResult run_distribution(const SweepConfig& config);
// Closed form vs effective-2d vs RK4, norm drift and theta identity.
CommandResult run_validate(const SweepConfig& config);

// validate_config + dispatch.
CommandResult execute(const SweepConfig& config);

// Numbers use %.17g; LF line endings; missing values are empty fields.
std::string render_csv(const Table& table);

// {"command", "config", "results", "checks"} in that order.
std::string render_json(const SweepConfig& config, const CommandResult& result);

// Distribution summary as a standalone JSON object (the CSV side-car).
std::string render_summary_json(const SweepConfig& config, const CommandResult& result);

}  // namespace ctsearch
