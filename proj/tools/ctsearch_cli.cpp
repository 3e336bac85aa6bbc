// ctsearch: time series, epsilon sweeps, scaling fits, overlap statistics and
// oracle validation for continuous-time search with a driving Hamiltonian.
//
// Exit codes: 0 success, 1 a self-check failed, 2 bad configuration.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ctsearch/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  const auto v = std::stoull(text, &used, 0);
  if (used != text.size()) throw std::invalid_argument("trailing characters");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ctsearch;

  CLI::App app{"continuous-time quantum search with a mistuned driving Hamiltonian"};
  std::string command_name = "series";
  std::string format = "csv";
  std::optional<double> epsilon;
  std::vector<double> epsilon_grid;
  std::optional<std::size_t> n;
  std::vector<std::size_t> n_grid;
  std::optional<std::string> seed_text;
  SweepConfig config;

  app.add_option("--command", command_name,
                 "series | sweep-epsilon | scaling | distribution | validate");
  app.add_option("--energy", config.energy, "oracle energy E");
  app.add_option("--epsilon", epsilon, "single E'/E");
  app.add_option("--epsilon-grid", epsilon_grid, "comma-separated E'/E values")->delimiter(',');
  app.add_option("--n", n, "single dimension N");
  app.add_option("--n-grid", n_grid, "comma-separated dimensions")->delimiter(',');
  app.add_option("--t-max", config.t_max, "end of the time grid");
  app.add_option("--dt", config.dt, "time step (grid spacing or integrator step)");
  app.add_option("--samples", config.samples, "Haar samples for distribution");
  app.add_option("--seed", seed_text, "RNG seed (falls back to CTSEARCH_SEED)");
  app.add_option("--output", config.output_path, "output file (default stdout)");
  app.add_option("--format", format, "csv | json");
  app.add_flag("--allow-negative-epsilon", config.allow_negative_epsilon,
               "permit E' < 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto command = parse_command(command_name);
    if (!command) throw ConfigError("unknown command '" + command_name + "'");
    config.command = *command;

    if (format == "csv") {
      config.format = OutputFormat::csv;
    } else if (format == "json") {
      config.format = OutputFormat::json;
    } else {
      throw ConfigError("--format must be csv or json");
    }

    if (epsilon && !epsilon_grid.empty()) {
      throw ConfigError("give either --epsilon or --epsilon-grid, not both");
    }
    if (n && !n_grid.empty()) throw ConfigError("give either --n or --n-grid, not both");
    if (epsilon) config.epsilons = {*epsilon};
    if (!epsilon_grid.empty()) config.epsilons = epsilon_grid;
    if (n) config.dims = {*n};
    if (!n_grid.empty()) config.dims = n_grid;

    if (!seed_text) {
      if (const char* env = std::getenv("CTSEARCH_SEED"); env && *env) seed_text = env;
    }
    if (seed_text) {
      try {
        config.seed = parse_seed(*seed_text);
      } catch (const std::exception&) {
        throw ConfigError("seed '" + *seed_text + "' is not an unsigned 64-bit integer");
      }
    }

    config = with_defaults(std::move(config));
    const CommandResult result = execute(config);

    const bool csv = config.format == OutputFormat::csv;
    const std::string primary = csv ? render_csv(result.table) : render_json(config, result);
    const bool has_summary =
        csv && (config.command == Command::distribution || config.command == Command::validate);

    if (config.output_path.empty()) {
      std::cout << primary;
      if (has_summary) std::cerr << render_summary_json(config, result);
    } else {
      if (!write_file(config.output_path, primary)) {
        std::cerr << "error: cannot write " << config.output_path << "\n";
        return kExitConfig;
      }
      if (has_summary &&
          !write_file(config.output_path + ".summary.json", render_summary_json(config, result))) {
        std::cerr << "error: cannot write " << config.output_path << ".summary.json\n";
        return kExitConfig;
      }
    }

    for (const auto& c : result.checks) {
      if (!c.pass) {
        std::cerr << "check failed: " << c.name << " worst=" << c.worst
                  << " tolerance=" << c.tolerance << " at " << c.worst_case << "\n";
      }
    }
    return result.all_passed() ? kExitOk : kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
