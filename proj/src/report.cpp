#include <cstdio>
#include <string>

#include "ctsearch/sweep.hpp"
#include "json.hpp"

namespace ctsearch {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

ordered_json json_cell(const Cell& cell) {
  struct Visitor {
    ordered_json operator()(std::monostate) const { return nullptr; }
    ordered_json operator()(double v) const { return v; }
    ordered_json operator()(const std::string& s) const { return s; }
    ordered_json operator()(bool b) const { return b; }
  };
  return std::visit(Visitor{}, cell);
}

ordered_json config_json(const SweepConfig& config) {
  ordered_json j;
  j["command"] = to_string(config.command);
  j["energy"] = config.energy;
  j["epsilon_grid"] = config.epsilons;
  j["n_grid"] = config.dims;
  j["t_max"] = config.t_max ? ordered_json(*config.t_max) : ordered_json(nullptr);
  j["dt"] = config.dt ? ordered_json(*config.dt) : ordered_json(nullptr);
  j["samples"] = config.samples;
  j["seed"] = config.seed;
  j["format"] = config.format == OutputFormat::csv ? "csv" : "json";
  j["allow_negative_epsilon"] = config.allow_negative_epsilon;
  return j;
}

ordered_json table_json(const Table& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r;
    for (std::size_t c = 0; c < table.columns.size(); ++c) r[table.columns[c]] = json_cell(row[c]);
    rows.push_back(std::move(r));
  }
  return rows;
}

ordered_json checks_json(const std::vector<Check>& checks) {
  ordered_json out = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json j;
    j["name"] = c.name;
    j["worst"] = c.worst;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    j["worst_case"] = c.worst_case;
    out.push_back(std::move(j));
  }
  return out;
}

ordered_json distribution_json(const DistributionSummary& s) {
  ordered_json j;
  j["n"] = s.dim;
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  j["ks_exact_haar"] = s.ks_exact;
  j["ks_paper_asymptotic"] = s.ks_paper;
  j["ks_paper_asymptotic_real_part"] = s.ks_paper_real_part;
  j["ks_critical_5pct"] = s.ks_critical_5pct;
  j["p_value_exact_haar"] = s.p_value_exact;
  j["mean_x2"] = s.mean_x2;
  j["mean_x2_standard_error"] = s.mean_x2_standard_error;
  j["expected_mean_x2"] = s.expected_mean_x2;
  return j;
}

ordered_json results_json(const CommandResult& result) {
  switch (result.command) {
    case Command::scaling: {
      ordered_json fits = ordered_json::array();
      for (const auto& f : result.fits) {
        ordered_json j;
        j["epsilon"] = f.epsilon;
        j["exponent"] = f.exponent;
        j["intercept"] = f.intercept;
        j["r_squared"] = f.r_squared;
        j["trials_over_n"] = f.trials_over_n;
        ordered_json pts = ordered_json::array();
        for (const auto& [n, t] : f.points) pts.push_back({{"n", n}, {"expected_total_time", t}});
        j["points"] = std::move(pts);
        fits.push_back(std::move(j));
      }
      return fits;
    }
    case Command::distribution: {
      ordered_json j;
      j["histogram"] = table_json(result.table);
      if (result.distribution) j["summary"] = distribution_json(*result.distribution);
      return j;
    }
    default:
      return table_json(result.table);
  }
}

}  // namespace

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const SweepConfig& config, const CommandResult& result) {
  ordered_json j;
  j["command"] = to_string(result.command);
  j["config"] = config_json(config);
  j["results"] = results_json(result);
  j["checks"] = checks_json(result.checks);
  return j.dump(2) + "\n";
}

std::string render_summary_json(const SweepConfig& config, const CommandResult& result) {
  ordered_json j;
  j["command"] = to_string(result.command);
  j["config"] = config_json(config);
  j["results"] = result.distribution ? distribution_json(*result.distribution) : ordered_json{};
  j["checks"] = checks_json(result.checks);
  return j.dump(2) + "\n";
}

}  // namespace ctsearch
