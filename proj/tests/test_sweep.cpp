#include <cmath>
#include <numbers>

#include "ctsearch/closed_form.hpp"
#include "ctsearch/ensemble_stats.hpp"
#include "ctsearch/errors.hpp"
#include "ctsearch/sweep.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace ctsearch;
using std::numbers::pi;

namespace {

SweepConfig config_for(Command c) {
  SweepConfig cfg;
  cfg.command = c;
  return with_defaults(cfg);
}

double num(const Cell& c) { return std::get<double>(c); }

}  // namespace

TEST_CASE("series: eps = 1, N = 4 peaks at t = pi") {
  auto cfg = config_for(Command::series);
  cfg.t_max = 2.0 * pi;
  cfg.dt = 2.0 * pi / 200.0;
  const auto r = execute(cfg);
  CHECK(r.table.columns == std::vector<std::string>{"t", "p_closed", "p_oracle", "abs_err"});
  REQUIRE(r.table.rows.size() == 201);
  const auto& mid = r.table.rows[100];
  CHECK(num(mid[0]) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(num(mid[1]) == doctest::Approx(1.0).epsilon(1e-14));
  double worst = 0.0;
  for (const auto& row : r.table.rows) worst = std::max(worst, num(row[3]));
  CHECK(worst <= 1e-9);
  CHECK(r.all_passed());
}

TEST_CASE("series: no driving is flat at 1/N") {
  auto cfg = config_for(Command::series);
  cfg.epsilons = {0.0};
  cfg.dims = {8};
  const auto r = execute(cfg);
  for (const auto& row : r.table.rows) CHECK(num(row[1]) == doctest::Approx(0.125).epsilon(1e-13));
}

TEST_CASE("sweep-epsilon rows satisfy their defining relations") {
  auto cfg = config_for(Command::sweep_epsilon);
  cfg.epsilons = {0.0, 0.5, 1.0, 2.0, 10.0};
  cfg.dims = {100};
  const auto r = execute(cfg);
  REQUIRE(r.table.rows.size() == 5);
  const double x2 = 0.01;
  double best_t = 1e300, best_eps = -1.0;
  for (const auto& row : r.table.rows) {
    const double eps = num(row[0]);
    const double p_max = num(row[2]);
    if (eps > 0.0) {
      const double exact = x2 * (1 + eps) * (1 + eps) / ((1 - eps) * (1 - eps) + 4 * eps * x2);
      CHECK(p_max == doctest::Approx(exact).epsilon(1e-12));
      const double t_star = num(row[3]);
      CHECK(t_star == doctest::Approx(pi / (2.0 * num(row[1]))).epsilon(1e-14));
      CHECK(num(row[4]) == doctest::Approx(t_star / p_max).epsilon(1e-14));
      if (num(row[4]) < best_t) {
        best_t = num(row[4]);
        best_eps = eps;
      }
    } else {
      CHECK(std::holds_alternative<std::monostate>(row[4]));
    }
    if (eps == 1.0) {
      CHECK(std::holds_alternative<std::monostate>(row[5]));
      CHECK(num(row[4]) == doctest::Approx(5.0 * pi).epsilon(1e-14));
    } else {
      CHECK(num(row[5]) == doctest::Approx(std::pow((eps + 1) / (eps - 1), 2) / 100.0));
    }
  }
  CHECK(best_eps == 1.0);
  CHECK(r.all_passed());
}

TEST_CASE("scaling reproduces sqrt(N) at eps = 1 and N elsewhere") {
  const auto r = execute(config_for(Command::scaling));
  REQUIRE(r.fits.size() == 4);
  for (const auto& f : r.fits) {
    const double target = f.epsilon == 1.0 ? 0.5 : 1.0;
    CHECK(std::abs(f.exponent - target) <= 0.02);
    CHECK(f.r_squared >= 0.999);
    CHECK(f.points.size() == 5);
  }
}

TEST_CASE("fit_power_law recovers an exact power law") {
  std::vector<std::pair<double, double>> pts;
  for (const double n : {10.0, 100.0, 1000.0, 1e4}) pts.emplace_back(n, 3.0 * std::pow(n, 0.75));
  const auto f = fit_power_law(pts);
  CHECK(f.exponent == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  pts.resize(2);
  CHECK_THROWS_AS(fit_power_law(pts), PreconditionError);
}

TEST_CASE("distribution histogram and summary") {
  auto cfg = config_for(Command::distribution);
  cfg.samples = 20000;
  const auto r = execute(cfg);
  REQUIRE(r.table.rows.size() == 16);
  CHECK(num(r.table.rows[0][0]) == doctest::Approx(0.5 / 40.0));
  REQUIRE(r.distribution.has_value());
  CHECK(r.distribution->ks_paper > r.distribution->ks_exact);
  // Bin-averaged exact densities integrate to the mass inside [0, 4/sqrt(N)].
  double mass = 0.0;
  for (const auto& row : r.table.rows) mass += num(row[2]) / 40.0;
  CHECK(mass == doctest::Approx(overlap_cdf(100, 0.4, OverlapLaw::exact_haar)).epsilon(1e-12));
}

TEST_CASE("validate passes on the default grid") {
  const auto r = execute(config_for(Command::validate));
  CHECK(r.checks.size() == 6);
  for (const auto& c : r.checks) {
    INFO(c.name << " worst=" << c.worst << " at " << c.worst_case);
    CHECK(c.pass);
  }
}

TEST_CASE("config validation") {
  auto bad = config_for(Command::series);
  bad.epsilons = {1.0, 2.0};
  CHECK_THROWS_AS(execute(bad), ConfigError);

  auto unsorted = config_for(Command::sweep_epsilon);
  unsorted.epsilons = {2.0, 1.0};
  CHECK_THROWS_AS(execute(unsorted), ConfigError);

  auto neg = config_for(Command::sweep_epsilon);
  neg.epsilons = {-1.0, 1.0};
  CHECK_THROWS_AS(execute(neg), ConfigError);
  neg.allow_negative_epsilon = true;
  CHECK_NOTHROW(execute(neg));

  auto narrow = config_for(Command::scaling);
  narrow.dims = {100, 200, 400};
  CHECK_THROWS_AS(execute(narrow), ConfigError);
  narrow.dims = {100, 10000};
  CHECK_THROWS_AS(execute(narrow), ConfigError);

  auto few = config_for(Command::distribution);
  few.samples = 999;
  CHECK_THROWS_AS(execute(few), ConfigError);

  auto big = config_for(Command::validate);
  big.dims = {128};
  CHECK_THROWS_AS(execute(big), ConfigError);

  auto coarse = config_for(Command::validate);
  coarse.dt = 0.01;  // 0.01 * (1 + 10) > 0.05
  CHECK_THROWS_AS(execute(coarse), ConfigError);
}

TEST_CASE("CSV rendering") {
  Table t{{"a", "b", "c"}, {{1.0 / 3.0, Cell{}, std::string("x")}, {0.1, 2.0, true}}};
  CHECK(render_csv(t) == "a,b,c\n0.33333333333333331,,x\n0.10000000000000001,2,true\n");
}

TEST_CASE("JSON report has a stable top-level layout") {
  auto cfg = config_for(Command::sweep_epsilon);
  const auto r = execute(cfg);
  const auto j = nlohmann::ordered_json::parse(render_json(cfg, r));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"command", "config", "results", "checks"});
  CHECK(j["command"] == "sweep-epsilon");
  const auto& check = j["checks"][0];
  std::vector<std::string> check_keys;
  for (const auto& [k, v] : check.items()) check_keys.push_back(k);
  CHECK(check_keys == std::vector<std::string>{"name", "worst", "tolerance", "pass", "worst_case"});
  CHECK(j["results"].size() == cfg.epsilons.size());
}
