#include "ctsearch/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "ctsearch/closed_form.hpp"
#include "ctsearch/ensemble_stats.hpp"
#include "ctsearch/errors.hpp"
#include "ctsearch/numeric_oracle.hpp"
#include "ctsearch/search_model.hpp"

namespace ctsearch {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kSeriesTolerance = 1e-9;
constexpr double kRowIdentityTolerance = 1e-12;
constexpr double kScalingExponentTolerance = 0.02;
constexpr double kEffective2dAmplitudeTolerance = 1e-10;
constexpr double kEffective2dDriftTolerance = 1e-13;
constexpr double kRk4ProbabilityTolerance = 1e-6;
constexpr double kRk4DriftTolerance = 1e-8;
constexpr double kThetaIdentityTolerance = 1e-9;
constexpr std::size_t kValidateDenseCap = 64;
constexpr std::size_t kDefaultSeriesPoints = 256;
constexpr std::size_t kValidateSamplePoints = 257;
constexpr std::size_t kThetaProbesPerEpsilon = 64;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string describe(std::size_t n, double eps) {
  return "N=" + std::to_string(n) + " eps=" + fmt_g(eps);
}

template <typename T>
bool strictly_increasing(const std::vector<T>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](T a, T b) { return !(a < b); }) == v.end();
}

SearchParams params_for(const SweepConfig& config, double eps, std::size_t n) {
  return make_params(config.energy, eps * config.energy, n, std::nullopt,
                     config.allow_negative_epsilon);
}

// Tracks the worst value of a quantity together with where it occurred.
struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& at) {
    if (where.empty() || v > value) {
      value = v;
      where = at;
    }
  }
  Check check(std::string name, double tolerance) const {
    return {std::move(name), value, tolerance, value <= tolerance, where};
  }
};

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::series: return "series";
    case Command::sweep_epsilon: return "sweep-epsilon";
    case Command::scaling: return "scaling";
    case Command::distribution: return "distribution";
    case Command::validate: return "validate";
  }
  return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
  for (auto c : {Command::series, Command::sweep_epsilon, Command::scaling,
                 Command::distribution, Command::validate}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

bool CommandResult::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

SweepConfig with_defaults(SweepConfig config) {
  auto fill_eps = [&](std::vector<double> v) {
    if (config.epsilons.empty()) config.epsilons = std::move(v);
  };
  auto fill_dims = [&](std::vector<std::size_t> v) {
    if (config.dims.empty()) config.dims = std::move(v);
  };
  switch (config.command) {
    case Command::series:
      fill_eps({1.0});
      fill_dims({4});
      break;
    case Command::sweep_epsilon:
      fill_eps({0.0, 0.5, 1.0, 2.0, 3.0, 10.0});
      fill_dims({100});
      break;
    case Command::scaling:
      fill_eps({0.5, 1.0, 2.0, 10.0});
      fill_dims({100, 1000, 10000, 100000, 1000000});
      break;
    case Command::distribution:
      fill_eps({1.0});
      fill_dims({100});
      break;
    case Command::validate:
      fill_eps({0.0, 0.5, 1.0, 2.0, 10.0});
      fill_dims({2, 4, 16, 64});
      break;
  }
  return config;
}

void validate_config(const SweepConfig& config) {
  if (!(config.energy > 0.0) || !std::isfinite(config.energy)) {
    throw ConfigError("--energy must be positive");
  }
  if (config.epsilons.empty()) throw ConfigError("epsilon grid is empty");
  if (config.dims.empty()) throw ConfigError("N grid is empty");
  if (!strictly_increasing(config.epsilons)) {
    throw ConfigError("epsilon grid must be strictly increasing");
  }
  if (!strictly_increasing(config.dims)) throw ConfigError("N grid must be strictly increasing");
  for (const double e : config.epsilons) {
    if (!std::isfinite(e)) throw ConfigError("epsilon values must be finite");
    if (e < 0.0 && !config.allow_negative_epsilon) {
      throw ConfigError("negative epsilon requires --allow-negative-epsilon");
    }
  }
  for (const auto n : config.dims) {
    if (n < 2) throw ConfigError("N must be at least 2");
  }
  if (config.t_max && !(*config.t_max > 0.0 && std::isfinite(*config.t_max))) {
    throw ConfigError("--t-max must be positive");
  }
  if (config.dt && !(*config.dt > 0.0 && std::isfinite(*config.dt))) {
    throw ConfigError("--dt must be positive");
  }

  switch (config.command) {
    case Command::series:
      if (config.epsilons.size() != 1 || config.dims.size() != 1) {
        throw ConfigError("series takes a single epsilon and a single N");
      }
      break;
    case Command::sweep_epsilon:
      if (config.dims.size() != 1) throw ConfigError("sweep-epsilon takes a single N");
      break;
    case Command::scaling:
      if (config.dims.size() < 3) throw ConfigError("scaling needs at least 3 N values");
      if (static_cast<double>(config.dims.back()) < 100.0 * static_cast<double>(config.dims.front())) {
        throw ConfigError("scaling N grid must span at least 2 decades");
      }
      for (const double e : config.epsilons) {
        if (e <= 0.0) throw ConfigError("scaling needs epsilon > 0 (no search time otherwise)");
      }
      break;
    case Command::distribution:
      if (config.dims.size() != 1) throw ConfigError("distribution takes a single N");
      if (config.samples < 1000) throw ConfigError("distribution needs --samples >= 1000");
      break;
    case Command::validate: {
      if (config.dims.back() > kValidateDenseCap) {
        throw ConfigError("validate runs dense RK4 and needs N <= 64");
      }
      if (config.dt) {
        double max_abs_eps = 0.0;
        for (const double e : config.epsilons) max_abs_eps = std::max(max_abs_eps, std::abs(e));
        const double scaled = *config.dt * config.energy * (1.0 + max_abs_eps);
        if (scaled > kRk4StepGuard) {
          throw ConfigError("--dt violates the integrator guard: dt*(E+E') = " + fmt_g(scaled) +
                            " > 0.05");
        }
      }
      break;
    }
  }
}

ScalingFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw PreconditionError("power-law fit needs at least 3 points");
  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0 && y > 0.0)) throw PreconditionError("power-law fit needs positive data");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    const double dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw PreconditionError("power-law fit needs distinct abscissae");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  const double r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return {0.0, slope, intercept, r2, {points.begin(), points.end()}, 0.0};
}

CommandResult run_series(const SweepConfig& config) {
  const double eps = config.epsilons.front();
  const std::size_t n = config.dims.front();
  const auto params = params_for(config, eps, n);
  const double w = omega(params);
  const double t_max = config.t_max.value_or(2.0 * kPi / w);
  const double dt = config.dt.value_or(t_max / static_cast<double>(kDefaultSeriesPoints));
  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(t_max / dt)));

  std::vector<double> times(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    times[k] = t_max * static_cast<double>(k) / static_cast<double>(intervals);
  }
  const auto oracle = propagate_effective_2d(params, times);

  CommandResult result{Command::series, {{"t", "p_closed", "p_oracle", "abs_err"}, {}}, {}, {}, {}};
  Worst worst;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double p_closed = success_probability(params, times[k]);
    const double p_oracle = std::norm(oracle.amplitudes[k]);
    const double err = std::abs(p_closed - p_oracle);
    worst.update(err, "t=" + fmt_g(times[k]));
    result.table.rows.push_back({times[k], p_closed, p_oracle, err});
  }
  result.checks.push_back(worst.check("closed_vs_effective_2d_probability", kSeriesTolerance));
  return result;
}

CommandResult run_epsilon_sweep(const SweepConfig& config) {
  const std::size_t n = config.dims.front();
  CommandResult result{Command::sweep_epsilon,
                       {{"epsilon", "omega", "p_max", "t_star", "expected_total_time",
                         "eq6_asymptote"},
                        {}},
                       {},
                       {},
                       {}};
  Worst identity;
  std::optional<std::pair<double, double>> best;  // (T, eps)
  bool has_one = false;
  for (const double eps : config.epsilons) {
    const auto params = params_for(config, eps, n);
    const auto report = peak(params);
    Cell total = report.expected_total_time ? Cell{*report.expected_total_time} : Cell{};
    Cell asym = eps == 1.0 ? Cell{} : Cell{asymptotic_visibility_sq(eps, n)};
    result.table.rows.push_back({eps, omega(params), report.p_max, report.t_star, total, asym});

    if (eps > 0.0) {
      identity.update(std::abs(report.p_max - exact_visibility_sq(params)), describe(n, eps));
    }
    if (report.expected_total_time && (!best || *report.expected_total_time < best->first)) {
      best = {*report.expected_total_time, eps};
    }
    has_one = has_one || eps == 1.0;
  }
  result.checks.push_back(identity.check("p_max_matches_exact_visibility", kRowIdentityTolerance));
  if (has_one && n >= 4 && best) {
    const bool ok = best->second == 1.0;
    result.checks.push_back({"expected_total_time_minimized_at_epsilon_1", best->second, 1.0, ok,
                             "argmin eps=" + fmt_g(best->second)});
  }
  return result;
}

CommandResult run_scaling(const SweepConfig& config) {
  CommandResult result{Command::scaling,
                       {{"epsilon", "exponent", "intercept", "r_squared", "points",
                         "trials_over_n"},
                        {}},
                       {},
                       {},
                       {}};
  for (const double eps : config.epsilons) {
    std::vector<std::pair<double, double>> points;
    double trials_over_n = 0.0;
    for (const auto n : config.dims) {
      const auto report = peak(params_for(config, eps, n));
      points.emplace_back(static_cast<double>(n), *report.expected_total_time);
      trials_over_n = report.expected_trials / static_cast<double>(n);
    }
    auto fit = fit_power_law(points);
    fit.epsilon = eps;
    fit.trials_over_n = trials_over_n;
    result.table.rows.push_back({eps, fit.exponent, fit.intercept, fit.r_squared,
                                 static_cast<double>(points.size()), trials_over_n});
    if (eps == 1.0) {
      const double dev = std::abs(fit.exponent - 0.5);
      result.checks.push_back({"sqrt_n_exponent_at_epsilon_1", dev, kScalingExponentTolerance,
                               dev <= kScalingExponentTolerance,
                               "exponent=" + fmt_g(fit.exponent)});
    }
    result.fits.push_back(std::move(fit));
  }
  return result;
}

CommandResult run_distribution(const SweepConfig& config) {
  const std::size_t n = config.dims.front();
  const auto samples = collect_overlaps(n, config.samples, config.seed);
  // Independent stream family for the real-part ensemble.
  const auto real_parts =
      collect_overlaps(n, config.samples, config.seed ^ 0x5245414cULL, OverlapKind::real_part);

  const double rn = std::sqrt(static_cast<double>(n));
  const double width = 1.0 / (4.0 * rn);
  constexpr std::size_t kBins = 16;
  std::vector<std::size_t> counts(kBins, 0);
  for (const double x : samples.samples) {
    const auto bin = static_cast<std::size_t>(std::floor(x / width));
    if (bin < kBins) ++counts[bin];
  }

  CommandResult result{Command::distribution,
                       {{"x_bin", "empirical_density", "exact_density", "paper_density"}, {}},
                       {},
                       {},
                       {}};
  const double total = static_cast<double>(samples.count);
  for (std::size_t b = 0; b < kBins; ++b) {
    const double lo = static_cast<double>(b) * width;
    const double hi = static_cast<double>(b + 1) * width;
    // Bin-averaged model densities.
    const double exact =
        (overlap_cdf(n, hi, OverlapLaw::exact_haar) - overlap_cdf(n, lo, OverlapLaw::exact_haar)) /
        width;
    const double paper = (overlap_cdf(n, hi, OverlapLaw::paper_asymptotic) -
                          overlap_cdf(n, lo, OverlapLaw::paper_asymptotic)) /
                         width;
    result.table.rows.push_back(
        {0.5 * (lo + hi), static_cast<double>(counts[b]) / (total * width), exact, paper});
  }

  DistributionSummary s{};
  s.dim = n;
  s.samples = samples.count;
  s.seed = config.seed;
  s.ks_exact = ks_statistic(samples, OverlapLaw::exact_haar);
  s.ks_paper = ks_statistic(samples, OverlapLaw::paper_asymptotic);
  s.ks_paper_real_part = ks_statistic(real_parts, OverlapLaw::paper_asymptotic);
  s.ks_critical_5pct = ks_critical_value_5pct(samples.count);
  s.p_value_exact = ks_p_value(s.ks_exact, samples.count);
  const auto m = second_moment(samples);
  s.mean_x2 = m.mean;
  s.mean_x2_standard_error = m.standard_error;
  s.expected_mean_x2 = 1.0 / static_cast<double>(n);
  result.distribution = s;

  result.checks.push_back({"ks_exact_haar_5pct", s.ks_exact, s.ks_critical_5pct,
                           s.ks_exact <= s.ks_critical_5pct, "N=" + std::to_string(n)});
  const double z = std::abs(s.mean_x2 - s.expected_mean_x2);
  const double three_se = 3.0 * s.mean_x2_standard_error;
  result.checks.push_back({"mean_x2_within_3_standard_errors", z, three_se, z <= three_se,
                           "N=" + std::to_string(n)});
  return result;
}

CommandResult run_validate(const SweepConfig& config) {
  CommandResult result{Command::validate,
                       {{"n", "epsilon", "effective_2d_amplitude_error", "effective_2d_drift",
                         "rk4_probability_error", "rk4_drift", "theta_identity_residual"},
                        {}},
                       {},
                       {},
                       {}};
  Worst eff_amp, eff_drift, rk4_prob, rk4_drift, theta_res, theta_range;
  RngStream probe_rng = make_stream(config.seed, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (const auto n : config.dims) {
    for (const double eps : config.epsilons) {
      const auto params = params_for(config, eps, n);
      const std::string at = describe(n, eps);
      const double w = omega(params);
      const double horizon = 2.0 * kPi / w;

      std::vector<double> times(kValidateSamplePoints);
      for (std::size_t k = 0; k < times.size(); ++k) {
        times[k] = horizon * static_cast<double>(k) / static_cast<double>(times.size() - 1);
      }
      const auto eff = propagate_effective_2d(params, times);
      const auto eff_err = compare_to_closed_form(params, eff);
      const double eff_d = norm_drift(eff);
      eff_amp.update(eff_err.max_abs_amplitude_error, at + " t=" + fmt_g(eff_err.at_time));
      eff_drift.update(eff_d, at);

      const auto states = build_restricted_instance(params);
      const auto h = build_hamiltonian(params, states.target, states.initial);
      const double dt = config.dt.value_or(0.01 / h.energy_scale());
      const auto rk4 = integrate_schrodinger_rk4(h, states.initial, states.target, horizon, dt);
      const auto rk4_err = compare_to_closed_form(params, rk4);
      const double rk4_d = norm_drift(rk4);
      rk4_prob.update(rk4_err.max_probability_error, at);
      rk4_drift.update(rk4_d, at);

      // Theta identity at the instance overlap and at seeded random overlaps.
      double worst_res = 0.0;
      auto probe = [&](double x) {
        const auto p = make_params(config.energy, eps * config.energy, n, x,
                                   config.allow_negative_epsilon);
        const auto dq = derived_quantities(p);
        const double res = theta_identity_residual(p, dq.theta, dq.phi);
        worst_res = std::max(worst_res, res);
        theta_res.update(res, describe(n, eps) + " x=" + fmt_g(x));
        if (eps >= 0.0) {
          const double below = 0.5 * kPi - dq.theta;
          const double above = dq.theta - (0.5 * kPi + dq.phi);
          theta_range.update(std::max({0.0, below, above}), describe(n, eps) + " x=" + fmt_g(x));
        }
      };
      probe(params.overlap());
      for (std::size_t i = 0; i < kThetaProbesPerEpsilon; ++i) {
        const double x = unit(probe_rng);
        if (x > 0.0) probe(x);
      }

      result.table.rows.push_back({static_cast<double>(n), eps, eff_err.max_abs_amplitude_error,
                                   eff_d, rk4_err.max_probability_error, rk4_d, worst_res});
    }
  }

  result.checks.push_back(eff_amp.check("closed_vs_effective_2d_amplitude",
                                        kEffective2dAmplitudeTolerance));
  result.checks.push_back(eff_drift.check("effective_2d_norm_drift", kEffective2dDriftTolerance));
  result.checks.push_back(rk4_prob.check("closed_vs_rk4_probability", kRk4ProbabilityTolerance));
  result.checks.push_back(rk4_drift.check("rk4_norm_drift", kRk4DriftTolerance));
  result.checks.push_back(theta_res.check("theta_identity", kThetaIdentityTolerance));
  result.checks.push_back(theta_range.check("theta_in_branch", 0.0));
  return result;
}

CommandResult execute(const SweepConfig& config) {
  validate_config(config);
  switch (config.command) {
    case Command::series: return run_series(config);
    case Command::sweep_epsilon: return run_epsilon_sweep(config);
    case Command::scaling: return run_scaling(config);
    case Command::distribution: return run_distribution(config);
    case Command::validate: return run_validate(config);
  }
  throw ConfigError("unknown command");
}

}  // namespace ctsearch
