#include "ctsearch/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ctsearch/errors.hpp"

namespace ctsearch {

namespace {

constexpr double kPi = std::numbers::pi;

// ((1-eps)/2)^2 + eps x^2, rewritten as ((1+eps)/2)^2 - eps (1-x^2) for
// eps < 0 so that both terms are non-negative.
double omega_sq_over_e_sq(double eps, double x) {
  if (eps >= 0.0) {
    const double a = 0.5 * (1.0 - eps);
    return a * a + eps * x * x;
  }
  const double b = 0.5 * (1.0 + eps);
  return b * b - eps * (1.0 - x * x);
}

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("time must be finite and non-negative, got " + std::to_string(t));
  }
}

}  // namespace

double omega(const SearchParams& params) {
  return params.energy() * std::sqrt(omega_sq_over_e_sq(params.epsilon(), params.overlap()));
}

ThetaTerms theta_terms(const SearchParams& params) {
  const double eps = params.epsilon();
  const double x = params.overlap();
  const double c = std::sqrt(1.0 - x * x);
  const double a = 0.5 * (1.0 - eps);
  const double root = std::sqrt(omega_sq_over_e_sq(eps, x));
  const double conj_sum = a + eps * x * x + root;
  const double numerator = eps * x * c;
  const double denominator = conj_sum > 0.0 ? -(eps * x * c) * (eps * x * c) / conj_sum
                                            : a + eps * x * x - root;
  return {numerator, denominator};
}

double theta_from_terms(const ThetaTerms& terms) {
  double theta = std::atan2(terms.numerator, terms.denominator);
  if (theta < 0.0) theta += kPi;
  return theta;
}

DerivedQuantities derived_quantities(const SearchParams& params) {
  const double x = params.overlap();
  if (x == 0.0) {
    throw DegenerateInstanceError("overlap x = 0: theta and phi are undefined");
  }
  const double eps = params.epsilon();
  const double w = omega(params);
  const double phi = std::atan2(std::sqrt(1.0 - x * x), x);
  // eps = 0 and x = 1 are 0/0 in tan(theta); both resolve to pi/2.
  const double theta = (eps == 0.0 || x == 1.0) ? 0.5 * kPi : theta_from_terms(theta_terms(params));
  return {w, phi, theta, std::cos(2.0 * theta - phi)};
}

double theta_identity_residual(const SearchParams& params, double theta, double phi) {
  const double w = omega(params);
  const double expected =
      -params.overlap() * (1.0 + params.epsilon()) * params.energy() / (2.0 * w);
  return std::abs(std::cos(2.0 * theta - phi) - expected);
}

double exact_visibility_sq(const SearchParams& params) {
  const double eps = params.epsilon();
  const double x = params.overlap();
  const double num = x * x * (1.0 + eps) * (1.0 + eps);
  if (num == 0.0) return 0.0;
  return num / (4.0 * omega_sq_over_e_sq(eps, x));
}

cplx amplitude_at(const SearchParams& params, double t) {
  require_time(t);
  if (params.overlap() == 0.0) return {0.0, 0.0};
  const auto dq = derived_quantities(params);
  const double wt = dq.omega * t;
  const cplx envelope{params.overlap() * std::cos(wt), dq.visibility * std::sin(wt)};
  if (t == 0.0) return envelope;
  const double global = -0.5 * (params.energy() + params.drive_energy()) * t;
  return std::polar(1.0, global) * envelope;
}

double success_probability(const SearchParams& params, double t) {
  require_time(t);
  if (params.overlap() == 0.0) return 0.0;
  const auto dq = derived_quantities(params);
  const double x = params.overlap();
  const double c = std::cos(dq.omega * t);
  const double s = std::sin(dq.omega * t);
  return x * x * c * c + dq.visibility * dq.visibility * s * s;
}

PeakReport peak(const SearchParams& params) {
  const double x = params.overlap();
  if (x == 0.0) {
    throw DegenerateInstanceError("overlap x = 0: the target is unreachable");
  }
  const double classical = 1.0 / (x * x);
  if (params.epsilon() <= 0.0) {
    const double p = x * x;
    return {0.0, p, 1.0 / p, std::nullopt, classical};
  }
  const auto dq = derived_quantities(params);
  const double t_star = kPi / (2.0 * dq.omega);
  const double p = dq.visibility * dq.visibility;
  return {t_star, p, 1.0 / p, t_star / p, classical};
}

double asymptotic_visibility_sq(double epsilon, std::size_t dim) {
  if (epsilon == 1.0) {
    throw DomainError("asymptotic visibility diverges at eps = 1 (exact value is 1)");
  }
  if (dim < 2) throw DomainError("dimension N must be at least 2");
  const double r = (epsilon + 1.0) / (epsilon - 1.0);
  return r * r / static_cast<double>(dim);
}

ThetaAsymptotics theta_asymptotics(double epsilon, std::size_t dim) {
  if (epsilon == 1.0) throw DomainError("theta asymptotics exclude eps = 1");
  if (!(epsilon >= 0.0)) throw DomainError("theta asymptotics require eps >= 0");
  if (dim < 2) throw DomainError("dimension N must be at least 2");
  const double small = epsilon / (epsilon - 1.0) / std::sqrt(static_cast<double>(dim));
  if (epsilon > 1.0) return {small, -1.0};
  return {1.0, small};
}

std::vector<TotalTimePoint> expected_total_time_curve(const SearchParams& base,
                                                      std::span<const double> epsilon_grid) {
  std::vector<TotalTimePoint> out;
  out.reserve(epsilon_grid.size());
  for (const double eps : epsilon_grid) {
    if (!(eps >= 0.0)) throw DomainError("epsilon grid values must be non-negative");
    const auto p = make_params(base.energy(), eps * base.energy(), base.dim(), base.overlap());
    out.push_back({eps, peak(p).expected_total_time});
  }
  return out;
}

}  // namespace ctsearch
