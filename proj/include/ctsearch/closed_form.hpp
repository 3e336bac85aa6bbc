#pragma once

// Analytic solution of the two-level search dynamics.
//
// With x = <w|s> >= 0 and eps = E'/E the transition amplitude is
//
//   <w|psi(t)> = exp(-i(E+E')t/2) * (x cos(wt) + i cos(2theta - phi) sin(wt))
//
//   omega     = E sqrt(((1-eps)/2)^2 + eps x^2)
//   tan phi   = sqrt(1-x^2) / x,                        0 <= phi <= pi/2
//   tan theta = eps x sqrt(1-x^2) /
//               ((1-eps)/2 + eps x^2 - sqrt(((1-eps)/2)^2 + eps x^2))
//
// The global phase factor is kept so that complex amplitudes can be compared
// against direct propagation. theta is fixed to the branch [pi/2, pi/2 + phi]
// for eps >= 0.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ctsearch/search_model.hpp"

namespace ctsearch {

struct DerivedQuantities {
  double omega;
  double phi;
  double theta;
  double visibility;  // cos(2 theta - phi)
};

// Numerator and denominator of tan(theta). The denominator is evaluated in
// the algebraically equivalent form -eps^2 x^2 (1-x^2) / ((1-eps)/2 + eps x^2 + sqrt(...))
// which avoids cancellation when x is small.
struct ThetaTerms {
  double numerator;
  double denominator;
};

ThetaTerms theta_terms(const SearchParams& params);

// Angle from (numerator, denominator) folded into [0, pi).
double theta_from_terms(const ThetaTerms& terms);

// Throws DegenerateInstanceError when x == 0.
DerivedQuantities derived_quantities(const SearchParams& params);

// |cos(2 theta - phi) + x (1+eps) E / (2 omega)|: residual of the visibility
// identity for a given theta, phi pair.
double theta_identity_residual(const SearchParams& params, double theta, double phi);

// x^2 (1+eps)^2 / ((1-eps)^2 + 4 eps x^2)
double exact_visibility_sq(const SearchParams& params);

double omega(const SearchParams& params);

cplx amplitude_at(const SearchParams& params, double t);
double success_probability(const SearchParams& params, double t);

// Repetition-cost model: independent trials, each measured at t_star.
struct PeakReport {
  double t_star;
  double p_max;
  double expected_trials;
  // t_star / p_max. Empty when eps <= 0: the probability never exceeds x^2,
  // so there is no search time to speak of.
  std::optional<double> expected_total_time;
  // 1 / x^2, the expected number of uniform classical guesses.
  double classical_trials;
};

PeakReport peak(const SearchParams& params);

// ((eps+1)/(eps-1))^2 / N
double asymptotic_visibility_sq(double epsilon, std::size_t dim);

struct ThetaAsymptotics {
  double sin_theta;
  double cos_theta;
};

// Leading-order (sin theta, cos theta) at x = 1/sqrt(N) for eps != 1.
ThetaAsymptotics theta_asymptotics(double epsilon, std::size_t dim);

struct TotalTimePoint {
  double epsilon;
  std::optional<double> expected_total_time;
};

// peak() over an epsilon grid at the base instance's E, N and x.
std::vector<TotalTimePoint> expected_total_time_curve(const SearchParams& base,
                                                      std::span<const double> epsilon_grid);

}  // namespace ctsearch
