#pragma once

// Haar-random initial states and the distribution of their overlap with a
// fixed target.
//
// For |s> uniform on the complex unit sphere in C^N, x = |<w|s>| has
// x^2 ~ Beta(1, N-1), i.e.
//   pdf(x) = 2 (N-1) x (1-x^2)^(N-2),   cdf(x) = 1 - (1-x^2)^(N-1).
// The half-normal sqrt(4N/pi) exp(-N x^2) is kept as a comparison curve.

#include <cstddef>
#include <cstdint>
#include <random>

#include "ctsearch/search_model.hpp"

namespace ctsearch {

using RngStream = std::mt19937_64;

// Independent stream derived from (seed, stream_index) through splitmix64.
RngStream make_stream(std::uint64_t seed, std::uint64_t stream_index);

// N i.i.d. standard complex Gaussians, normalized.
StateVector sample_haar_state(std::size_t dim, RngStream& rng);

enum class OverlapKind {
  modulus,    // |<w|s>|
  real_part,  // |Re <w|s>|
};

struct OverlapSampleSet {
  std::size_t dim;
  std::vector<double> samples;
  std::uint64_t seed;
  std::size_t count;
  OverlapKind kind;
};

// Samples are produced in fixed-size chunks, chunk k drawing from
// make_stream(seed, k), and merged in chunk order. The result is therefore
// independent of the number of worker threads (0 = hardware concurrency).
OverlapSampleSet collect_overlaps(std::size_t dim, std::size_t count, std::uint64_t seed,
                                  OverlapKind kind = OverlapKind::modulus,
                                  unsigned workers = 0);

inline constexpr std::size_t kSamplesPerStream = 4096;

enum class OverlapLaw { exact_haar, paper_asymptotic };

const char* to_string(OverlapLaw law);

double overlap_pdf(std::size_t dim, double x, OverlapLaw law);
double overlap_cdf(std::size_t dim, double x, OverlapLaw law);

// sup_x |F_n(x) - F(x)|. Requires at least 100 samples.
double ks_statistic(const OverlapSampleSet& samples, OverlapLaw law);

// Asymptotic two-sided 5% critical value 1.3581 / sqrt(n).
double ks_critical_value_5pct(std::size_t count);

// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
double ks_p_value(double statistic, std::size_t count);

struct MomentEstimate {
  double mean;
  double standard_error;
};

// Sample mean of x^2 with its standard error.
MomentEstimate second_moment(const OverlapSampleSet& samples);

}  // namespace ctsearch
