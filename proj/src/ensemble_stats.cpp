#include "ctsearch/ensemble_stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "ctsearch/errors.hpp"

namespace ctsearch {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double draw_overlap(std::size_t dim, RngStream& rng, OverlapKind kind) {
  const StateVector s = sample_haar_state(dim, rng);
  // Target is e0, so <w|s> = s[0].
  const cplx ov = s[0];
  const double x = kind == OverlapKind::modulus ? std::abs(ov) : std::abs(ov.real());
  return std::min(x, 1.0);
}

}  // namespace

RngStream make_stream(std::uint64_t seed, std::uint64_t stream_index) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= stream_index * 0xd1b54a32d192ed03ULL;
  const std::uint64_t b = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return RngStream(seq);
}

StateVector sample_haar_state(std::size_t dim, RngStream& rng) {
  if (dim < 2) throw DomainError("Haar sampling requires N >= 2");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> amps(dim);
  double sq = 0.0;
  for (auto& a : amps) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    a = {re, im};
    sq += re * re + im * im;
  }
  const double scale = 1.0 / std::sqrt(sq);
  for (auto& a : amps) a *= scale;
  return StateVector(std::move(amps));
}

OverlapSampleSet collect_overlaps(std::size_t dim, std::size_t count, std::uint64_t seed,
                                  OverlapKind kind, unsigned workers) {
  if (dim < 2) throw DomainError("Haar sampling requires N >= 2");
  if (count < 1) throw PreconditionError("sample count must be at least 1");

  std::vector<double> samples(count);
  const std::size_t chunks = (count + kSamplesPerStream - 1) / kSamplesPerStream;
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      RngStream rng = make_stream(seed, c);
      const std::size_t begin = c * kSamplesPerStream;
      const std::size_t end = std::min(count, begin + kSamplesPerStream);
      for (std::size_t i = begin; i < end; ++i) samples[i] = draw_overlap(dim, rng, kind);
    }
  };

  unsigned n_workers = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, chunks));
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(work);
  }
  return {dim, std::move(samples), seed, count, kind};
}

const char* to_string(OverlapLaw law) {
  switch (law) {
    case OverlapLaw::exact_haar: return "exact-haar";
    case OverlapLaw::paper_asymptotic: return "paper-asymptotic";
  }
  return "unknown";
}

double overlap_pdf(std::size_t dim, double x, OverlapLaw law) {
  if (dim < 2) throw DomainError("dimension N must be at least 2");
  const double n = static_cast<double>(dim);
  if (law == OverlapLaw::paper_asymptotic) {
    if (x < 0.0) return 0.0;
    return std::sqrt(4.0 * n / std::numbers::pi) * std::exp(-n * x * x);
  }
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("exact overlap density needs x in [0, 1]");
  if (dim == 2) return 2.0 * x;
  return 2.0 * (n - 1.0) * x * std::pow(1.0 - x * x, n - 2.0);
}

double overlap_cdf(std::size_t dim, double x, OverlapLaw law) {
  if (dim < 2) throw DomainError("dimension N must be at least 2");
  const double n = static_cast<double>(dim);
  if (x <= 0.0) return 0.0;
  if (law == OverlapLaw::paper_asymptotic) return std::erf(std::sqrt(n) * x);
  if (x >= 1.0) return 1.0;
  // 1 - (1-x^2)^(N-1), via log1p/expm1 for small x.
  return -std::expm1((n - 1.0) * std::log1p(-x * x));
}

double ks_statistic(const OverlapSampleSet& samples, OverlapLaw law) {
  if (samples.samples.size() < 100) {
    throw PreconditionError("KS statistic needs at least 100 samples");
  }
  std::vector<double> sorted = samples.samples;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = overlap_cdf(samples.dim, sorted[i], law);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, hi - f, f - lo});
  }
  return d;
}

double ks_critical_value_5pct(std::size_t count) {
  return 1.3581 / std::sqrt(static_cast<double>(count));
}

double ks_p_value(double statistic, std::size_t count) {
  const double rn = std::sqrt(static_cast<double>(count));
  const double lambda = (rn + 0.12 + 0.11 / rn) * statistic;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

MomentEstimate second_moment(const OverlapSampleSet& samples) {
  const auto& v = samples.samples;
  if (v.size() < 2) throw PreconditionError("second moment needs at least 2 samples");
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (const double x : v) mean += x * x;
  mean /= n;
  double var = 0.0;
  for (const double x : v) {
    const double d = x * x - mean;
    var += d * d;
  }
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace ctsearch
