#include "ctsearch/search_model.hpp"

#include <cmath>
#include <string>

#include "ctsearch/errors.hpp"

namespace ctsearch {

SearchParams make_params(double energy, double drive_energy, std::size_t dim,
                         std::optional<double> overlap, bool allow_negative_drive) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw DomainError("oracle energy E must be positive and finite, got " + std::to_string(energy));
  }
  if (!std::isfinite(drive_energy)) {
    throw DomainError("driving energy E' must be finite");
  }
  if (drive_energy < 0.0 && !allow_negative_drive) {
    throw DomainError("negative driving energy E' requires the explicit override");
  }
  if (dim < 2) {
    throw DomainError("dimension N must be at least 2, got " + std::to_string(dim));
  }
  const double x = overlap.value_or(1.0 / std::sqrt(static_cast<double>(dim)));
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("overlap x must lie in [0, 1], got " + std::to_string(x));
  }
  return SearchParams(energy, drive_energy, dim, x);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("inner product of vectors with dimensions " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  }
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

StateVector::StateVector(std::vector<cplx> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw DomainError("state vector must be non-empty");
  const double n = norm(amplitudes_);
  if (std::abs(n - 1.0) > kUnitNormTolerance) {
    throw DomainError("state vector is not unit norm (|psi| = " + std::to_string(n) + ")");
  }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) {
    throw std::out_of_range("basis index " + std::to_string(index) + " out of range for N = " +
                            std::to_string(dim));
  }
  std::vector<cplx> amps(dim, cplx{0.0, 0.0});
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

StateVector StateVector::uniform(std::size_t dim) {
  if (dim == 0) throw DomainError("dimension must be positive");
  return StateVector(std::vector<cplx>(dim, cplx{1.0 / std::sqrt(static_cast<double>(dim)), 0.0}));
}

SearchStates build_restricted_instance(const SearchParams& params, std::size_t w_index) {
  return {StateVector::basis(params.dim(), w_index), StateVector::uniform(params.dim())};
}

PhaseFixedState overlap_phase_fix(const StateVector& target, const StateVector& initial) {
  const cplx ov = inner(target, initial);
  const double x = std::abs(ov);
  if (x == 0.0) return {0.0, initial};

  const cplx rotation = std::conj(ov) / x;
  std::vector<cplx> amps(initial.amplitudes().begin(), initial.amplitudes().end());
  for (auto& a : amps) a *= rotation;
  // x = |<w|s>| can exceed 1 by an ulp when s == w.
  return {std::min(x, 1.0), StateVector(std::move(amps))};
}

HamiltonianDense HamiltonianDense::from_entries(std::size_t dim, std::vector<cplx> entries,
                                                std::optional<double> energy_scale) {
  if (entries.size() != dim * dim) {
    throw DimensionMismatch("expected " + std::to_string(dim * dim) + " entries, got " +
                            std::to_string(entries.size()));
  }
  double diag = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    diag += std::abs(entries[i * dim + i]);
    for (std::size_t j = i; j < dim; ++j) {
      if (std::abs(entries[i * dim + j] - std::conj(entries[j * dim + i])) > kHermitianTolerance) {
        throw DomainError("matrix is not Hermitian at (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
      }
    }
  }
  return HamiltonianDense(dim, std::move(entries), energy_scale.value_or(diag));
}

HamiltonianDense HamiltonianDense::zero(std::size_t dim) {
  return HamiltonianDense(dim, std::vector<cplx>(dim * dim, cplx{0.0, 0.0}), 0.0);
}

cplx HamiltonianDense::trace() const {
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < dim_; ++i) t += entry(i, i);
  return t;
}

void HamiltonianDense::apply(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != dim_ || out.size() != dim_) {
    throw DimensionMismatch("Hamiltonian of dimension " + std::to_string(dim_) +
                            " applied to vector of dimension " + std::to_string(in.size()));
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    const cplx* row = entries_.data() + i * dim_;
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * in[j];
    out[i] = acc;
  }
}

HamiltonianDense build_hamiltonian(const SearchParams& params, const StateVector& target,
                                   const StateVector& initial) {
  const std::size_t n = params.dim();
  if (target.dim() != n || initial.dim() != n) {
    throw DimensionMismatch("states must have dimension N = " + std::to_string(n));
  }
  if (n > kDenseDimCap) {
    throw PreconditionError("N = " + std::to_string(n) + " exceeds the dense cap of " +
                            std::to_string(kDenseDimCap));
  }
  const double e = params.energy();
  const double ep = params.drive_energy();
  std::vector<cplx> h(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      h[i * n + j] = e * target[i] * std::conj(target[j]) + ep * initial[i] * std::conj(initial[j]);
    }
  }
  return HamiltonianDense::from_entries(n, std::move(h), e + std::abs(ep));
}

}  // namespace ctsearch
