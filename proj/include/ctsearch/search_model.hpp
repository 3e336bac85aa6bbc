#pragma once

// Problem instance for continuous-time search: the oracle term E|w><w| and
// the driving term E'|s><s| acting on an N-dimensional complex space.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ctsearch {

using cplx = std::complex<double>;

// Largest dimension for which a dense N x N Hamiltonian is materialized.
inline constexpr std::size_t kDenseDimCap = 4096;
inline constexpr double kUnitNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;

class SearchParams {
 public:
  double energy() const { return energy_; }
  double drive_energy() const { return drive_energy_; }
  std::size_t dim() const { return dim_; }
  double overlap() const { return overlap_; }
  // E' / E
  double epsilon() const { return epsilon_; }

 private:
  friend SearchParams make_params(double, double, std::size_t, std::optional<double>, bool);
  SearchParams(double e, double e_prime, std::size_t n, double x)
      : energy_(e), drive_energy_(e_prime), dim_(n), overlap_(x), epsilon_(e_prime / e) {}

  double energy_;
  double drive_energy_;
  std::size_t dim_;
  double overlap_;
  double epsilon_;
};

// Validates and builds an instance. The overlap defaults to 1/sqrt(N) (the
// uniform superposition against a basis state). A negative drive energy is
// rejected unless allow_negative_drive is set.
SearchParams make_params(double energy, double drive_energy, std::size_t dim,
                         std::optional<double> overlap = std::nullopt,
                         bool allow_negative_drive = false);

// Unit vector in C^N. Construction fails if the norm is off by more than
// kUnitNormTolerance.
class StateVector {
 public:
  explicit StateVector(std::vector<cplx> amplitudes);

  static StateVector basis(std::size_t dim, std::size_t index);
  static StateVector uniform(std::size_t dim);

  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  const cplx& operator[](std::size_t i) const { return amplitudes_[i]; }

 private:
  std::vector<cplx> amplitudes_;
};

// <a|b>, conjugate-linear in the first argument.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
inline cplx inner(const StateVector& a, const StateVector& b) {
  return inner(a.amplitudes(), b.amplitudes());
}
double norm(std::span<const cplx> v);

struct SearchStates {
  StateVector target;   // |w>
  StateVector initial;  // |s>
};

// Restricted version: |w> is the basis state at w_index and |s> the uniform
// superposition, so <w|s> = 1/sqrt(N).
SearchStates build_restricted_instance(const SearchParams& params, std::size_t w_index = 0);

struct PhaseFixedState {
  double overlap;        // |<w|s>|
  StateVector initial;   // s rotated so that <w|s> is real and >= 0
};

// Multiplies s by the unit phase that makes <w|s> real and non-negative.
// An exactly orthogonal pair is returned unchanged with overlap 0.
PhaseFixedState overlap_phase_fix(const StateVector& target, const StateVector& initial);

// Dense Hermitian N x N matrix, row-major.
class HamiltonianDense {
 public:
  // Checks hermiticity. energy_scale bounds the spectral radius and feeds the
  // integrator step guard; by default the sum of |diagonal| is used.
  static HamiltonianDense from_entries(std::size_t dim, std::vector<cplx> entries,
                                       std::optional<double> energy_scale = std::nullopt);
  static HamiltonianDense zero(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const cplx& entry(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  std::span<const cplx> entries() const { return entries_; }
  double energy_scale() const { return energy_scale_; }
  cplx trace() const;

  // out = H * in
  void apply(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  HamiltonianDense(std::size_t dim, std::vector<cplx> entries, double energy_scale)
      : dim_(dim), entries_(std::move(entries)), energy_scale_(energy_scale) {}

  std::size_t dim_;
  std::vector<cplx> entries_;
  double energy_scale_;
};

// H = E|w><w| + E'|s><s|. Requires N <= kDenseDimCap.
HamiltonianDense build_hamiltonian(const SearchParams& params, const StateVector& target,
                                   const StateVector& initial);

}  // namespace ctsearch
