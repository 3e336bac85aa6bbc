#include <cmath>
#include <random>

#include "ctsearch/ensemble_stats.hpp"
#include "ctsearch/errors.hpp"
#include "ctsearch/search_model.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ctsearch;

TEST_CASE("make_params defaults the overlap to 1/sqrt(N)") {
  const auto p = make_params(1.0, 1.0, 4);
  CHECK(p.overlap() == 0.5);
  CHECK(p.epsilon() == 1.0);

  const auto q = make_params(1.0, 2.0, 100);
  CHECK(q.overlap() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(q.epsilon() == 2.0);

  const auto r = make_params(2.0, 3.0, 10, 0.3);
  CHECK(r.overlap() == 0.3);
  CHECK(r.epsilon() == 3.0 / 2.0);
}

TEST_CASE("make_params rejects values outside the domain") {
  CHECK_THROWS_AS(make_params(1.0, 1.0, 1), DomainError);
  CHECK_THROWS_AS(make_params(0.0, 1.0, 4), DomainError);
  CHECK_THROWS_AS(make_params(-1.0, 1.0, 4), DomainError);
  CHECK_THROWS_AS(make_params(1.0, 1.0, 4, 1.5), DomainError);
  CHECK_THROWS_AS(make_params(1.0, 1.0, 4, -0.1), DomainError);
  CHECK_THROWS_AS(make_params(1.0, -0.5, 4), DomainError);
  const auto neg = make_params(1.0, -0.5, 4, std::nullopt, true);
  CHECK(neg.epsilon() == -0.5);
}

TEST_CASE("restricted instance is a basis target and the uniform superposition") {
  const auto p4 = make_params(1.0, 1.0, 4);
  const auto st = build_restricted_instance(p4, 0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(st.initial[i] == cplx{0.5, 0.0});
  CHECK(inner(st.target, st.initial) == cplx{0.5, 0.0});

  const auto p2 = make_params(1.0, 1.0, 2);
  const auto st2 = build_restricted_instance(p2, 1);
  CHECK(inner(st2.target, st2.initial).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(inner(st2.target, st2.initial).imag() == 0.0);

  CHECK_THROWS_AS(build_restricted_instance(p4, 7), std::out_of_range);
}

TEST_CASE("state vectors must be unit norm") {
  CHECK_THROWS_AS(StateVector({cplx{1.0, 0.0}, cplx{1.0, 0.0}}), DomainError);
  CHECK_NOTHROW(StateVector({cplx{0.6, 0.0}, cplx{0.0, 0.8}}));
}

TEST_CASE("overlap_phase_fix makes <w|s> real and non-negative") {
  const double r = 1.0 / std::sqrt(2.0);
  const auto w = StateVector::basis(2, 0);
  // s = (i/sqrt2)(e0 + e1); the fix multiplies it by -i.
  const StateVector s({cplx{0.0, r}, cplx{0.0, r}});
  const auto fixed = overlap_phase_fix(w, s);
  CHECK(fixed.overlap == doctest::Approx(r).epsilon(1e-15));
  const cplx ov = inner(w, fixed.initial);
  CHECK(ov.real() == doctest::Approx(r).epsilon(1e-15));
  CHECK(std::abs(ov.imag()) < 1e-16);

  SUBCASE("orthogonal pair is untouched") {
    const auto e1 = StateVector::basis(2, 1);
    const auto o = overlap_phase_fix(w, e1);
    CHECK(o.overlap == 0.0);
    CHECK(o.initial[1] == cplx{1.0, 0.0});
  }

  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(overlap_phase_fix(w, StateVector::uniform(3)), DimensionMismatch);
  }
}

TEST_CASE("overlap_phase_fix on Haar states matches a direct inner product and is idempotent") {
  RngStream rng = make_stream(7, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = sample_haar_state(64, rng);
    const auto w = sample_haar_state(64, rng);
    cplx direct{0.0, 0.0};
    for (std::size_t i = 0; i < 64; ++i) direct += std::conj(w[i]) * s[i];
    const auto once = overlap_phase_fix(w, s);
    CHECK(once.overlap == doctest::Approx(std::abs(direct)).epsilon(1e-13));
    const auto twice = overlap_phase_fix(w, once.initial);
    CHECK(twice.overlap == doctest::Approx(once.overlap).epsilon(1e-14));
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(twice.initial[i] - once.initial[i]) < 1e-14);
  }
}

TEST_CASE("build_hamiltonian: N=2 restricted instance by hand") {
  const auto p = make_params(1.0, 1.0, 2);
  const auto st = build_restricted_instance(p, 0);
  const auto h = build_hamiltonian(p, st.target, st.initial);
  CHECK(h.entry(0, 0).real() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(h.entry(0, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h.entry(1, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h.entry(1, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h.energy_scale() == 2.0);
}

TEST_CASE("build_hamiltonian: trace, hermiticity and the rank-2 kernel") {
  const auto p = make_params(1.0, 2.0, 16);
  const auto st = build_restricted_instance(p, 3);
  const auto h = build_hamiltonian(p, st.target, st.initial);
  CHECK(std::abs(h.trace() - cplx{3.0, 0.0}) < 1e-10);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j)
      CHECK(std::abs(h.entry(i, j) - std::conj(h.entry(j, i))) <= 1e-12);

  // a = e0 - e1 is orthogonal to both w = e3 and s.
  std::vector<cplx> a(16, 0.0), out(16);
  a[0] = 1.0;
  a[1] = -1.0;
  h.apply(a, out);
  CHECK(norm(out) < 1e-15);
}

TEST_CASE("without driving the Hamiltonian acts as an oracle on the basis") {
  const std::size_t n = 8;
  const auto p = make_params(1.3, 0.0, n);
  const auto st = build_restricted_instance(p, 5);
  const auto h = build_hamiltonian(p, st.target, st.initial);
  std::vector<cplx> out(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto e = StateVector::basis(n, a);
    h.apply(e.amplitudes(), out);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx expected = (a == 5 && i == 5) ? cplx{1.3, 0.0} : cplx{0.0, 0.0};
      CHECK(std::abs(out[i] - expected) < 1e-15);
    }
  }
}

TEST_CASE("at most two nonzero eigenvalues") {
  RngStream rng = make_stream(11, 0);
  for (const std::size_t n : {2u, 5u, 16u, 64u}) {
    const auto w = sample_haar_state(n, rng);
    const auto raw = sample_haar_state(n, rng);
    const auto fixed = overlap_phase_fix(w, raw);
    const auto p = make_params(1.0, 2.5, n, fixed.overlap);
    const auto h = build_hamiltonian(p, w, fixed.initial);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::to_eigen(h));
    int nonzero = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      if (std::abs(es.eigenvalues()(k)) > 1e-10) ++nonzero;
    }
    CHECK(nonzero <= 2);
    CHECK(std::abs(h.trace().real() - 3.5) < 1e-10);
  }
}

TEST_CASE("build_hamiltonian enforces dimensions and the dense cap") {
  const auto p = make_params(1.0, 1.0, 4);
  CHECK_THROWS_AS(build_hamiltonian(p, StateVector::basis(3, 0), StateVector::uniform(3)),
                  DimensionMismatch);
  const auto big = make_params(1.0, 1.0, kDenseDimCap + 1);
  const auto st = build_restricted_instance(big);
  CHECK_THROWS_AS(build_hamiltonian(big, st.target, st.initial), PreconditionError);
}

TEST_CASE("from_entries rejects non-Hermitian input") {
  CHECK_THROWS_AS(HamiltonianDense::from_entries(2, {1.0, cplx{0.0, 1.0}, cplx{0.0, 1.0}, 1.0}),
                  DomainError);
  const auto h = HamiltonianDense::from_entries(2, {1.0, cplx{0.0, 1.0}, cplx{0.0, -1.0}, 2.0});
  CHECK(h.energy_scale() == 3.0);
}
