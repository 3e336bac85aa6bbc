#include "ctsearch/numeric_oracle.hpp"

#include <cmath>
#include <string>

#include "ctsearch/closed_form.hpp"
#include "ctsearch/errors.hpp"

namespace ctsearch {

namespace {

void require_sample_times(std::span<const double> times) {
  if (times.empty()) throw PreconditionError("sample times must be non-empty");
  if (times.front() != 0.0) throw PreconditionError("sample times must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]) || !std::isfinite(times[i])) {
      throw PreconditionError("sample times must be finite and strictly increasing");
    }
  }
}

}  // namespace

const char* to_string(PropagationMethod method) {
  switch (method) {
    case PropagationMethod::effective_2d: return "effective-2d";
    case PropagationMethod::rk4_full: return "rk4-full";
  }
  return "unknown";
}

Trajectory propagate_effective_2d(const SearchParams& params, std::span<const double> times) {
  require_sample_times(times);

  Trajectory out{{times.begin(), times.end()}, {}, {}, PropagationMethod::effective_2d};
  out.amplitudes.reserve(times.size());
  out.norms.reserve(times.size());

  const double e = params.energy();
  const double ep = params.drive_energy();
  const double x = params.overlap();

  if (x == 1.0) {
    for (const double t : times) {
      out.amplitudes.push_back(std::polar(1.0, -(e + ep) * t));
      out.norms.push_back(1.0);
    }
    return out;
  }

  const double y = std::sqrt(1.0 - x * x);
  const double h_ww = e + ep * x * x;
  const double h_rr = ep * y * y;
  const double h_wr = ep * x * y;

  const double centre = 0.5 * (h_ww + h_rr);
  const double half_gap = 0.5 * (h_ww - h_rr);
  const double split = std::hypot(half_gap, h_wr);
  // Rotation angle diagonalising the symmetric 2x2 block.
  const double alpha = 0.5 * std::atan2(h_wr, half_gap);
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);

  // |s> in the eigenbasis.
  const double s_plus = ca * x + sa * y;
  const double s_minus = -sa * x + ca * y;

  for (const double t : times) {
    const cplx c_plus = std::polar(s_plus, -(centre + split) * t);
    const cplx c_minus = std::polar(1.0, -(centre - split) * t) * s_minus;
    const cplx psi_w = ca * c_plus - sa * c_minus;
    const cplx psi_r = sa * c_plus + ca * c_minus;
    out.amplitudes.push_back(psi_w);
    out.norms.push_back(std::sqrt(std::norm(psi_w) + std::norm(psi_r)));
  }
  return out;
}

Trajectory integrate_schrodinger_rk4(const HamiltonianDense& hamiltonian,
                                     const StateVector& initial, const StateVector& target,
                                     double t_end, double dt, const StateObserver& observer) {
  const std::size_t n = hamiltonian.dim();
  if (initial.dim() != n || target.dim() != n) {
    throw DimensionMismatch("states must match the Hamiltonian dimension " + std::to_string(n));
  }
  if (n > kDenseDimCap) throw PreconditionError("N exceeds the dense cap");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw PreconditionError("t_end must be finite and non-negative");
  }
  if (dt * hamiltonian.energy_scale() > kRk4StepGuard * (1.0 + 1e-12)) {
    throw PreconditionError("step-size guard violated: dt * (E + E') = " +
                            std::to_string(dt * hamiltonian.energy_scale()) + " > " +
                            std::to_string(kRk4StepGuard));
  }

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt));
  const double h = steps == 0 ? 0.0 : t_end / static_cast<double>(steps);

  std::vector<cplx> psi(initial.amplitudes().begin(), initial.amplitudes().end());
  std::vector<cplx> k1(n), k2(n), k3(n), k4(n), stage(n);
  const cplx minus_i{0.0, -1.0};

  Trajectory out{{}, {}, {}, PropagationMethod::rk4_full};
  out.times.reserve(steps + 1);
  out.amplitudes.reserve(steps + 1);
  out.norms.reserve(steps + 1);

  auto record = [&](double t) {
    out.times.push_back(t);
    out.amplitudes.push_back(inner(target.amplitudes(), psi));
    out.norms.push_back(norm(psi));
    if (observer) observer(t, psi);
  };

  // k = -i H v
  auto derivative = [&](const std::vector<cplx>& v, std::vector<cplx>& k) {
    hamiltonian.apply(v, k);
    for (auto& z : k) z *= minus_i;
  };

  record(0.0);
  for (std::size_t step = 1; step <= steps; ++step) {
    derivative(psi, k1);
    for (std::size_t i = 0; i < n; ++i) stage[i] = psi[i] + 0.5 * h * k1[i];
    derivative(stage, k2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = psi[i] + 0.5 * h * k2[i];
    derivative(stage, k3);
    for (std::size_t i = 0; i < n; ++i) stage[i] = psi[i] + h * k3[i];
    derivative(stage, k4);
    for (std::size_t i = 0; i < n; ++i) {
      psi[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    record(step == steps ? t_end : static_cast<double>(step) * h);
  }
  return out;
}

double norm_drift(const Trajectory& trajectory) {
  if (trajectory.norms.empty()) throw PreconditionError("empty trajectory");
  double worst = 0.0;
  for (const double nrm : trajectory.norms) worst = std::max(worst, std::abs(nrm - 1.0));
  return worst;
}

ErrorReport compare_to_closed_form(const SearchParams& params, const Trajectory& trajectory) {
  if (trajectory.times.empty() || trajectory.times.size() != trajectory.amplitudes.size()) {
    throw PreconditionError("malformed trajectory");
  }
  if (std::abs(trajectory.amplitudes.front() - cplx{params.overlap(), 0.0}) > 1e-9) {
    throw PreconditionError("trajectory initial amplitude does not match the instance overlap");
  }
  ErrorReport report{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const double t = trajectory.times[k];
    const cplx expected = amplitude_at(params, t);
    const cplx got = trajectory.amplitudes[k];
    const double amp_err = std::abs(expected - got);
    const double prob_err = std::abs(std::norm(expected) - std::norm(got));
    if (amp_err > report.max_abs_amplitude_error) {
      report.max_abs_amplitude_error = amp_err;
      report.at_time = t;
    }
    report.max_probability_error = std::max(report.max_probability_error, prob_err);
  }
  return report;
}

}  // namespace ctsearch
