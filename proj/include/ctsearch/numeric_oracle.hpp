#pragma once

// Brute-force evolutions used to validate the closed form:
//  * exact propagation of the 2x2 restriction of H to span{|w>, |r>}
//  * fixed-step RK4 integration of dpsi/dt = -i H psi in the full space

#include <functional>
#include <span>
#include <vector>

#include "ctsearch/search_model.hpp"

namespace ctsearch {

// dt * (energy scale) must not exceed this for RK4 runs.
inline constexpr double kRk4StepGuard = 0.05;

enum class PropagationMethod { effective_2d, rk4_full };

const char* to_string(PropagationMethod method);

struct Trajectory {
  std::vector<double> times;      // strictly increasing, times[0] == 0
  std::vector<cplx> amplitudes;   // <w|psi(t)>
  std::vector<double> norms;      // |psi(t)|
  PropagationMethod method;
};

// Exact propagation via the analytic eigenpairs of
//   [[E + E' x^2,          E' x sqrt(1-x^2)],
//    [E' x sqrt(1-x^2),    E' (1-x^2)      ]]
// in the basis {|w>, |r>} with |s> = x|w> + sqrt(1-x^2)|r>. Does not use
// theta or phi. At x = 1 the evolution is the scalar phase exp(-i(E+E')t).
Trajectory propagate_effective_2d(const SearchParams& params, std::span<const double> times);

// Called with (t, psi) after every recorded sample, including t = 0.
using StateObserver = std::function<void(double, std::span<const cplx>)>;

// Classic RK4 from psi(0) = initial up to t_end with uniform steps of size
// t_end / ceil(t_end / dt) <= dt. The state is never renormalized.
// Requires dt * H.energy_scale() <= kRk4StepGuard and N <= kDenseDimCap.
Trajectory integrate_schrodinger_rk4(const HamiltonianDense& hamiltonian,
                                     const StateVector& initial, const StateVector& target,
                                     double t_end, double dt,
                                     const StateObserver& observer = {});

// max_k | |psi(t_k)| - 1 |
double norm_drift(const Trajectory& trajectory);

struct ErrorReport {
  double max_abs_amplitude_error;
  double max_probability_error;
  double at_time;  // time of the worst amplitude error
};

// Compares a trajectory sample-by-sample against amplitude_at(). The
// trajectory's t = 0 amplitude must equal the instance overlap x.
ErrorReport compare_to_closed_form(const SearchParams& params, const Trajectory& trajectory);

}  // namespace ctsearch
