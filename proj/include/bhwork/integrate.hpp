#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "bhwork/drive.hpp"
#include "bhwork/errors.hpp"

namespace bhwork {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Classic fixed-step RK4 over [t0, t1] on a complex state vector.
/// Rhs signature: rhs(t, y, dydt) filling dydt (same length as y).
template <typename Rhs>
void rk4_fixed(Rhs&& rhs, ComplexVector& y, double t0, double t1, int steps) {
  const std::size_t n = y.size();
  const double h = (t1 - t0) / steps;
  ComplexVector k1(n), k2(n), k3(n), k4(n), tmp(n);
  double t = t0;
  for (int s = 0; s < steps; ++s) {
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      y[i] += (h / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    t = t0 + (s + 1) * h;
  }
}

/// Run one full integration at the requested step count. JRhsFactory returns
/// an rhs for a given constant coupling; the time-dependent coupling is read
/// from the protocol. Staircase protocols are integrated slice by slice so
/// every RK4 stage sees a smooth right-hand side.
template <typename RhsAtCoupling>
ComplexVector run_driven(RhsAtCoupling&& rhs_at, const DriveProtocol& protocol,
                         const ComplexVector& y0, int steps) {
  ComplexVector y = y0;
  if (protocol.shape == DriveShape::ParabolicStaircase) {
    const int slices = protocol.staircase_slices;
    const int per_slice = (steps + slices - 1) / slices;
    const double dt = protocol.duration / slices;
    for (int s = 0; s < slices; ++s) {
      const double tm = (s + 0.5) * dt;
      const double j = protocol.amplitude * (tm - tm * tm / protocol.duration);
      auto rhs = [&rhs_at, j](double, const ComplexVector& v, ComplexVector& dv) {
        rhs_at(j, v, dv);
      };
      rk4_fixed(rhs, y, s * dt, (s + 1) * dt, per_slice);
    }
  } else {
    auto rhs = [&rhs_at, &protocol](double t, const ComplexVector& v, ComplexVector& dv) {
      rhs_at(protocol.value_at(t), v, dv);
    };
    rk4_fixed(rhs, y, 0.0, protocol.duration, steps);
  }
  return y;
}

struct RefinedSolution {
  ComplexVector state;
  double drift = 0.0;  // conservation deviation of the accepted run
  int steps = 0;       // accepted step count
};

/// Step-doubling convergence control: rerun at doubled step counts until the
/// conservation drift is below tolerance and the max coefficient change
/// between successive refinements is below 10x tolerance. run(steps) performs
/// one full integration; drift_of(y) returns the scalar conservation
/// deviation. delta_scale sets the state magnitude the coefficient-change
/// criterion is relative to (1 for unit-norm quantum states, the field norm
/// for mean-field amplitudes). Throws ConvergenceError when max_refinements
/// is exhausted.
template <typename RunFn, typename DriftFn>
RefinedSolution integrate_refined(RunFn&& run, const IntegratorConfig& cfg,
                                  DriftFn&& drift_of, const std::string& label,
                                  double delta_scale = 1.0) {
  cfg.validate();
  ComplexVector prev = run(cfg.base_steps);
  double drift = drift_of(prev);
  for (int r = 1; r <= cfg.max_refinements; ++r) {
    const int steps = cfg.base_steps << r;
    ComplexVector cur = run(steps);
    drift = drift_of(cur);
    double delta = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i)
      delta = std::max(delta, std::abs(cur[i] - prev[i]));
    if (drift < cfg.norm_tolerance && delta < 10.0 * cfg.norm_tolerance * delta_scale)
      return {std::move(cur), drift, steps};
    prev = std::move(cur);
  }
  throw ConvergenceError(label + ": no convergence after " +
                             std::to_string(cfg.max_refinements) +
                             " refinements (drift " + std::to_string(drift) + ")",
                         drift);
}

}  // namespace bhwork
