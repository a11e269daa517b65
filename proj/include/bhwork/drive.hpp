#pragma once

#include <cmath>

namespace bhwork {

enum class DriveShape {
  Parabolic,           // J(t) = J0 * (t - t^2/tau); vanishes at both endpoints
  Constant,            // J(t) = J0 for all t (test-only)
  ParabolicStaircase,  // slice-midpoint staircase of the parabola (test-only)
};

/// Time dependence of the work parameter J over a driving window [0, tau].
struct DriveProtocol {
  DriveShape shape = DriveShape::Parabolic;
  double amplitude = 5.0;  // J0
  double duration = 10.0;  // tau
  int staircase_slices = 0;

  double value_at(double t) const {
    switch (shape) {
      case DriveShape::Constant:
        return amplitude;
      case DriveShape::ParabolicStaircase: {
        const double dt = duration / staircase_slices;
        int slice = static_cast<int>(t / dt);
        if (slice >= staircase_slices) slice = staircase_slices - 1;
        if (slice < 0) slice = 0;
        const double tm = (slice + 0.5) * dt;
        return amplitude * (tm - tm * tm / duration);
      }
      case DriveShape::Parabolic:
      default:
        return amplitude * (t - t * t / duration);
    }
  }

  /// Integral of J(t) over [0, tau] (exact for all shapes).
  double integral() const;

  static DriveProtocol parabolic(double j0, double tau) {
    return {DriveShape::Parabolic, j0, tau, 0};
  }
  static DriveProtocol constant(double j, double tau) {
    return {DriveShape::Constant, j, tau, 0};
  }
  static DriveProtocol parabolic_staircase(double j0, double tau, int slices) {
    return {DriveShape::ParabolicStaircase, j0, tau, slices};
  }

  void validate() const;
};

/// Fixed-step RK4 settings with step-doubling convergence control.
struct IntegratorConfig {
  int base_steps = 4096;
  double norm_tolerance = 1e-8;
  int max_refinements = 8;

  void validate() const;
};

}  // namespace bhwork
