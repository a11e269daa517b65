#include "bhwork/drive.hpp"

#include "bhwork/errors.hpp"

namespace bhwork {

double DriveProtocol::integral() const {
  switch (shape) {
    case DriveShape::Constant:
      return amplitude * duration;
    case DriveShape::ParabolicStaircase: {
      const double dt = duration / staircase_slices;
      double sum = 0.0;
      for (int s = 0; s < staircase_slices; ++s) {
        const double tm = (s + 0.5) * dt;
        sum += amplitude * (tm - tm * tm / duration) * dt;
      }
      return sum;
    }
    case DriveShape::Parabolic:
    default:
      // J0 * (tau^2/2 - tau^2/3)
      return amplitude * duration * duration / 6.0;
  }
}

void DriveProtocol::validate() const {
  if (duration <= 0.0) throw ConfigError("protocol: duration must be positive");
  if (shape == DriveShape::ParabolicStaircase && staircase_slices < 1)
    throw ConfigError("protocol: staircase needs at least one slice");
}

void IntegratorConfig::validate() const {
  if (base_steps < 1) throw ConfigError("integrator: base_steps must be >= 1");
  if (norm_tolerance <= 0.0) throw ConfigError("integrator: norm_tolerance must be positive");
  if (max_refinements < 0) throw ConfigError("integrator: max_refinements must be >= 0");
}

}  // namespace bhwork
