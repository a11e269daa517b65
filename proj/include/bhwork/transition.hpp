#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bhwork/fock.hpp"

namespace bhwork {

enum class Provenance { Quantum, ClassicalMc, ClassicalShoot };

std::string provenance_name(Provenance p);

/// Per-final-state flags attached to a distribution bin.
enum BinFlag : std::uint8_t {
  kBinOk = 0,
  kBinCausticUncertain = 1,  // a caustic trajectory was excluded from this bin
};

/// Probability over final Fock states given one initial Fock state.
/// Probabilities are indexed by the basis index of the final state.
struct TransitionDistribution {
  FockBasis basis;
  FockState initial;
  std::vector<double> probabilities;
  Provenance provenance = Provenance::Quantum;

  long long sample_count = 0;      // Monte-Carlo provenance
  long long trajectory_count = 0;  // shooting provenance
  std::vector<double> std_error;   // empty when not applicable
  std::vector<std::uint8_t> flags; // empty when not applicable

  double leakage_fraction = 0.0;   // Monte-Carlo samples excluded as out of range
  bool leakage_warning = false;    // leakage above 1%

  double total() const {
    double s = 0.0;
    for (double p : probabilities) s += p;
    return s;
  }
};

}  // namespace bhwork
