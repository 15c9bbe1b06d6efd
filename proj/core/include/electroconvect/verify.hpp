#pragma once

#include "electroconvect/mesh.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace electroconvect {

struct VerifyCheck {
  std::string module;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool all_passed() const;
  /// One line per check: module, name, measured value, threshold, PASS/FAIL.
  std::string table() const;
};

/// Invariant suite of every module on one mesh. Closed-form eigenvalue checks
/// run on rectangles only; the full-basis Cordoba check needs at most 1500
/// unknowns. Completes in seconds on a 32x32 square.
VerifyReport run_verify(const MeshParams& mesh, std::uint64_t seed = 0);

}  // namespace electroconvect
