#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace proxmag::suites {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Result of one verification suite. text() is deterministic for a given
/// suite and seed: no timings, fixed number formatting.
struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<std::string> lines;
  std::vector<Check> checks;

  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] const Check* find(const std::string& name) const;
  [[nodiscard]] std::string text() const;
};

/// counterexample, theorem1, theorem2, multibang, tgv-fallback, levelset.
[[nodiscard]] const std::vector<std::string>& names();
[[nodiscard]] bool known(const std::string& name);

/// Throws std::invalid_argument for an unknown suite.
[[nodiscard]] Report run(const std::string& name, std::uint64_t seed = 1);

// Reference outputs for the 3 x 3 counterexample, as quoted to 3 digits.
inline constexpr double kReferenceUnconstrained[3] = {0.826, 0.555, -0.025};
inline constexpr double kReferenceLifted[3] = {0.815, 0.576, 0.005};
inline constexpr double kReferenceTolerance = 0.0005;

}  // namespace proxmag::suites
