#pragma once

// Cross-module invariant suite behind `rotorlab check` and the acceptance
// binary. Each check is self-contained and deterministic.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rotorlab::checks {

struct CheckRecord {
  int id = 0;
  std::string name;
  std::string description;
  bool passed = false;
  /// Worst observed value of the governing quantity, compared to `threshold`.
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct CheckOptions {
  /// Test hook: scale one generated Laplacian coefficient (a_tt, a_pp, a_ps,
  /// a_ss or b_t) by 1 + perturbation before comparison.
  std::optional<std::string> perturb_coefficient;
  double perturbation = 1e-6;
  std::uint64_t seed = 0x5eed2024ULL;
};

/// Valid names for CheckOptions::perturb_coefficient.
const std::vector<std::string>& perturbable_coefficients();

CheckRecord sphere_resonance_spectrum(const CheckOptions& options = {});
CheckRecord symmetric_top_spectrum(const CheckOptions& options = {});
CheckRecord operator_transcription(const CheckOptions& options = {});
CheckRecord metric_identities(const CheckOptions& options = {});
CheckRecord group_invariance(const CheckOptions& options = {});
CheckRecord kinetic_energy_equality(const CheckOptions& options = {});
CheckRecord classical_conservation(const CheckOptions& options = {});
CheckRecord hamilton_jacobi_consistency(const CheckOptions& options = {});
CheckRecord hermiticity_orthogonality(const CheckOptions& options = {});

inline constexpr int kCheckCount = 9;

/// Runs the checks with the given ids (all when empty), in id order.
std::vector<CheckRecord> run_checks(const CheckOptions& options = {}, const std::vector<int>& ids = {});

}  // namespace rotorlab::checks
