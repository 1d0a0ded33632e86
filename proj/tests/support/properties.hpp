#pragma once

// Randomised property suites. Each returns a tally instead of asserting, so
// both the gtest wrappers and the acceptance binary can run them.

#include <cstdint>
#include <string>

namespace sprayscope::testing {

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  /// Largest observed ratio residual / allowed bound (<= 1 means within bound).
  double worst = 0.0;
  std::string first_failure;
  /// Extra counts, e.g. how many cases sat on each side of a pass/fail split.
  std::size_t passing_side = 0;
  std::size_t failing_side = 0;

  bool ok(std::size_t minimum_cases = 500) const { return failures == 0 && cases >= minimum_cases; }
  std::string summary() const;
};

inline constexpr std::size_t kDefaultCases = 500;

PropertyResult property_phi_y(std::size_t cases = kDefaultCases, std::uint64_t seed = 1);
PropertyResult property_trace_identity(std::size_t cases = kDefaultCases, std::uint64_t seed = 2);
PropertyResult property_lemma_forms_agree(std::size_t cases = kDefaultCases, std::uint64_t seed = 3);
PropertyResult property_d1_matches_dj_alpha(std::size_t cases = kDefaultCases, std::uint64_t seed = 4);
PropertyResult property_homogeneity_scaling(std::size_t cases = kDefaultCases, std::uint64_t seed = 5);
/// |m| <= 3 at 1e-5.
PropertyResult property_ad_vs_fd(std::size_t cases = kDefaultCases, std::uint64_t seed = 6);
/// |m| = 4 at 1e-3.
PropertyResult property_ad_vs_fd_order4(std::size_t cases = kDefaultCases, std::uint64_t seed = 7);
/// N, Phi, d_J R, d_h R, d_J alpha, dd_J Tr(Phi) against finite differences.
PropertyResult property_frame_vs_fd(std::size_t cases = kDefaultCases, std::uint64_t seed = 8);
PropertyResult property_leibniz(std::size_t cases = kDefaultCases, std::uint64_t seed = 9);
PropertyResult property_truncation_prefix(std::size_t cases = kDefaultCases, std::uint64_t seed = 10);
PropertyResult property_round_trip(std::size_t cases = 1000, std::uint64_t seed = 11);
PropertyResult property_evaluate_matches_jet(std::size_t cases = 1000, std::uint64_t seed = 12);
PropertyResult property_verdict_monotone(std::size_t cases = kDefaultCases, std::uint64_t seed = 13);
PropertyResult property_deterministic(std::size_t cases = kDefaultCases, std::uint64_t seed = 14);
PropertyResult property_metric_vs_fd(std::size_t cases = kDefaultCases, std::uint64_t seed = 15);

}  // namespace sprayscope::testing
