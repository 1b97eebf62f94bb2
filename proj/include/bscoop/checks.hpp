#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bscoop/common.hpp"
#include "bscoop/model.hpp"

namespace bscoop {

/// Synthetic deterministic-analysis instance with perfect CSI.
struct RandomInstance {
  LargeScaleGains gains;
  VectorXd gamma;
  VectorXd tau;
  int N = 1;
  double sigma2 = 0.0;
};

/// L in {1..max_L}, K in {1..max_K}, N in [2KL, 6KL], cross gains a random
/// fraction of the serving gain, targets in [0.2, 2]. Redrawn until all three
/// schemes are feasible.
RandomInstance random_instance(std::mt19937_64& rng, int max_L = 4, int max_K = 8);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Duality gaps, closed-form cross-checks and case-study consistency.
std::vector<CheckResult> run_invariant_checks(std::uint64_t seed);

}  // namespace bscoop
