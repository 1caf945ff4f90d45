#pragma once

#include <cstdint>
#include <vector>

#include "v2v/equilibrium.hpp"
#include "v2v/model.hpp"

namespace v2v {

// Sampling check of the analytic cost functions. Each sample draws an
// accident A ~ Bernoulli(P), a broadcast ~ Bernoulli(t) or Bernoulli(f),
// and a display ~ Bernoulli(beta), then charges every strategy from the
// careful/reckless cost matrix. Posterior-based (Bayesian) costs are
// estimated on the samples with (without) a displayed warning.

struct StrategyEstimate {
  AgentModel model = AgentModel::kBayesian;
  AgentType type = AgentType::kNonV2V;
  Strategy strategy = Strategy::kCareful;
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double z = 0.0;             // (empirical - analytic) / std_error; 0 when both agree exactly
  std::uint64_t samples = 0;  // samples the estimate conditions on
};

struct MonteCarloReport {
  std::vector<StrategyEstimate> estimates;
  std::uint64_t samples = 0;
  bool pass = true;  // every |z| <= kMonteCarloZLimit
};

inline constexpr double kMonteCarloZLimit = 4.0;
inline constexpr std::uint64_t kMinMonteCarloSamples = 10'000;

// Samples are split into a fixed number of chunks, each with its own
// generator seeded from (seed, chunk), so results are identical for any
// thread count.
MonteCarloReport monte_carlo_estimate(const GameInstance& g, double p_accident,
                                      std::uint64_t sample_count, std::uint64_t seed);

// As above; throws StatisticalFailure naming every strategy beyond 4 standard errors.
MonteCarloReport monte_carlo_validate(const GameInstance& g, const EquilibriumResult& equilibrium,
                                      std::uint64_t sample_count, std::uint64_t seed);

}  // namespace v2v
