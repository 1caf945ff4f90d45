#pragma once

#include <array>
#include <optional>

#include "v2v/model.hpp"

namespace v2v {

// Expected cost J_tau(s) of every legal (type, strategy) pair at one
// accident probability.
//
// A Bayesian signaled (unsignaled) entry is empty when P(S) = 0 (P(S) = 1):
// the conditional is undefined but the type then has zero mass, so
// aggregation treats 0 * undefined as 0.
class CostTable {
 public:
  CostTable(AgentModel model, SignalStats stats) : model_(model), stats_(stats) {}

  AgentModel model() const { return model_; }
  const SignalStats& stats() const { return stats_; }

  std::optional<double> get(AgentType type, Strategy strategy) const;
  // Throws ConditioningError for an undefined entry, IllegalStrategyError
  // for a pair outside the model.
  double at(AgentType type, Strategy strategy) const;

  // Smallest defined cost among the type's strategies.
  std::optional<double> min_cost(AgentType type) const;

  void set(AgentType type, Strategy strategy, std::optional<double> value);

 private:
  AgentModel model_;
  SignalStats stats_;
  std::array<std::array<std::optional<double>, kNumStrategies>, kNumTypes> cost_{};
};

// Costs computed from posteriors: careful pays the conditional probability of
// no accident, reckless pays r times the conditional accident probability.
CostTable bayesian_costs(const SignalStats& stats, double r);

// Costs of drivers who either ignore the signal (prior-based C / R) or trust
// it (careful exactly when a warning is displayed).
// beta, t, f are needed for the trust cost (1 - P) beta f + r P (1 - beta t).
CostTable nonbayesian_costs(const SignalStats& stats, double r, double beta, double t_val,
                            double f_val);

// Probability that a driver playing the strategy drives recklessly.
double recklessness_weight(AgentModel model, AgentType type, Strategy strategy,
                           double p_signal);

}  // namespace v2v
