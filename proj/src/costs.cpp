#include "v2v/costs.hpp"

#include <string>

#include "v2v/errors.hpp"

namespace v2v {

namespace {

std::size_t idx(AgentType t) { return static_cast<std::size_t>(t); }
std::size_t idx(Strategy s) { return static_cast<std::size_t>(s); }

std::string pair_name(AgentType type, Strategy strategy) {
  return std::string(to_string(type)) + "/" + std::string(to_string(strategy));
}

}  // namespace

std::optional<double> CostTable::get(AgentType type, Strategy strategy) const {
  return cost_[idx(type)][idx(strategy)];
}

double CostTable::at(AgentType type, Strategy strategy) const {
  if (!is_legal(model_, type, strategy)) {
    throw IllegalStrategyError("no cost for " + pair_name(type, strategy));
  }
  const auto& c = cost_[idx(type)][idx(strategy)];
  if (!c) throw ConditioningError("cost of " + pair_name(type, strategy) + " is undefined");
  return *c;
}

std::optional<double> CostTable::min_cost(AgentType type) const {
  std::optional<double> best;
  for (Strategy s : strategies_for(model_, type)) {
    const auto& c = cost_[idx(type)][idx(s)];
    if (c && (!best || *c < *best)) best = *c;
  }
  return best;
}

void CostTable::set(AgentType type, Strategy strategy, std::optional<double> value) {
  if (!is_legal(model_, type, strategy)) {
    throw IllegalStrategyError("cannot set " + pair_name(type, strategy));
  }
  cost_[idx(type)][idx(strategy)] = value;
}

CostTable bayesian_costs(const SignalStats& stats, double r) {
  CostTable table(AgentModel::kBayesian, stats);
  const double p = stats.p_accident;
  table.set(AgentType::kNonV2V, Strategy::kCareful, 1.0 - p);
  table.set(AgentType::kNonV2V, Strategy::kReckless, r * p);
  if (const auto& q = stats.p_accident_given_nosignal) {
    table.set(AgentType::kV2VUnsignaled, Strategy::kCareful, 1.0 - *q);
    table.set(AgentType::kV2VUnsignaled, Strategy::kReckless, r * *q);
  }
  if (const auto& q = stats.p_accident_given_signal) {
    table.set(AgentType::kV2VSignaled, Strategy::kCareful, 1.0 - *q);
    table.set(AgentType::kV2VSignaled, Strategy::kReckless, r * *q);
  }
  return table;
}

CostTable nonbayesian_costs(const SignalStats& stats, double r, double beta, double t_val,
                            double f_val) {
  CostTable table(AgentModel::kNonBayesian, stats);
  const double p = stats.p_accident;
  table.set(AgentType::kNonV2V, Strategy::kCareful, 1.0 - p);
  table.set(AgentType::kNonV2V, Strategy::kReckless, r * p);
  table.set(AgentType::kV2V, Strategy::kCareful, 1.0 - p);
  table.set(AgentType::kV2V, Strategy::kReckless, r * p);
  // P(not A and S) + r P(A and not S)
  table.set(AgentType::kV2V, Strategy::kTrust,
            (1.0 - p) * beta * f_val + r * p * (1.0 - beta * t_val));
  return table;
}

double recklessness_weight(AgentModel model, AgentType type, Strategy strategy,
                           double p_signal) {
  if (!is_legal(model, type, strategy)) {
    throw IllegalStrategyError("strategy " + pair_name(type, strategy) + " is not legal under the " +
                               std::string(to_string(model)) + " model");
  }
  switch (strategy) {
    case Strategy::kCareful:
      return 0.0;
    case Strategy::kReckless:
      return 1.0;
    case Strategy::kTrust:
      return 1.0 - p_signal;
  }
  return 0.0;
}

}  // namespace v2v
