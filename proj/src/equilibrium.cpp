#include "v2v/equilibrium.hpp"

#include <cmath>
#include <string>

#include "v2v/errors.hpp"

namespace v2v {

namespace {

std::size_t idx(AgentType t) { return static_cast<std::size_t>(t); }
std::size_t idx(Strategy s) { return static_cast<std::size_t>(s); }

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kE1:
      return "E1";
    case Family::kE2:
      return "E2";
    case Family::kE3:
      return "E3";
    case Family::kE4:
      return "E4";
    case Family::kE5:
      return "E5";
    case Family::kE6:
      return "E6";
    case Family::kE7:
      return "E7";
  }
  return "?";
}

double BehaviorProfile::mass(AgentType type, Strategy strategy) const {
  return mass_[idx(type)][idx(strategy)];
}

void BehaviorProfile::set(AgentType type, Strategy strategy, double mass) {
  if (!is_legal(model_, type, strategy)) {
    throw IllegalStrategyError("strategy not legal for this type and model");
  }
  mass_[idx(type)][idx(strategy)] = mass;
}

double BehaviorProfile::type_total(AgentType type) const {
  double total = 0.0;
  for (double m : mass_[idx(type)]) total += m;
  return total;
}

double BehaviorProfile::reckless_mass(double p_signal) const {
  double d = 0.0;
  for (AgentType type : agent_types(model_)) {
    for (Strategy s : strategies_for(model_, type)) {
      d += recklessness_weight(model_, type, s, p_signal) * mass(type, s);
    }
  }
  return d;
}

double expected_type_mass(AgentModel model, AgentType type, double y, double p_signal) {
  switch (type) {
    case AgentType::kNonV2V:
      return 1.0 - y;
    case AgentType::kV2VUnsignaled:
      return model == AgentModel::kBayesian ? (1.0 - p_signal) * y : 0.0;
    case AgentType::kV2VSignaled:
      return model == AgentModel::kBayesian ? p_signal * y : 0.0;
    case AgentType::kV2V:
      return model == AgentModel::kNonBayesian ? y : 0.0;
  }
  return 0.0;
}

CostTable cost_table(const GameInstance& g, AgentModel model, double p_accident) {
  const double t = g.t();
  const double f = g.f();
  const SignalStats stats = posteriors(g.beta, p_accident, t, f);
  if (model == AgentModel::kBayesian) return bayesian_costs(stats, g.r);
  return nonbayesian_costs(stats, g.r, g.beta, t, f);
}

double social_cost(const BehaviorProfile& profile, const CostTable& table) {
  if (profile.model() != table.model()) {
    throw ModelMismatchError("profile and cost table belong to different agent models");
  }
  double total = 0.0;
  for (AgentType type : agent_types(profile.model())) {
    for (Strategy s : strategies_for(profile.model(), type)) {
      const double m = profile.mass(type, s);
      if (m == 0.0) continue;
      total += table.at(type, s) * m;
    }
  }
  return total;
}

NashReport check_nash(const BehaviorProfile& profile, const CostTable& table, double mass_tol,
                      double cost_tol) {
  if (profile.model() != table.model()) {
    throw ModelMismatchError("profile and cost table belong to different agent models");
  }
  NashReport report;
  for (AgentType type : agent_types(profile.model())) {
    const auto best = table.min_cost(type);
    for (Strategy s : strategies_for(profile.model(), type)) {
      if (profile.mass(type, s) <= mass_tol) continue;
      const auto c = table.get(type, s);
      if (!c || !best) {
        // Positive mass on a strategy whose cost is undefined.
        report.ok = false;
        report.worst_excess = INFINITY;
        report.worst_type = type;
        report.worst_strategy = s;
        return report;
      }
      const double excess = *c - *best;
      if (excess > report.worst_excess) {
        report.worst_excess = excess;
        report.worst_type = type;
        report.worst_strategy = s;
      }
    }
  }
  report.ok = report.worst_excess <= cost_tol;
  return report;
}

void require_nash(const BehaviorProfile& profile, const CostTable& table) {
  const NashReport report = check_nash(profile, table);
  if (!report.ok) {
    throw AssertionError("equilibrium check failed: " + std::string(to_string(report.worst_type)) +
                         "/" + std::string(to_string(report.worst_strategy)) + " exceeds the best cost by " +
                         std::to_string(report.worst_excess));
  }
}

}  // namespace v2v
