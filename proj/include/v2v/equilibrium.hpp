#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "v2v/costs.hpp"
#include "v2v/model.hpp"

namespace v2v {

// Endogenous equilibrium families. Each pins the accident probability to a
// point (E1, E2, E4, E6, E7) or an open band (E3, E5).
enum class Family { kE1 = 1, kE2, kE3, kE4, kE5, kE6, kE7 };

std::string_view to_string(Family family);

// Population masses x_tau^s.
class BehaviorProfile {
 public:
  explicit BehaviorProfile(AgentModel model) : model_(model) {}

  AgentModel model() const { return model_; }
  double mass(AgentType type, Strategy strategy) const;
  void set(AgentType type, Strategy strategy, double mass);
  double type_total(AgentType type) const;

  // sum over (tau, s) of rho(tau, s) x_tau^s: the reckless mass d.
  double reckless_mass(double p_signal) const;

 private:
  AgentModel model_;
  std::array<std::array<double, kNumStrategies>, kNumTypes> mass_{};
};

// Mass each type must carry: Bayesian n = 1-y, vu = (1-P(S)) y, vs = P(S) y;
// non-Bayesian n = 1-y, v = y.
double expected_type_mass(AgentModel model, AgentType type, double y, double p_signal);

struct EquilibriumResult {
  AgentModel model = AgentModel::kBayesian;
  bool exogenous = false;
  double p_accident = 0.0;
  double p_signal = 0.0;
  BehaviorProfile profile{AgentModel::kBayesian};
  double social_cost = 0.0;
  std::optional<Family> family;                 // endogenous only
  std::vector<AgentType> indifferent;           // types sitting exactly at a threshold
  double residual = 0.0;                        // |P - p(d)|, endogenous only
};

// The cost table an agent model faces at accident probability p_accident.
CostTable cost_table(const GameInstance& g, AgentModel model, double p_accident);

// sum_tau sum_s J_tau(s) x_tau^s. Undefined entries with zero mass count 0.
double social_cost(const BehaviorProfile& profile, const CostTable& table);

struct NashReport {
  bool ok = true;
  double worst_excess = 0.0;  // largest J(s) - min_s' J(s') over strategies in use
  AgentType worst_type = AgentType::kNonV2V;
  Strategy worst_strategy = Strategy::kCareful;
};

// Every strategy carrying mass above mass_tol must cost at most the type's
// minimum plus cost_tol.
NashReport check_nash(const BehaviorProfile& profile, const CostTable& table,
                      double mass_tol = 1e-12, double cost_tol = 1e-9);

// Throws AssertionError when check_nash fails.
void require_nash(const BehaviorProfile& profile, const CostTable& table);

}  // namespace v2v
