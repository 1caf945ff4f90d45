#include "v2v/exogenous.hpp"

#include <vector>

#include "v2v/errors.hpp"

namespace v2v {

namespace {

// Picks from a tie set ordered most careful first.
Strategy pick(const std::vector<Strategy>& tied, TiePolicy tie) {
  return tie == TiePolicy::kMostCareful ? tied.front() : tied.back();
}

// Careful above the threshold, reckless below.
Strategy two_action_choice(double p, double threshold, TiePolicy tie, bool& indifferent) {
  switch (compare(p, threshold)) {
    case Side::kAbove:
      return Strategy::kCareful;
    case Side::kBelow:
      return Strategy::kReckless;
    case Side::kAt:
      indifferent = true;
      return pick({Strategy::kCareful, Strategy::kReckless}, tie);
  }
  return Strategy::kCareful;
}

Strategy trust_choice(double p, const Thresholds& th, TiePolicy tie, bool& indifferent) {
  const Side at_vu = compare(p, th.p_vu);
  const Side at_vs = compare(p, th.p_vs);
  if (at_vu == Side::kAbove) return Strategy::kCareful;
  if (at_vu == Side::kAt) {
    indifferent = true;
    if (at_vs == Side::kAt) {
      return pick({Strategy::kCareful, Strategy::kTrust, Strategy::kReckless}, tie);
    }
    return pick({Strategy::kCareful, Strategy::kTrust}, tie);
  }
  if (at_vs == Side::kAbove) return Strategy::kTrust;
  if (at_vs == Side::kAt) {
    indifferent = true;
    return pick({Strategy::kTrust, Strategy::kReckless}, tie);
  }
  return Strategy::kReckless;
}

}  // namespace

EquilibriumResult solve_exogenous(const GameInstance& g, AgentModel model, TiePolicy tie) {
  validate_instance(g);
  if (!g.exo_p) throw ModeError("solve_exogenous needs an exogenous accident probability");

  const double p = *g.exo_p;
  const Thresholds th = compute_thresholds(g);

  EquilibriumResult result;
  result.model = model;
  result.exogenous = true;
  result.p_accident = p;
  result.p_signal = signal_probability(g.beta, p, g.t(), g.f());
  result.profile = BehaviorProfile(model);

  auto place = [&](AgentType type, Strategy s, bool indifferent) {
    result.profile.set(type, s, expected_type_mass(model, type, g.y, result.p_signal));
    if (indifferent) result.indifferent.push_back(type);
  };

  bool tied = false;
  const Strategy non_v2v = two_action_choice(p, th.p_n, tie, tied);
  place(AgentType::kNonV2V, non_v2v, tied);

  if (model == AgentModel::kBayesian) {
    tied = false;
    const Strategy unsignaled = two_action_choice(p, th.p_vu, tie, tied);
    place(AgentType::kV2VUnsignaled, unsignaled, tied);
    tied = false;
    const Strategy signaled = two_action_choice(p, th.p_vs, tie, tied);
    place(AgentType::kV2VSignaled, signaled, tied);
  } else {
    tied = false;
    const Strategy v2v = trust_choice(p, th, tie, tied);
    place(AgentType::kV2V, v2v, tied);
  }

  const CostTable table = cost_table(g, model, p);
  require_nash(result.profile, table);
  result.social_cost = social_cost(result.profile, table);
  return result;
}

}  // namespace v2v
