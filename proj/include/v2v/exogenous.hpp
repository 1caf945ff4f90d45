#pragma once

#include "v2v/equilibrium.hpp"
#include "v2v/model.hpp"

namespace v2v {

// Where tied mass goes when the accident probability sits on a threshold.
// Careful > Trust > Reckless in carefulness order.
enum class TiePolicy { kMostCareful, kMostReckless };

// Equilibrium of a game with constant accident probability g.exo_p.
// Every type best-responds to the threshold comparisons; ties (within
// kTieTolerance) follow the tie policy and are listed in `indifferent`.
// The profile is checked against the equilibrium condition before return.
EquilibriumResult solve_exogenous(const GameInstance& g, AgentModel model,
                                  TiePolicy tie = TiePolicy::kMostCareful);

}  // namespace v2v
