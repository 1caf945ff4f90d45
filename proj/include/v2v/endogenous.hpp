#pragma once

// Games whose accident probability is produced by driver behavior:
// P = p(d), d the reckless mass, which in turn depends on P.
//
// Non-Bayesian solutions are built constructively from the family partition
// E1..E7 of parameter space. Bayesian solutions come from a separate path
// that never consults the partition: it locates each type's switch point
// from its posterior costs and bisects the best-response gap P - p(d(P)).

#include "v2v/equilibrium.hpp"
#include "v2v/fixed_point.hpp"
#include "v2v/model.hpp"

namespace v2v {

// The family membership predicates, evaluated in order E1..E7, first match
// wins. Throws ExhaustivenessError if none holds.
Family classify_family(const GameInstance& g);

// Closed forms used by the predicates: reckless mass when non-V2V drivers
// are careful (resp. reckless) and V2V drivers trust, at accident
// probability P.
double trusting_reckless_mass_careful_nonv2v(const GameInstance& g, double p_accident);
double trusting_reckless_mass_reckless_nonv2v(const GameInstance& g, double p_accident);

EquilibriumResult solve_endogenous(const GameInstance& g, AgentModel model);

// The two independent solver paths behind solve_endogenous.
EquilibriumResult solve_endogenous_nonbayesian(const GameInstance& g);
EquilibriumResult solve_endogenous_bayesian(const GameInstance& g);

}  // namespace v2v
