#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "v2v/endogenous.hpp"
#include "v2v/equilibrium.hpp"
#include "v2v/exogenous.hpp"
#include "v2v/model.hpp"

namespace v2v {

enum class ProbabilityMode { kExogenous, kEndogenous };

std::string_view to_string(ProbabilityMode mode);
ProbabilityMode parse_probability_mode(std::string_view name);

// Solves g under the given agent model; exogenous iff g.exo_p is set.
EquilibriumResult solve(const GameInstance& g, AgentModel model);

// ---------------------------------------------------------------------------
// Beta sweeps

struct SweepRow {
  double beta = 0.0;
  AgentModel model = AgentModel::kBayesian;
  ProbabilityMode mode = ProbabilityMode::kEndogenous;
  EquilibriumResult result;
};

struct SweepResult {
  GameInstance instance;      // template; its beta is ignored
  std::vector<double> grid;   // strictly increasing
  // Rows are grouped by (mode, model) series, each series in grid order.
  std::vector<SweepRow> rows;

  // Rows of one series, in grid order.
  std::vector<const SweepRow*> series(ProbabilityMode mode, AgentModel model) const;
  // Forward differences J(beta_{i+1}) - J(beta_i) and P(...) - P(...).
  std::vector<double> cost_differences(ProbabilityMode mode, AgentModel model) const;
  std::vector<double> probability_differences(ProbabilityMode mode, AgentModel model) const;
};

// Sorts and deduplicates; throws RangeError for values outside [0, 1].
std::vector<double> normalize_grid(std::vector<double> grid);

// Exogenous mode needs template.exo_p; endogenous mode ignores it.
// Solver failures are rethrown with the offending beta in the message.
SweepResult sweep_beta(const GameInstance& instance, std::vector<double> grid,
                       std::span<const AgentModel> models,
                       std::span<const ProbabilityMode> modes);

struct MonotonicityReport {
  bool pass = true;
  double worst_violation = 0.0;  // max over adjacent pairs of J(b_{i+1}) - J(b_i), if positive
  double beta_at = 0.0;          // left grid point of the worst pair
  AgentModel model = AgentModel::kBayesian;
};

inline constexpr double kMonotonicityTolerance = 1e-12;

// Passes iff J(beta_i) >= J(beta_{i+1}) - 1e-12 for every adjacent pair of
// every series. Throws ModeError if the sweep has endogenous rows.
MonotonicityReport certify_monotonicity(const SweepResult& sweep);

// ---------------------------------------------------------------------------
// Paradox search

struct ParadoxSearchSpace {
  std::vector<double> ys;
  std::vector<double> rs;
  std::vector<double> p_intercepts;  // affine p(d) = a + b d
  std::vector<double> p_slopes;
  std::vector<double> betas;
  Curve t_curve = Curve::constant(0.9);
  Curve f_curve = Curve::constant(0.5);
  ProbabilityMode mode = ProbabilityMode::kEndogenous;
};

// y in {0.1..0.9}, r in {1.5, 2..8}, p intercept in {0, 0.05..0.3}, slope in
// {0.1..0.9}, 51 beta points, constant t = 0.9 and f = 0.5.
ParadoxSearchSpace default_paradox_space();

inline constexpr double kParadoxMargin = 1e-6;

struct ParadoxCertificate {
  GameInstance instance;  // endogenous template; beta unset
  double beta1 = 0.0;
  double beta2 = 0.0;
  double cost1 = 0.0;
  double cost2 = 0.0;
  double margin = 0.0;  // cost2 - cost1
  Family family1 = Family::kE1;
  Family family2 = Family::kE1;
};

// One certificate per template whose social cost rises by more than
// kParadoxMargin between adjacent beta grid points (the steepest such pair).
// Certificates are re-verified with fresh solves under both agent models.
// Throws ModeError for exogenous mode.
std::vector<ParadoxCertificate> search_paradox(const ParadoxSearchSpace& space);

// Re-solves both points with both models; true iff the rise exceeds the
// margin under each and the models agree.
bool verify_certificate(const ParadoxCertificate& certificate);

// ---------------------------------------------------------------------------
// Model equivalence

inline constexpr double kEquivalenceTolerance = 1e-9;

struct EquivalenceReport {
  bool pass = true;
  std::size_t count = 0;
  double max_cost_gap = 0.0;         // max |J_B - J_I|
  double max_probability_gap = 0.0;  // max |P_B - P_I| over endogenous instances
  std::size_t worst_index = 0;
};

EquivalenceReport certify_equivalence(std::span<const GameInstance> instances);

// ---------------------------------------------------------------------------
// Random instances: beta, y ~ U[0,1]; r log-uniform on (1, 10]; affine
// t > f and affine increasing p; exo_p ~ U[p(0), p(1)] in exogenous mode.

GameInstance random_instance(std::mt19937_64& rng, ProbabilityMode mode);

// ---------------------------------------------------------------------------
// Essential uniqueness

// Equilibrium profiles that differ from result.profile only in how the
// indifferent types split their mass among tied strategies. Exogenous games
// admit any split; endogenous splits keep the reckless mass p^{-1}(P).
// The first entry is result.profile itself.
std::vector<BehaviorProfile> indifference_extremes(const GameInstance& g,
                                                   const EquilibriumResult& result);

// Convex combination sum_k w_k profile_k (weights normalized).
BehaviorProfile blend(std::span<const BehaviorProfile> profiles, std::span<const double> weights);

struct Reaggregation {
  double p_accident = 0.0;  // P implied by the profile (exogenous: exo_p)
  double social_cost = 0.0;
  bool nash = false;
};

// Accident probability implied by a profile (exogenous: exo_p; endogenous:
// p(d) with trust weights taken at P(S) of p_reference) and its social cost
// with costs evaluated at that implied probability.
Reaggregation reaggregate(const GameInstance& g, const BehaviorProfile& profile,
                          double p_reference);

}  // namespace v2v
