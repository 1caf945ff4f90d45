#include <random>

#include "doctest.h"
#include "instances.hpp"
#include "oracle.hpp"
#include "v2v/analysis.hpp"
#include "v2v/errors.hpp"
#include "v2v/exogenous.hpp"

using namespace v2v;
using enum AgentType;
using enum Strategy;

TEST_CASE("exogenous worked instance, Bayesian") {
  // P = 0.3 lies in (p_n, p_vu) = (0.25, 0.375): unsignaled V2V reckless.
  const GameInstance g = testing::worked_exogenous(0.3);
  const EquilibriumResult res = solve_exogenous(g, AgentModel::kBayesian);
  CHECK(res.p_signal == doctest::Approx(0.22).epsilon(1e-14));
  CHECK(res.profile.mass(kNonV2V, kReckless) == 0.0);
  CHECK(res.profile.mass(kV2VSignaled, kReckless) == 0.0);
  CHECK(res.profile.mass(kV2VUnsignaled, kReckless) == doctest::Approx(0.39).epsilon(1e-14));
  // 0.7 * 0.5 + 3 * 0.3 * 0.5 * 0.5 + 0.7 * 0.1 * 0.5
  CHECK(std::abs(res.social_cost - 0.61) <= 1e-12);
  CHECK(res.indifferent.empty());
}

TEST_CASE("exogenous worked instance, non-Bayesian") {
  const GameInstance g = testing::worked_exogenous(0.3);
  const EquilibriumResult res = solve_exogenous(g, AgentModel::kNonBayesian);
  CHECK(res.profile.mass(kNonV2V, kReckless) == 0.0);
  CHECK(res.profile.mass(kV2V, kTrust) == 0.5);
  CHECK(std::abs(res.social_cost - 0.61) <= 1e-12);
}

TEST_CASE("above p_vu everybody is careful") {
  const GameInstance g = testing::worked_exogenous(0.6);
  for (AgentModel model : {AgentModel::kBayesian, AgentModel::kNonBayesian}) {
    const EquilibriumResult res = solve_exogenous(g, model);
    for (AgentType type : agent_types(model)) {
      CHECK(res.profile.mass(type, kCareful) == doctest::Approx(res.profile.type_total(type)));
    }
    CHECK(res.social_cost == doctest::Approx(0.4).epsilon(1e-14));
  }
}

TEST_CASE("below p_vs everybody is reckless") {
  const GameInstance g = testing::worked_exogenous(0.05);
  for (AgentModel model : {AgentModel::kBayesian, AgentModel::kNonBayesian}) {
    const EquilibriumResult res = solve_exogenous(g, model);
    CHECK(res.social_cost == doctest::Approx(0.15).epsilon(1e-14));
  }
}

TEST_CASE("social cost aggregation") {
  const GameInstance g = testing::worked_exogenous(0.3);
  const CostTable table = cost_table(g, AgentModel::kNonBayesian, 0.3);
  BehaviorProfile careful(AgentModel::kNonBayesian);
  careful.set(kNonV2V, kCareful, 0.5);
  careful.set(kV2V, kCareful, 0.5);
  CHECK(social_cost(careful, table) == doctest::Approx(0.7));

  BehaviorProfile reckless(AgentModel::kNonBayesian);
  reckless.set(kNonV2V, kReckless, 0.5);
  reckless.set(kV2V, kReckless, 0.5);
  CHECK(social_cost(reckless, table) == doctest::Approx(0.9));

  CHECK_THROWS_AS(social_cost(careful, cost_table(g, AgentModel::kBayesian, 0.3)),
                  ModelMismatchError);
}

TEST_CASE("zero-mass undefined entries aggregate to zero") {
  GameInstance g = testing::worked_exogenous(0.3);
  g.beta = 0.0;
  const EquilibriumResult res = solve_exogenous(g, AgentModel::kBayesian);
  CHECK(res.profile.type_total(kV2VSignaled) == 0.0);
  CHECK(res.social_cost == doctest::Approx(0.7));
}

TEST_CASE("ties: canonical careful mix is flagged, opposite mix has the same cost") {
  const GameInstance base = testing::worked_exogenous(0.3);
  const Thresholds th = compute_thresholds(base);
  for (double at : {th.p_vs, th.p_n, th.p_vu}) {
    GameInstance g = base;
    g.exo_p = at;
    for (AgentModel model : {AgentModel::kBayesian, AgentModel::kNonBayesian}) {
      const auto careful = solve_exogenous(g, model, TiePolicy::kMostCareful);
      const auto reckless = solve_exogenous(g, model, TiePolicy::kMostReckless);
      CHECK_FALSE(careful.indifferent.empty());
      CHECK(std::abs(careful.social_cost - reckless.social_cost) <= 1e-9);
    }
  }
}

TEST_CASE("exogenous requires exo_p") {
  CHECK_THROWS_AS(solve_exogenous(testing::worked_instance(), AgentModel::kBayesian), ModeError);
}

TEST_CASE("random exogenous instances: oracle agreement, model equality, Nash soundness") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 5000; ++i) {
    const GameInstance g = random_instance(rng, ProbabilityMode::kExogenous);
    const auto bayes = solve_exogenous(g, AgentModel::kBayesian);
    const auto plain = solve_exogenous(g, AgentModel::kNonBayesian);
    const auto ref = oracle::exogenous(g);
    CHECK(std::abs(plain.social_cost - ref.social_cost) <= 1e-9);
    CHECK(std::abs(bayes.social_cost - plain.social_cost) <= 1e-9);
    CHECK(check_nash(bayes.profile, cost_table(g, AgentModel::kBayesian, *g.exo_p)).ok);
    for (AgentType type : agent_types(AgentModel::kBayesian)) {
      CHECK(bayes.profile.type_total(type) ==
            doctest::Approx(expected_type_mass(AgentModel::kBayesian, type, g.y, bayes.p_signal)));
    }
  }
}

TEST_CASE("exogenous social cost is non-increasing in beta") {
  std::mt19937_64 rng(23);
  const std::array models{AgentModel::kBayesian, AgentModel::kNonBayesian};
  const std::array modes{ProbabilityMode::kExogenous};
  std::vector<double> grid;
  for (int k = 0; k <= 100; ++k) grid.push_back(k / 100.0);
  for (int i = 0; i < 100; ++i) {
    const GameInstance g = random_instance(rng, ProbabilityMode::kExogenous);
    const SweepResult sweep = sweep_beta(g, grid, models, modes);
    const MonotonicityReport report = certify_monotonicity(sweep);
    CHECK(report.pass);
  }
}
