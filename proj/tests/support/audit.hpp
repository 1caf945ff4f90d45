#pragma once

// Re-checks returned equilibria against the game primitives: the recursion
// residual and the equilibrium condition, with costs recomputed from scratch.

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <string>

#include "oracle.hpp"
#include "v2v/equilibrium.hpp"
#include "v2v/model.hpp"

namespace v2v::testing {

// Cost of (type, strategy) at P from the cost matrix and Bayes' rule; empty
// when the type's conditioning event has probability zero.
inline std::optional<double> primitive_cost(const GameInstance& g, AgentModel model, AgentType type,
                                            Strategy strategy, double p) {
  const double t = g.t();
  const double f = g.f();
  auto pair = [&](double q) { return strategy == Strategy::kCareful ? 1.0 - q : g.r * q; };
  switch (type) {
    case AgentType::kNonV2V:
      return pair(p);
    case AgentType::kV2V:
      if (strategy == Strategy::kTrust) return oracle::trust_cost(p, g.r, g.beta, t, f);
      return pair(p);
    case AgentType::kV2VSignaled: {
      const double joint = g.beta * p * t;
      const double total = joint + g.beta * (1.0 - p) * f;
      if (total <= 0.0) return std::nullopt;
      return pair(joint / total);
    }
    case AgentType::kV2VUnsignaled: {
      const double joint = p * (1.0 - g.beta * t);
      const double total = joint + (1.0 - p) * (1.0 - g.beta * f);
      if (total <= 0.0) return std::nullopt;
      return pair(joint / total);
    }
  }
  (void)model;
  return std::nullopt;
}

// Largest cost premium paid by mass above 1e-12 over its type's best reply.
inline double nash_excess(const GameInstance& g, AgentModel model, const BehaviorProfile& profile,
                          double p) {
  double excess = 0.0;
  for (AgentType type : agent_types(model)) {
    double best = std::numeric_limits<double>::infinity();
    for (Strategy s : strategies_for(model, type)) {
      if (auto c = primitive_cost(g, model, type, s, p)) best = std::min(best, *c);
    }
    for (Strategy s : strategies_for(model, type)) {
      if (profile.mass(type, s) <= 1e-12) continue;
      if (auto c = primitive_cost(g, model, type, s, p)) excess = std::max(excess, *c - best);
    }
  }
  return excess;
}

struct Audit {
  std::mutex mu;
  std::size_t solved = 0;
  double max_residual = 0.0;
  double worst_excess = 0.0;  // over strategies with mass > 1e-12
  std::size_t nash_failures = 0;
  std::string first_failure;

  void record(const GameInstance& g, const EquilibriumResult& res) {
    double residual = 0.0;
    if (!res.exogenous) {
      const double ps = g.beta * (res.p_accident * g.t() + (1.0 - res.p_accident) * g.f());
      residual = std::abs(res.p_accident - g.p(res.profile.reckless_mass(ps)));
    }
    const double excess = nash_excess(g, res.model, res.profile, res.p_accident);
    std::lock_guard lock(mu);
    ++solved;
    max_residual = std::max(max_residual, residual);
    worst_excess = std::max(worst_excess, excess);
    if (excess > 1e-9) {
      if (nash_failures == 0) {
        first_failure = "beta=" + std::to_string(g.beta) + " y=" + std::to_string(g.y) +
                        " r=" + std::to_string(g.r) + " model=" + std::string(to_string(res.model));
      }
      ++nash_failures;
    }
  }
};

}  // namespace v2v::testing
