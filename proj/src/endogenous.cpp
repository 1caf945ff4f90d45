#include "v2v/endogenous.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "v2v/errors.hpp"

namespace v2v {

namespace {

void require_endogenous(const GameInstance& g) {
  validate_instance(g);
  if (g.exo_p) throw ModeError("endogenous solver given an exogenous instance");
}

double clamp_mass(double v, double hi) { return std::clamp(v, 0.0, hi); }

void finish(EquilibriumResult& result, const GameInstance& g) {
  const CostTable table = cost_table(g, result.model, result.p_accident);
  require_nash(result.profile, table);
  result.social_cost = social_cost(result.profile, table);
  const double d = result.profile.reckless_mass(result.p_signal);
  result.residual = std::abs(result.p_accident - g.p(d));
  if (result.residual > kFixedPointTolerance) {
    throw AssertionError("endogenous equilibrium violates P = p(d)");
  }
}

}  // namespace

double trusting_reckless_mass_careful_nonv2v(const GameInstance& g, double p) {
  // y - (P (t - f) beta + f beta) y
  return g.y - (p * (g.t() - g.f()) * g.beta + g.f() * g.beta) * g.y;
}

double trusting_reckless_mass_reckless_nonv2v(const GameInstance& g, double p) {
  // 1 - (P (t - f) beta + f beta) y
  return 1.0 - (p * (g.t() - g.f()) * g.beta + g.f() * g.beta) * g.y;
}

Family classify_family(const GameInstance& g) {
  require_endogenous(g);
  const Thresholds th = compute_thresholds(g);
  const auto low = [&](double p) { return g.p(trusting_reckless_mass_careful_nonv2v(g, p)); };
  const auto high = [&](double p) { return g.p(trusting_reckless_mass_reckless_nonv2v(g, p)); };

  if (th.p_vu < g.p(0.0)) return Family::kE1;
  if (g.p(0.0) <= th.p_vu && th.p_vu <= low(th.p_vu)) return Family::kE2;
  if (low(th.p_vu) < th.p_vu && th.p_n < low(th.p_n)) return Family::kE3;
  if (low(th.p_n) <= th.p_n && th.p_n <= high(th.p_n)) return Family::kE4;
  if (high(th.p_n) < th.p_n && th.p_vs < high(th.p_vs)) return Family::kE5;
  if (high(th.p_vs) <= th.p_vs && th.p_vs <= g.p(1.0)) return Family::kE6;
  if (g.p(1.0) < th.p_vs) return Family::kE7;
  throw ExhaustivenessError("no equilibrium family matches the instance");
}

EquilibriumResult solve_endogenous(const GameInstance& g, AgentModel model) {
  if (model == AgentModel::kNonBayesian) return solve_endogenous_nonbayesian(g);
  EquilibriumResult result = solve_endogenous_bayesian(g);
  result.family = classify_family(g);
  return result;
}

EquilibriumResult solve_endogenous_nonbayesian(const GameInstance& g) {
  const Family family = classify_family(g);
  const Thresholds th = compute_thresholds(g);
  const double y = g.y;
  const double t = g.t();
  const double f = g.f();
  const auto p_signal = [&](double p) { return signal_probability(g.beta, p, t, f); };

  EquilibriumResult result;
  result.model = AgentModel::kNonBayesian;
  result.family = family;
  BehaviorProfile& x = result.profile = BehaviorProfile(AgentModel::kNonBayesian);
  auto flag = [&](AgentType type) { result.indifferent.push_back(type); };
  auto flag_if_at = [&](AgentType type, double threshold) {
    if (compare(result.p_accident, threshold) == Side::kAt) flag(type);
  };

  using enum AgentType;
  using enum Strategy;
  switch (family) {
    case Family::kE1:
      result.p_accident = g.p(0.0);
      x.set(kNonV2V, kCareful, 1.0 - y);
      x.set(kV2V, kCareful, y);
      break;
    case Family::kE2: {
      // V2V indifferent between trusting and careful; trust mass pins P.
      result.p_accident = th.p_vu;
      const double no_signal = 1.0 - p_signal(th.p_vu);
      const double trust = no_signal > 0.0 ? clamp_mass(g.p_inverse(th.p_vu) / no_signal, y) : 0.0;
      x.set(kNonV2V, kCareful, 1.0 - y);
      x.set(kV2V, kTrust, trust);
      x.set(kV2V, kCareful, y - trust);
      flag(kV2V);
      flag_if_at(kNonV2V, th.p_n);
      break;
    }
    case Family::kE3: {
      const auto report = fixed_point_bisect(
          [&](double p) { return g.p(trusting_reckless_mass_careful_nonv2v(g, p)); }, th.p_n,
          th.p_vu);
      result.p_accident = report.value;
      x.set(kNonV2V, kCareful, 1.0 - y);
      x.set(kV2V, kTrust, y);
      break;
    }
    case Family::kE4: {
      // Non-V2V indifferent; their reckless mass pins P.
      result.p_accident = th.p_n;
      const double reckless =
          clamp_mass(g.p_inverse(th.p_n) - (1.0 - p_signal(th.p_n)) * y, 1.0 - y);
      x.set(kNonV2V, kReckless, reckless);
      x.set(kNonV2V, kCareful, 1.0 - y - reckless);
      x.set(kV2V, kTrust, y);
      flag(kNonV2V);
      flag_if_at(kV2V, th.p_vu);
      break;
    }
    case Family::kE5: {
      const auto report = fixed_point_bisect(
          [&](double p) { return g.p(trusting_reckless_mass_reckless_nonv2v(g, p)); }, th.p_vs,
          th.p_n);
      result.p_accident = report.value;
      x.set(kNonV2V, kReckless, 1.0 - y);
      x.set(kV2V, kTrust, y);
      break;
    }
    case Family::kE6: {
      // V2V indifferent between reckless and trusting. Solve
      // (1 - y) + x_R + P(not S) (y - x_R) = p^{-1}(P_vs) for x_R.
      result.p_accident = th.p_vs;
      const double signal = p_signal(th.p_vs);
      const double target = g.p_inverse(th.p_vs);
      double reckless = 0.0;
      if (signal > 0.0) reckless = clamp_mass((target - 1.0 + signal * y) / signal, y);
      x.set(kNonV2V, kReckless, 1.0 - y);
      x.set(kV2V, kReckless, reckless);
      x.set(kV2V, kTrust, y - reckless);
      flag(kV2V);
      break;
    }
    case Family::kE7:
      result.p_accident = g.p(1.0);
      x.set(kNonV2V, kReckless, 1.0 - y);
      x.set(kV2V, kReckless, y);
      break;
  }
  result.p_signal = p_signal(result.p_accident);
  finish(result, g);
  return result;
}

namespace {

constexpr std::array<AgentType, 3> kBayesTypes{AgentType::kNonV2V, AgentType::kV2VUnsignaled,
                                               AgentType::kV2VSignaled};

// Reckless-minus-careful posterior cost of a Bayesian type at accident
// probability P; increasing in P. Empty where the type's conditional is
// undefined.
std::optional<double> reckless_premium(const GameInstance& g, AgentType type, double p) {
  const CostTable table = cost_table(g, AgentModel::kBayesian, p);
  const auto r = table.get(type, Strategy::kReckless);
  const auto c = table.get(type, Strategy::kCareful);
  if (!r || !c) return std::nullopt;
  return *r - *c;
}

// Accident probability at which a Bayesian type switches from reckless to
// careful, found by bisecting its posterior cost premium on (0, 1).
double switch_point(const GameInstance& g, AgentType type) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const auto premium = reckless_premium(g, type, mid);
    if (!premium) break;
    if (*premium < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct BayesState {
  std::array<double, 3> type_mass{};
  std::array<double, 3> reckless{};  // strict reckless mass per type
  std::array<bool, 3> indifferent{};
  double p_signal = 0.0;
};

// Best responses at P. Types whose switch point lies within `tie` of P are
// marked indifferent and contribute no reckless mass.
BayesState best_responses(const GameInstance& g, double p, const std::array<double, 3>& switches,
                          const std::array<bool, 3>& active, double tie) {
  BayesState s;
  s.p_signal = signal_probability(g.beta, p, g.t(), g.f());
  for (std::size_t i = 0; i < kBayesTypes.size(); ++i) {
    s.type_mass[i] = expected_type_mass(AgentModel::kBayesian, kBayesTypes[i], g.y, s.p_signal);
    if (!active[i]) continue;
    if (std::abs(p - switches[i]) <= tie) {
      s.indifferent[i] = true;
      continue;
    }
    const auto premium = reckless_premium(g, kBayesTypes[i], p);
    if (premium && *premium < 0.0) s.reckless[i] = s.type_mass[i];
  }
  return s;
}

double strict_reckless(const BayesState& s) { return s.reckless[0] + s.reckless[1] + s.reckless[2]; }

}  // namespace

EquilibriumResult solve_endogenous_bayesian(const GameInstance& g) {
  require_endogenous(g);
  constexpr double kSwitchTie = 1e-12;
  const double p_lo = g.p(0.0);
  const double p_hi = g.p(1.0);

  // A signaled type exists only when warnings can be displayed.
  const std::array<bool, 3> active{true, true, g.beta > 0.0};
  std::array<double, 3> switches{};
  std::vector<double> points;
  for (std::size_t i = 0; i < kBayesTypes.size(); ++i) {
    if (!active[i]) continue;
    switches[i] = switch_point(g, kBayesTypes[i]);
    if (switches[i] >= p_lo && switches[i] <= p_hi) points.push_back(switches[i]);
  }
  std::sort(points.begin(), points.end());

  EquilibriumResult result;
  result.model = AgentModel::kBayesian;
  result.profile = BehaviorProfile(AgentModel::kBayesian);

  auto build = [&](double p, const BayesState& s, double extra_reckless) {
    result.p_accident = p;
    result.p_signal = s.p_signal;
    for (std::size_t i = 0; i < kBayesTypes.size(); ++i) {
      double reckless = s.reckless[i];
      if (s.indifferent[i]) {
        const double take = std::min(extra_reckless, s.type_mass[i]);
        reckless = std::max(take, 0.0);
        extra_reckless -= reckless;
        result.indifferent.push_back(kBayesTypes[i]);
      }
      const AgentType type = kBayesTypes[i];
      if (s.type_mass[i] == 0.0) continue;
      result.profile.set(type, Strategy::kReckless, reckless);
      result.profile.set(type, Strategy::kCareful, s.type_mass[i] - reckless);
    }
  };

  // Equilibria sitting on a switch point: the indifferent types absorb
  // whatever reckless mass makes P = p(d).
  for (double c : points) {
    const BayesState s = best_responses(g, c, switches, active, kSwitchTie);
    const double d_lo = strict_reckless(s);
    double d_hi = d_lo;
    for (std::size_t i = 0; i < 3; ++i) {
      if (s.indifferent[i]) d_hi += s.type_mass[i];
    }
    if (g.p(d_lo) <= c && c <= g.p(d_hi)) {
      const double d = std::clamp(g.p_inverse(c), d_lo, d_hi);
      build(c, s, d - d_lo);
      finish(result, g);
      return result;
    }
  }

  // Otherwise behavior is strict at the equilibrium: find the interval
  // between switch points whose fixed behavior brackets a fixed point.
  std::vector<double> edges{p_lo};
  for (double c : points) {
    if (c > edges.back()) edges.push_back(c);
  }
  if (p_hi > edges.back()) edges.push_back(p_hi);

  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k];
    const double b = edges[k + 1];
    // Reckless decisions are fixed on (a, b); masses still move with P(S).
    std::array<bool, 3> reckless{};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto premium = reckless_premium(g, kBayesTypes[i], 0.5 * (a + b));
      reckless[i] = active[i] && premium && *premium < 0.0;
    }
    auto decide = [&](double p) {
      BayesState s;
      s.p_signal = signal_probability(g.beta, p, g.t(), g.f());
      for (std::size_t i = 0; i < 3; ++i) {
        s.type_mass[i] = expected_type_mass(AgentModel::kBayesian, kBayesTypes[i], g.y, s.p_signal);
        if (reckless[i]) s.reckless[i] = s.type_mass[i];
      }
      return s;
    };
    auto map = [&](double p) { return g.p(strict_reckless(decide(p))); };
    const double gap_a = map(a) - a;
    const double gap_b = map(b) - b;
    if (gap_a >= -kFixedPointTolerance && gap_b <= kFixedPointTolerance) {
      const auto report = fixed_point_bisect(map, a, b);
      build(report.value, decide(report.value), 0.0);
      finish(result, g);
      return result;
    }
  }
  throw BracketError("Bayesian best-response gap has no root on [p(0), p(1)]");
}

}  // namespace v2v
