#include "v2v/model.hpp"

#include <cmath>
#include <string>

#include "v2v/errors.hpp"

namespace v2v {

namespace {

constexpr std::array<AgentType, 3> kBayesianTypes{
    AgentType::kNonV2V, AgentType::kV2VUnsignaled, AgentType::kV2VSignaled};
constexpr std::array<AgentType, 2> kNonBayesianTypes{AgentType::kNonV2V, AgentType::kV2V};

constexpr std::array<Strategy, 2> kTwoActions{Strategy::kCareful, Strategy::kReckless};
constexpr std::array<Strategy, 3> kWithTrust{Strategy::kCareful, Strategy::kTrust,
                                             Strategy::kReckless};

// Grid on which curve invariants are checked.
constexpr int kValidationPoints = 101;

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

std::string_view to_string(AgentModel model) {
  return model == AgentModel::kBayesian ? "bayesian" : "nonbayesian";
}

std::string_view to_string(AgentType type) {
  switch (type) {
    case AgentType::kNonV2V:
      return "n";
    case AgentType::kV2VUnsignaled:
      return "vu";
    case AgentType::kV2VSignaled:
      return "vs";
    case AgentType::kV2V:
      return "v";
  }
  return "?";
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kCareful:
      return "C";
    case Strategy::kReckless:
      return "R";
    case Strategy::kTrust:
      return "T";
  }
  return "?";
}

AgentModel parse_agent_model(std::string_view name) {
  if (name == "bayesian" || name == "B") return AgentModel::kBayesian;
  if (name == "nonbayesian" || name == "non-bayesian" || name == "I") {
    return AgentModel::kNonBayesian;
  }
  throw ValidationError("unknown agent model '" + std::string(name) + "'");
}

std::span<const AgentType> agent_types(AgentModel model) {
  if (model == AgentModel::kBayesian) return kBayesianTypes;
  return kNonBayesianTypes;
}

std::span<const Strategy> strategies_for(AgentModel model, AgentType type) {
  if (model == AgentModel::kNonBayesian && type == AgentType::kV2V) return kWithTrust;
  return kTwoActions;
}

bool is_legal(AgentModel model, AgentType type, Strategy strategy) {
  bool type_ok = false;
  for (AgentType t : agent_types(model)) type_ok = type_ok || t == type;
  if (!type_ok) return false;
  for (Strategy s : strategies_for(model, type)) {
    if (s == strategy) return true;
  }
  return false;
}

const GameInstance& validate_instance(const GameInstance& g) {
  if (!in_unit(g.beta)) throw RangeError("beta must lie in [0, 1]");
  if (!in_unit(g.y)) throw RangeError("y must lie in [0, 1]");
  if (!(g.r > 1.0) || !std::isfinite(g.r)) throw RangeError("r must be finite and > 1");

  const Curve& t = g.curves.t_curve;
  const Curve& f = g.curves.f_curve;
  const Curve& p = g.curves.p_curve;
  for (int i = 0; i <= kValidationPoints; ++i) {
    // The last sample is the instance's own penetration level.
    const double x = i < kValidationPoints ? static_cast<double>(i) / (kValidationPoints - 1) : g.y;
    const double tv = t(x);
    const double fv = f(x);
    if (!in_unit(tv) || !in_unit(fv)) throw CurveError("t and f must map into [0, 1]");
    if (!(fv < tv)) throw CurveError("false-positive curve must stay below true-positive curve");
    if (!in_unit(p(x))) throw CurveError("p must map into [0, 1]");
  }
  if (!p.strictly_increasing()) throw CurveError("p must be strictly increasing");
  if (g.t() == 0.0 && g.f() == 0.0) throw DegenerateError("t = f = 0 carries no signal");

  if (g.exo_p) {
    const double v = *g.exo_p;
    if (!(v >= p(0.0) && v <= p(1.0))) {
      throw ExoRangeError("exogenous accident probability must lie in [p(0), p(1)]");
    }
  }
  return g;
}

Thresholds compute_thresholds(double beta, double r, double t_val, double f_val) {
  if (t_val == 0.0 && f_val == 0.0) throw DegenerateError("P_vs is 0/0 when t = f = 0");
  if (!in_unit(beta) || !(r > 1.0) || !in_unit(t_val) || !in_unit(f_val) || !(f_val < t_val)) {
    throw RangeError("threshold arguments out of range");
  }
  Thresholds th;
  th.p_n = 1.0 / (1.0 + r);
  th.p_vs = f_val / (r * t_val + f_val);
  // p_vu = (1 - b f) / (1 + r (1 - b t) - b f), written as p_n plus a
  // non-negative gap so that p_n <= p_vu survives rounding.
  const double denom = 1.0 + r * (1.0 - beta * t_val) - beta * f_val;
  th.p_vu = th.p_n + r * beta * (t_val - f_val) / ((1.0 + r) * denom);
  return th;
}

Thresholds compute_thresholds(const GameInstance& g) {
  return compute_thresholds(g.beta, g.r, g.t(), g.f());
}

double signal_probability(double beta, double p_accident, double t_val, double f_val) {
  return beta * (p_accident * t_val + (1.0 - p_accident) * f_val);
}

double SignalStats::given_signal() const {
  if (!p_accident_given_signal) throw ConditioningError("P(A|S) undefined: P(S) = 0");
  return *p_accident_given_signal;
}

double SignalStats::given_nosignal() const {
  if (!p_accident_given_nosignal) throw ConditioningError("P(A|not S) undefined: P(S) = 1");
  return *p_accident_given_nosignal;
}

SignalStats posteriors(double beta, double p_accident, double t_val, double f_val) {
  SignalStats s;
  s.p_accident = p_accident;
  s.p_signal = signal_probability(beta, p_accident, t_val, f_val);
  const double broadcast = p_accident * t_val + (1.0 - p_accident) * f_val;
  if (s.p_signal > 0.0) {
    // beta cancels between numerator and denominator
    s.p_accident_given_signal = p_accident * t_val / broadcast;
  }
  if (s.p_signal < 1.0) {
    s.p_accident_given_nosignal = p_accident * (1.0 - beta * t_val) / (1.0 - s.p_signal);
  }
  return s;
}

Side compare(double value, double threshold, double tolerance) {
  if (std::abs(value - threshold) <= tolerance) return Side::kAt;
  return value < threshold ? Side::kBelow : Side::kAbove;
}

}  // namespace v2v
