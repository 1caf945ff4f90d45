#pragma once

// Core vocabulary of the road-hazard signaling game.
//
// A unit mass of drivers shares one road. An accident is present with
// probability P(A). A fraction y of cars carry V2V equipment, which
// broadcasts a warning with probability t(y) when an accident exists and
// f(y) < t(y) otherwise. A broadcast is displayed to V2V drivers with
// probability beta (the information quality). Careful drivers pay 1 when
// there is no accident; reckless drivers pay r > 1 when there is one.
//
// P(A) is either an exogenous constant or endogenous: P(A) = p(d) where d is
// the reckless mass of the population and p is strictly increasing.

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "v2v/curves.hpp"

namespace v2v {

// Absolute tolerance for comparing an accident probability to a threshold.
inline constexpr double kTieTolerance = 1e-9;

enum class AgentModel { kBayesian, kNonBayesian };

// Bayesian types are {NonV2V, V2VUnsignaled, V2VSignaled}; non-Bayesian
// types are {NonV2V, V2V}.
enum class AgentType { kNonV2V = 0, kV2VUnsignaled = 1, kV2VSignaled = 2, kV2V = 3 };
enum class Strategy { kCareful = 0, kReckless = 1, kTrust = 2 };

inline constexpr std::size_t kNumTypes = 4;
inline constexpr std::size_t kNumStrategies = 3;

std::string_view to_string(AgentModel model);
std::string_view to_string(AgentType type);
std::string_view to_string(Strategy strategy);
AgentModel parse_agent_model(std::string_view name);

// The agent types of a model, in a fixed order.
std::span<const AgentType> agent_types(AgentModel model);
// Legal strategies of a type under a model, most careful first.
std::span<const Strategy> strategies_for(AgentModel model, AgentType type);
bool is_legal(AgentModel model, AgentType type, Strategy strategy);

struct GameInstance {
  double beta = 0.0;  // information quality
  double y = 0.0;     // V2V penetration
  double r = 2.0;     // reckless accident cost
  std::optional<double> exo_p;  // present iff the accident probability is exogenous
  ModelCurves curves{Curve::constant(0.5), Curve::constant(0.1), Curve::affine(0.1, 0.5)};

  bool exogenous() const { return exo_p.has_value(); }
  double t() const { return curves.t_curve(y); }
  double f() const { return curves.f_curve(y); }
  double p(double reckless_mass) const { return curves.p_curve(reckless_mass); }
  double p_inverse(double probability) const { return curves.p_curve.inverse(probability); }

  GameInstance with_beta(double b) const {
    GameInstance g = *this;
    g.beta = b;
    return g;
  }
};

// Throws RangeError, CurveError, ExoRangeError or DegenerateError.
const GameInstance& validate_instance(const GameInstance& g);

struct Thresholds {
  double p_vs = 0.0;  // signaled V2V switch point
  double p_n = 0.0;   // non-V2V switch point
  double p_vu = 0.0;  // unsignaled V2V switch point
};

// Throws DegenerateError when t = f = 0.
Thresholds compute_thresholds(double beta, double r, double t_val, double f_val);
Thresholds compute_thresholds(const GameInstance& g);

// P(S) = beta (P t + (1 - P) f).
double signal_probability(double beta, double p_accident, double t_val, double f_val);

struct SignalStats {
  double p_accident = 0.0;
  double p_signal = 0.0;
  // Empty when the conditioning event has probability zero.
  std::optional<double> p_accident_given_signal;
  std::optional<double> p_accident_given_nosignal;

  double given_signal() const;    // throws ConditioningError if undefined
  double given_nosignal() const;  // throws ConditioningError if undefined
};

SignalStats posteriors(double beta, double p_accident, double t_val, double f_val);

enum class Side { kBelow, kAt, kAbove };

// Three-way comparison of value against a threshold with kTieTolerance.
Side compare(double value, double threshold, double tolerance = kTieTolerance);

}  // namespace v2v
