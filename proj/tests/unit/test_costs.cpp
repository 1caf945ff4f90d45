#include <random>

#include "doctest.h"
#include "v2v/costs.hpp"
#include "v2v/errors.hpp"

using namespace v2v;

namespace {
constexpr double kEps = 1e-12;
}

TEST_CASE("bayesian costs: worked table") {
  // Posteriors 0.625 / 0.15625 at P = 0.25, t = 0.5, f = 0.1, beta = 1, r = 3.
  const CostTable table = bayesian_costs(posteriors(1.0, 0.25, 0.5, 0.1), 3.0);
  using enum AgentType;
  using enum Strategy;
  CHECK(table.at(kNonV2V, kCareful) == doctest::Approx(0.75).epsilon(kEps));
  CHECK(table.at(kNonV2V, kReckless) == doctest::Approx(0.75).epsilon(kEps));
  CHECK(table.at(kV2VSignaled, kCareful) == doctest::Approx(0.375).epsilon(kEps));
  CHECK(table.at(kV2VSignaled, kReckless) == doctest::Approx(1.875).epsilon(kEps));
  CHECK(table.at(kV2VUnsignaled, kCareful) == doctest::Approx(0.84375).epsilon(kEps));
  CHECK(table.at(kV2VUnsignaled, kReckless) == doctest::Approx(0.46875).epsilon(kEps));
  CHECK_THROWS_AS(table.at(kV2VSignaled, kTrust), IllegalStrategyError);
}

TEST_CASE("bayesian costs: edge cases") {
  using enum AgentType;
  using enum Strategy;
  const CostTable safe = bayesian_costs(posteriors(1.0, 0.0, 0.5, 0.1), 3.0);
  CHECK(safe.at(kNonV2V, kReckless) == 0.0);
  CHECK(safe.at(kNonV2V, kCareful) == 1.0);

  const CostTable indifferent = bayesian_costs(posteriors(1.0, 0.25, 0.5, 0.1), 3.0);
  CHECK(indifferent.at(kNonV2V, kCareful) == doctest::Approx(indifferent.at(kNonV2V, kReckless)));

  // No signals are ever displayed: the signaled entries are undefined.
  const CostTable blind = bayesian_costs(posteriors(0.0, 0.3, 0.5, 0.1), 3.0);
  CHECK_FALSE(blind.get(kV2VSignaled, kCareful).has_value());
  CHECK_THROWS_AS(blind.at(kV2VSignaled, kCareful), ConditioningError);
  CHECK(blind.at(kV2VUnsignaled, kReckless) == doctest::Approx(0.9));
}

TEST_CASE("non-bayesian costs") {
  using enum AgentType;
  using enum Strategy;
  const double p = 0.28 / 1.08;
  const CostTable table = nonbayesian_costs(posteriors(1.0, p, 0.5, 0.1), 3.0, 1.0, 0.5, 0.1);
  // (1 - P) 0.1 + 3 P 0.5
  CHECK(table.at(kV2V, kTrust) == doctest::Approx(0.462962962962963).epsilon(1e-12));
  CHECK(table.at(kV2V, kCareful) == table.at(kNonV2V, kCareful));
  CHECK(table.at(kV2V, kReckless) == table.at(kNonV2V, kReckless));

  const CostTable perfect = nonbayesian_costs(posteriors(1.0, 0.4, 1.0, 0.0), 3.0, 1.0, 1.0, 0.0);
  CHECK(perfect.at(kV2V, kTrust) == 0.0);

  const CostTable blind = nonbayesian_costs(posteriors(0.0, 0.4, 0.7, 0.2), 3.0, 0.0, 0.7, 0.2);
  CHECK(blind.at(kV2V, kTrust) == doctest::Approx(1.2));
  CHECK(blind.at(kV2V, kTrust) == blind.at(kV2V, kReckless));
}

TEST_CASE("recklessness weight") {
  using enum AgentType;
  using enum Strategy;
  CHECK(recklessness_weight(AgentModel::kNonBayesian, kV2V, kTrust, 0.2) == doctest::Approx(0.8));
  CHECK(recklessness_weight(AgentModel::kBayesian, kV2VSignaled, kCareful, 0.2) == 0.0);
  CHECK(recklessness_weight(AgentModel::kNonBayesian, kNonV2V, kReckless, 0.7) == 1.0);
  CHECK_THROWS_AS(recklessness_weight(AgentModel::kBayesian, kV2VUnsignaled, kTrust, 0.2),
                  IllegalStrategyError);
}

TEST_CASE("cost properties on random inputs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto sign = [](double v) { return std::abs(v) <= 1e-12 ? 0 : (v < 0 ? -1 : 1); };
  using enum AgentType;
  using enum Strategy;
  for (int i = 0; i < 20000; ++i) {
    const double beta = 1e-3 + (1.0 - 1e-3) * u(rng);
    const double r = 1.0 + 9.0 * u(rng) + 1e-9;
    const double t = 0.01 + 0.99 * u(rng);
    const double f = t * 0.999 * u(rng);
    const double p = u(rng);
    const SignalStats s = posteriors(beta, p, t, f);
    const CostTable plain = nonbayesian_costs(s, r, beta, t, f);
    const Thresholds th = compute_thresholds(beta, r, t, f);
    const double jt = plain.at(kV2V, kTrust);

    // Trust vs careful switches at p_vu, reckless vs trust at p_vs.
    CHECK(sign(jt - plain.at(kV2V, kCareful)) == sign(p - th.p_vu));
    CHECK(sign(plain.at(kV2V, kReckless) - jt) == sign(p - th.p_vs));

    // Trusting = careful when signaled, reckless otherwise.
    if (s.p_accident_given_signal && s.p_accident_given_nosignal) {
      const double decomposed = s.p_signal * (1.0 - s.given_signal()) +
                                (1.0 - s.p_signal) * r * s.given_nosignal();
      CHECK(std::abs(decomposed - jt) <= 1e-12);
    }

    const CostTable bayes = bayesian_costs(s, r);
    for (AgentType type : {kNonV2V, kV2VUnsignaled, kV2VSignaled}) {
      for (Strategy st : {kCareful, kReckless}) {
        if (const auto c = bayes.get(type, st)) {
          CHECK(*c >= 0.0);
          CHECK(*c <= std::max(1.0, r) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("non-bayesian costs are affine in P") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  using enum AgentType;
  using enum Strategy;
  for (int i = 0; i < 2000; ++i) {
    const double beta = u(rng);
    const double r = 1.0 + 9.0 * u(rng) + 1e-9;
    const double t = 0.01 + 0.99 * u(rng);
    const double f = t * 0.999 * u(rng);
    const double p0 = u(rng);
    const double p2 = u(rng);
    const double p1 = 0.5 * (p0 + p2);
    auto cost = [&](double p, AgentType type, Strategy st) {
      return nonbayesian_costs(posteriors(beta, p, t, f), r, beta, t, f).at(type, st);
    };
    for (auto [type, st] : {std::pair{kNonV2V, kCareful}, {kNonV2V, kReckless}, {kV2V, kTrust},
                            {kV2V, kCareful}, {kV2V, kReckless}}) {
      const double mid = cost(p1, type, st);
      CHECK(std::abs(mid - 0.5 * (cost(p0, type, st) + cost(p2, type, st))) <= 1e-12);
    }
  }
}
