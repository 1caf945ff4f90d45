#include "v2v/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "v2v/errors.hpp"
#include "v2v/parallel.hpp"

namespace v2v {

namespace {

constexpr std::size_t kChunks = 16;

// Running sums for one cost stream.
struct Moments {
  std::uint64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  void merge(const Moments& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
};

// Streams: prior careful, prior reckless, trust, and careful / reckless on
// signaled and on unsignaled samples.
enum Stream {
  kPriorCareful,
  kPriorReckless,
  kTrustCost,
  kSigCareful,
  kSigReckless,
  kNoSigCareful,
  kNoSigReckless,
  kStreams
};

using Accumulator = std::array<Moments, kStreams>;

Accumulator sample_chunk(double p, double t, double f, double beta, double r, std::uint64_t count,
                         std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Accumulator acc{};
  for (std::uint64_t i = 0; i < count; ++i) {
    const bool accident = unit(rng) < p;
    const bool broadcast = unit(rng) < (accident ? t : f);
    const bool shown = broadcast && unit(rng) < beta;
    const double careful = accident ? 0.0 : 1.0;
    const double reckless = accident ? r : 0.0;
    acc[kPriorCareful].add(careful);
    acc[kPriorReckless].add(reckless);
    acc[kTrustCost].add(shown ? careful : reckless);
    if (shown) {
      acc[kSigCareful].add(careful);
      acc[kSigReckless].add(reckless);
    } else {
      acc[kNoSigCareful].add(careful);
      acc[kNoSigReckless].add(reckless);
    }
  }
  return acc;
}

std::string label(const StrategyEstimate& e) {
  return std::string(to_string(e.model)) + ":" + std::string(to_string(e.type)) + "/" +
         std::string(to_string(e.strategy));
}

}  // namespace

MonteCarloReport monte_carlo_estimate(const GameInstance& g, double p_accident,
                                      std::uint64_t sample_count, std::uint64_t seed) {
  validate_instance(g);
  if (sample_count < kMinMonteCarloSamples) {
    throw ValidationError("Monte Carlo validation needs at least 10^4 samples");
  }
  if (!(p_accident >= 0.0 && p_accident <= 1.0)) throw RangeError("accident probability outside [0, 1]");
  const double t = g.t();
  const double f = g.f();

  std::array<Accumulator, kChunks> parts{};
  parallel_for(kChunks, [&](std::size_t c) {
    const std::uint64_t share = sample_count / kChunks + (c < sample_count % kChunks ? 1 : 0);
    parts[c] = sample_chunk(p_accident, t, f, g.beta, g.r, share, seed, c);
  });
  Accumulator total{};
  for (const Accumulator& part : parts) {
    for (std::size_t s = 0; s < kStreams; ++s) total[s].merge(part[s]);
  }

  MonteCarloReport report;
  report.samples = sample_count;
  const CostTable bayes = cost_table(g, AgentModel::kBayesian, p_accident);
  const CostTable plain = cost_table(g, AgentModel::kNonBayesian, p_accident);

  auto add = [&](const CostTable& table, AgentType type, Strategy strategy, Stream stream) {
    const Moments& m = total[stream];
    const auto analytic = table.get(type, strategy);
    if (m.n < 2 || !analytic) return;  // conditioning event never sampled or undefined
    StrategyEstimate e;
    e.model = table.model();
    e.type = type;
    e.strategy = strategy;
    e.analytic = *analytic;
    e.samples = m.n;
    const double n = static_cast<double>(m.n);
    e.empirical = m.sum / n;
    const double var = std::max(0.0, (m.sum_sq - m.sum * m.sum / n) / (n - 1.0));
    e.std_error = std::sqrt(var / n);
    const double diff = e.empirical - e.analytic;
    if (e.std_error > 0.0) {
      e.z = diff / e.std_error;
    } else {
      e.z = std::abs(diff) <= 1e-12 ? 0.0 : INFINITY;
    }
    report.pass = report.pass && std::abs(e.z) <= kMonteCarloZLimit;
    report.estimates.push_back(e);
  };

  using enum AgentType;
  using enum Strategy;
  add(plain, kNonV2V, kCareful, kPriorCareful);
  add(plain, kNonV2V, kReckless, kPriorReckless);
  add(plain, kV2V, kCareful, kPriorCareful);
  add(plain, kV2V, kReckless, kPriorReckless);
  add(plain, kV2V, kTrust, kTrustCost);
  add(bayes, kNonV2V, kCareful, kPriorCareful);
  add(bayes, kNonV2V, kReckless, kPriorReckless);
  add(bayes, kV2VSignaled, kCareful, kSigCareful);
  add(bayes, kV2VSignaled, kReckless, kSigReckless);
  add(bayes, kV2VUnsignaled, kCareful, kNoSigCareful);
  add(bayes, kV2VUnsignaled, kReckless, kNoSigReckless);
  return report;
}

MonteCarloReport monte_carlo_validate(const GameInstance& g, const EquilibriumResult& equilibrium,
                                      std::uint64_t sample_count, std::uint64_t seed) {
  MonteCarloReport report = monte_carlo_estimate(g, equilibrium.p_accident, sample_count, seed);
  if (!report.pass) {
    std::string failed;
    for (const StrategyEstimate& e : report.estimates) {
      if (std::abs(e.z) > kMonteCarloZLimit) {
        if (!failed.empty()) failed += ", ";
        failed += label(e) + " (z = " + std::to_string(e.z) + ")";
      }
    }
    throw StatisticalFailure("analytic costs outside 4 standard errors: " + failed);
  }
  return report;
}

}  // namespace v2v
