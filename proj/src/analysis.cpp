#include "v2v/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "v2v/errors.hpp"
#include "v2v/parallel.hpp"

namespace v2v {

std::string_view to_string(ProbabilityMode mode) {
  return mode == ProbabilityMode::kExogenous ? "exogenous" : "endogenous";
}

ProbabilityMode parse_probability_mode(std::string_view name) {
  if (name == "exogenous" || name == "exo") return ProbabilityMode::kExogenous;
  if (name == "endogenous" || name == "endo") return ProbabilityMode::kEndogenous;
  throw ValidationError("unknown probability mode '" + std::string(name) + "'");
}

EquilibriumResult solve(const GameInstance& g, AgentModel model) {
  return g.exogenous() ? solve_exogenous(g, model) : solve_endogenous(g, model);
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<const SweepRow*> SweepResult::series(ProbabilityMode mode, AgentModel model) const {
  std::vector<const SweepRow*> out;
  for (const SweepRow& row : rows) {
    if (row.mode == mode && row.model == model) out.push_back(&row);
  }
  return out;
}

std::vector<double> SweepResult::cost_differences(ProbabilityMode mode, AgentModel model) const {
  const auto s = series(mode, model);
  std::vector<double> out;
  for (std::size_t i = 1; i < s.size(); ++i) {
    out.push_back(s[i]->result.social_cost - s[i - 1]->result.social_cost);
  }
  return out;
}

std::vector<double> SweepResult::probability_differences(ProbabilityMode mode,
                                                         AgentModel model) const {
  const auto s = series(mode, model);
  std::vector<double> out;
  for (std::size_t i = 1; i < s.size(); ++i) {
    out.push_back(s[i]->result.p_accident - s[i - 1]->result.p_accident);
  }
  return out;
}

std::vector<double> normalize_grid(std::vector<double> grid) {
  for (double b : grid) {
    if (!(b >= 0.0 && b <= 1.0)) throw RangeError("beta grid values must lie in [0, 1]");
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace {

std::string beta_note(double beta) {
  std::ostringstream os;
  os.precision(17);
  os << " (at beta = " << beta << ")";
  return os.str();
}

EquilibriumResult solve_annotated(const GameInstance& g, AgentModel model) {
  try {
    return solve(g, model);
  } catch (const ValidationError& e) {
    throw ValidationError(e.what() + beta_note(g.beta));
  } catch (const SolverError& e) {
    throw SolverError(e.what() + beta_note(g.beta));
  } catch (const Error& e) {
    throw Error(e.what() + beta_note(g.beta));
  }
}

GameInstance for_mode(const GameInstance& g, ProbabilityMode mode) {
  GameInstance out = g;
  if (mode == ProbabilityMode::kEndogenous) {
    out.exo_p.reset();
  } else if (!out.exo_p) {
    throw ModeError("exogenous sweep needs an exogenous accident probability");
  }
  return out;
}

}  // namespace

SweepResult sweep_beta(const GameInstance& instance, std::vector<double> grid,
                       std::span<const AgentModel> models,
                       std::span<const ProbabilityMode> modes) {
  SweepResult sweep;
  sweep.instance = instance;
  sweep.grid = normalize_grid(std::move(grid));
  for (ProbabilityMode mode : modes) {
    for_mode(instance, mode);  // rejects an exogenous sweep without exo_p
    for (AgentModel model : models) {
      for (double beta : sweep.grid) {
        SweepRow row;
        row.beta = beta;
        row.model = model;
        row.mode = mode;
        row.result.profile = BehaviorProfile(model);
        sweep.rows.push_back(row);
      }
    }
  }
  parallel_for(sweep.rows.size(), [&](std::size_t i) {
    SweepRow& row = sweep.rows[i];
    row.result = solve_annotated(for_mode(instance, row.mode).with_beta(row.beta), row.model);
  });
  return sweep;
}

MonotonicityReport certify_monotonicity(const SweepResult& sweep) {
  MonotonicityReport report;
  for (const SweepRow& row : sweep.rows) {
    if (row.mode != ProbabilityMode::kExogenous) {
      throw ModeError("monotonicity is certified for exogenous sweeps only");
    }
  }
  for (AgentModel model : {AgentModel::kBayesian, AgentModel::kNonBayesian}) {
    const auto s = sweep.series(ProbabilityMode::kExogenous, model);
    for (std::size_t i = 1; i < s.size(); ++i) {
      const double rise = s[i]->result.social_cost - s[i - 1]->result.social_cost;
      if (rise > report.worst_violation) {
        report.worst_violation = rise;
        report.beta_at = s[i - 1]->beta;
        report.model = model;
      }
    }
  }
  report.pass = report.worst_violation <= kMonotonicityTolerance;
  return report;
}

// ---------------------------------------------------------------------------
// Paradox search

ParadoxSearchSpace default_paradox_space() {
  ParadoxSearchSpace space;
  for (int k = 1; k <= 9; ++k) space.ys.push_back(0.1 * k);
  space.rs = {1.5, 2, 3, 4, 5, 6, 7, 8};
  for (int k = 0; k <= 6; ++k) space.p_intercepts.push_back(0.05 * k);
  for (int k = 1; k <= 9; ++k) space.p_slopes.push_back(0.1 * k);
  for (int k = 0; k <= 50; ++k) space.betas.push_back(k / 50.0);
  return space;
}

bool verify_certificate(const ParadoxCertificate& c) {
  GameInstance g = c.instance;
  g.exo_p.reset();
  std::array<double, 2> first{};
  std::array<double, 2> second{};
  std::size_t k = 0;
  for (AgentModel model : {AgentModel::kBayesian, AgentModel::kNonBayesian}) {
    first[k] = solve_endogenous(g.with_beta(c.beta1), model).social_cost;
    second[k] = solve_endogenous(g.with_beta(c.beta2), model).social_cost;
    if (!(second[k] - first[k] > kParadoxMargin)) return false;
    ++k;
  }
  return std::abs(first[0] - first[1]) <= kEquivalenceTolerance &&
         std::abs(second[0] - second[1]) <= kEquivalenceTolerance;
}

std::vector<ParadoxCertificate> search_paradox(const ParadoxSearchSpace& space) {
  if (space.mode == ProbabilityMode::kExogenous) {
    throw ModeError("the social-cost paradox cannot occur with exogenous accident probability");
  }
  const std::vector<double> betas = normalize_grid(space.betas);
  std::vector<GameInstance> templates;
  for (double y : space.ys) {
    for (double r : space.rs) {
      for (double a : space.p_intercepts) {
        for (double b : space.p_slopes) {
          if (a < 0.0 || b <= 0.0 || a + b > 1.0) continue;
          GameInstance g;
          g.y = y;
          g.r = r;
          g.curves = ModelCurves{space.t_curve, space.f_curve, Curve::affine(a, b)};
          templates.push_back(g);
        }
      }
    }
  }

  std::vector<std::optional<ParadoxCertificate>> found(templates.size());
  parallel_for(templates.size(), [&](std::size_t i) {
    const GameInstance& g = templates[i];
    std::vector<EquilibriumResult> results;
    results.reserve(betas.size());
    for (double beta : betas) {
      results.push_back(solve_endogenous(g.with_beta(beta), AgentModel::kNonBayesian));
    }
    std::optional<ParadoxCertificate> best;
    for (std::size_t k = 1; k < results.size(); ++k) {
      const double margin = results[k].social_cost - results[k - 1].social_cost;
      if (margin > kParadoxMargin && (!best || margin > best->margin)) {
        ParadoxCertificate c;
        c.instance = g;
        c.beta1 = betas[k - 1];
        c.beta2 = betas[k];
        c.cost1 = results[k - 1].social_cost;
        c.cost2 = results[k].social_cost;
        c.margin = margin;
        c.family1 = *results[k - 1].family;
        c.family2 = *results[k].family;
        best = c;
      }
    }
    if (best && verify_certificate(*best)) found[i] = best;
  });

  std::vector<ParadoxCertificate> out;
  for (auto& c : found) {
    if (c) out.push_back(*c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equivalence

EquivalenceReport certify_equivalence(std::span<const GameInstance> instances) {
  EquivalenceReport report;
  report.count = instances.size();
  std::vector<std::array<double, 2>> gaps(instances.size());
  parallel_for(instances.size(), [&](std::size_t i) {
    const GameInstance& g = instances[i];
    const EquilibriumResult bayes = solve(g, AgentModel::kBayesian);
    const EquilibriumResult plain = solve(g, AgentModel::kNonBayesian);
    gaps[i][0] = std::abs(bayes.social_cost - plain.social_cost);
    gaps[i][1] = g.exogenous() ? 0.0 : std::abs(bayes.p_accident - plain.p_accident);
  });
  double worst = -1.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    report.max_cost_gap = std::max(report.max_cost_gap, gaps[i][0]);
    report.max_probability_gap = std::max(report.max_probability_gap, gaps[i][1]);
    const double w = std::max(gaps[i][0], gaps[i][1]);
    if (w > worst) {
      worst = w;
      report.worst_index = i;
    }
  }
  report.pass = report.max_cost_gap <= kEquivalenceTolerance &&
                report.max_probability_gap <= kEquivalenceTolerance;
  return report;
}

// ---------------------------------------------------------------------------
// Random instances

GameInstance random_instance(std::mt19937_64& rng, ProbabilityMode mode) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GameInstance g;
  g.beta = unit(rng);
  g.y = unit(rng);
  // log-uniform on (1, 10]
  g.r = std::exp(std::log(10.0) * (1.0 - unit(rng)));
  if (!(g.r > 1.0)) g.r = 10.0;

  // t and f interpolate linearly between endpoint values with f < t at both
  // ends, hence everywhere.
  const double t0 = 0.05 + 0.95 * unit(rng);
  const double t1 = 0.05 + 0.95 * unit(rng);
  const double f0 = t0 * 0.999 * unit(rng);
  const double f1 = t1 * 0.999 * unit(rng);
  const double p0 = 0.6 * unit(rng) * unit(rng);
  const double p1 = p0 + (1.0 - p0) * std::max(unit(rng), 1e-3);
  g.curves = ModelCurves{Curve::affine(t0, t1 - t0), Curve::affine(f0, f1 - f0),
                         Curve::affine(p0, p1 - p0)};
  if (mode == ProbabilityMode::kExogenous) {
    g.exo_p = p0 + (p1 - p0) * unit(rng);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Essential uniqueness

namespace {

constexpr double kTieCost = 1e-9;

struct FreeType {
  AgentType type;
  double mass;
  std::vector<Strategy> tied;  // sorted by recklessness weight
  std::vector<double> weight;
  double level;                // recklessness-weighted mass in the base profile
};

// Splits of `mass` over pairs of tied strategies whose weights bracket level/mass.
std::vector<std::vector<std::pair<Strategy, double>>> splits(const FreeType& ft, double level) {
  std::vector<std::vector<std::pair<Strategy, double>>> out;
  const double share = ft.mass > 0.0 ? level / ft.mass : 0.0;
  for (std::size_t a = 0; a < ft.tied.size(); ++a) {
    for (std::size_t b = a; b < ft.tied.size(); ++b) {
      const double wa = ft.weight[a];
      const double wb = ft.weight[b];
      if (a == b) {
        if (std::abs(wa - share) <= 1e-15) out.push_back({{ft.tied[a], ft.mass}});
        continue;
      }
      if (share < wa - 1e-15 || share > wb + 1e-15) continue;
      if (wb - wa <= 1e-15) continue;
      const double on_b = std::clamp(ft.mass * (share - wa) / (wb - wa), 0.0, ft.mass);
      out.push_back({{ft.tied[a], ft.mass - on_b}, {ft.tied[b], on_b}});
    }
  }
  return out;
}

}  // namespace

std::vector<BehaviorProfile> indifference_extremes(const GameInstance& g,
                                                   const EquilibriumResult& result) {
  const AgentModel model = result.model;
  const CostTable table = cost_table(g, model, result.p_accident);
  const double ps = result.p_signal;
  std::vector<BehaviorProfile> out{result.profile};

  std::vector<FreeType> free;
  for (AgentType type : agent_types(model)) {
    const double mass = result.profile.type_total(type);
    const auto best = table.min_cost(type);
    if (mass <= 0.0 || !best) continue;
    FreeType ft{type, mass, {}, {}, 0.0};
    for (Strategy s : strategies_for(model, type)) {
      const auto c = table.get(type, s);
      if (c && *c <= *best + kTieCost) ft.tied.push_back(s);
    }
    if (ft.tied.size() < 2) continue;
    std::sort(ft.tied.begin(), ft.tied.end(), [&](Strategy a, Strategy b) {
      return recklessness_weight(model, type, a, ps) < recklessness_weight(model, type, b, ps);
    });
    for (Strategy s : ft.tied) {
      ft.weight.push_back(recklessness_weight(model, type, s, ps));
      ft.level += ft.weight.back() * result.profile.mass(type, s);
    }
    free.push_back(std::move(ft));
  }
  if (free.empty()) return out;

  // Candidate reckless levels per free type.
  std::vector<std::vector<double>> allocations;
  if (result.exogenous) {
    // Any split is an equilibrium: take each type to its extremes.
    std::vector<double> lo;
    std::vector<double> hi;
    for (const FreeType& ft : free) {
      lo.push_back(ft.mass * ft.weight.front());
      hi.push_back(ft.mass * ft.weight.back());
    }
    allocations = {lo, hi};
  } else {
    // Keep the total reckless mass, move it between types.
    double total = 0.0;
    double floor = 0.0;
    for (const FreeType& ft : free) {
      total += ft.level;
      floor += ft.mass * ft.weight.front();
    }
    for (bool forward : {true, false}) {
      std::vector<double> levels(free.size());
      double need = total - floor;
      for (std::size_t k = 0; k < free.size(); ++k) {
        const std::size_t i = forward ? k : free.size() - 1 - k;
        const double lo = free[i].mass * free[i].weight.front();
        const double hi = free[i].mass * free[i].weight.back();
        const double add = std::clamp(need, 0.0, hi - lo);
        levels[i] = lo + add;
        need -= add;
      }
      allocations.push_back(levels);
    }
  }

  for (const auto& levels : allocations) {
    std::vector<std::vector<std::vector<std::pair<Strategy, double>>>> options;
    std::size_t variants = 1;
    for (std::size_t i = 0; i < free.size(); ++i) {
      options.push_back(splits(free[i], levels[i]));
      if (options.back().empty()) options.back().push_back({{free[i].tied.front(), free[i].mass}});
      variants = std::max(variants, options.back().size());
    }
    for (std::size_t v = 0; v < variants; ++v) {
      BehaviorProfile p = result.profile;
      for (std::size_t i = 0; i < free.size(); ++i) {
        for (Strategy s : strategies_for(model, free[i].type)) p.set(free[i].type, s, 0.0);
        const auto& split = options[i][v % options[i].size()];
        for (const auto& [s, m] : split) p.set(free[i].type, s, p.mass(free[i].type, s) + m);
      }
      out.push_back(p);
    }
  }
  return out;
}

BehaviorProfile blend(std::span<const BehaviorProfile> profiles, std::span<const double> weights) {
  if (profiles.empty() || profiles.size() != weights.size()) {
    throw ValidationError("blend needs one weight per profile");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw ValidationError("blend weights must have a positive sum");
  const AgentModel model = profiles.front().model();
  BehaviorProfile out(model);
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    if (profiles[k].model() != model) throw ModelMismatchError("blend across agent models");
    for (AgentType type : agent_types(model)) {
      for (Strategy s : strategies_for(model, type)) {
        out.set(type, s, out.mass(type, s) + weights[k] / total * profiles[k].mass(type, s));
      }
    }
  }
  return out;
}

Reaggregation reaggregate(const GameInstance& g, const BehaviorProfile& profile,
                          double p_reference) {
  Reaggregation out;
  if (g.exo_p) {
    out.p_accident = *g.exo_p;
  } else {
    const double ps = signal_probability(g.beta, p_reference, g.t(), g.f());
    out.p_accident = g.p(profile.reckless_mass(ps));
  }
  const CostTable table = cost_table(g, profile.model(), out.p_accident);
  out.social_cost = social_cost(profile, table);
  out.nash = check_nash(profile, table).ok;
  return out;
}

}  // namespace v2v
