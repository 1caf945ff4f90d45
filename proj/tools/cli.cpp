#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "v2v/errors.hpp"
#include "v2v/montecarlo.hpp"

namespace v2v::cli {

using nlohmann::json;

namespace {

constexpr const char* kOutDirVariable = "V2V_OUT_DIR";

double parse_number(std::string_view text, std::string_view what) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ValidationError("bad number '" + s + "' for " + std::string(what));
  }
  return v;
}

std::vector<double> linspace(double start, double stop, long points) {
  if (points < 1) throw ValidationError("beta grid needs at least one point");
  if (points == 1) return {start};
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (long i = 0; i < points; ++i) {
    // Hit both ends exactly.
    if (i == points - 1) {
      out.push_back(stop);
    } else {
      out.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
  }
  return out;
}

void check_keys(const json& obj, std::string_view where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("unknown key '" + key + "' in " + std::string(where));
  }
}

double number_at(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(std::string(key) + " must be a number");
  return v.get<double>();
}

std::uint64_t count_at(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) throw ValidationError(std::string(key) + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> numbers_at(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_array()) throw ValidationError(std::string(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw ValidationError(std::string(key) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string string_at(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(std::string(key) + " must be a string");
  return v.get<std::string>();
}

Curve curve_from(const json& v, const char* key) {
  if (v.is_string()) return Curve::parse(v.get<std::string>());
  check_keys(v, key, {"family", "params"});
  return Curve(parse_curve_family(string_at(v, "family")), numbers_at(v, "params"));
}

std::vector<double> grid_from(const json& v) {
  if (v.is_string()) return parse_beta_grid(v.get<std::string>());
  if (v.is_object()) {
    check_keys(v, "beta_grid", {"start", "stop", "points"});
    return linspace(number_at(v, "start"), number_at(v, "stop"),
                    static_cast<long>(count_at(v, "points")));
  }
  json wrap{{"beta_grid", v}};
  return numbers_at(wrap, "beta_grid");
}

std::vector<AgentModel> parse_models(const std::vector<std::string>& names) {
  std::vector<AgentModel> out;
  for (const std::string& n : names) {
    const AgentModel m = parse_agent_model(n);
    bool seen = false;
    for (AgentModel o : out) seen = seen || o == m;
    if (!seen) out.push_back(m);
  }
  if (out.empty()) throw ValidationError("at least one agent model is required");
  return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return csv_field(v);
        }
      },
      cell);
}

std::string json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "null";
        } else if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? format_number(v) : "null";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return json(v).dump();
        }
      },
      cell);
}

// ---------------------------------------------------------------------------
// Commands

const std::vector<std::string> kSolutionColumns = {
    "beta", "y", "r", "mode", "model", "family", "p_accident", "p_signal", "social_cost",
    "residual", "flags"};

std::string tie_flags(const EquilibriumResult& res) {
  std::string out;
  for (AgentType t : res.indifferent) {
    if (!out.empty()) out += '|';
    out += "tie:" + std::string(to_string(t));
  }
  return out;
}

std::vector<Cell> solution_row(const GameInstance& g, const EquilibriumResult& res) {
  const ProbabilityMode mode = res.exogenous ? ProbabilityMode::kExogenous : ProbabilityMode::kEndogenous;
  return {g.beta,
          g.y,
          g.r,
          std::string(to_string(mode)),
          std::string(to_string(res.model)),
          res.family ? Cell(std::string(to_string(*res.family))) : Cell(std::string()),
          res.p_accident,
          res.p_signal,
          res.social_cost,
          res.residual,
          tie_flags(res)};
}

void require_instance(const ExperimentConfig& c, bool needs_beta) {
  if (!c.y) throw ValidationError("y is required");
  if (!c.r) throw ValidationError("r is required");
  if (!c.curve_t || !c.curve_f || !c.curve_p) {
    throw ValidationError("curves t, f and p are required");
  }
  if (needs_beta && !c.beta) throw ValidationError("beta is required");
}

CommandOutput run_solve(const ExperimentConfig& c) {
  require_instance(c, true);
  const GameInstance g = build_instance(c);
  validate_instance(g);
  CommandOutput out;
  out.table.columns = kSolutionColumns;
  for (AgentModel m : c.models) out.table.rows.push_back(solution_row(g, solve(g, m)));
  return out;
}

CommandOutput run_sweep(const ExperimentConfig& c) {
  require_instance(c, false);
  if (c.beta_grid.empty()) throw ValidationError("sweep needs a beta grid");
  const GameInstance g = build_instance(c);
  validate_instance(g);
  const ProbabilityMode mode = g.exogenous() ? ProbabilityMode::kExogenous : ProbabilityMode::kEndogenous;
  const ProbabilityMode modes[] = {mode};
  const SweepResult sweep = sweep_beta(g, c.beta_grid, c.models, modes);
  CommandOutput out;
  out.table.columns = kSolutionColumns;
  for (const SweepRow& row : sweep.rows) {
    out.table.rows.push_back(solution_row(g.with_beta(row.beta), row.result));
  }
  if (mode == ProbabilityMode::kExogenous) {
    const MonotonicityReport rep = certify_monotonicity(sweep);
    if (!rep.pass) {
      out.certified = false;
      out.note = "social cost rises by " + format_number(rep.worst_violation) + " after beta = " +
                 format_number(rep.beta_at) + " (" + std::string(to_string(rep.model)) + ")";
    }
  }
  return out;
}

CommandOutput run_classify(const ExperimentConfig& c) {
  require_instance(c, true);
  const GameInstance g = build_instance(c);
  validate_instance(g);
  if (g.exogenous()) throw ModeError("classify applies to endogenous instances; drop exo_p");
  const Thresholds th = compute_thresholds(g);
  CommandOutput out;
  out.table.columns = {"beta", "y", "r", "family", "p_vs", "p_n", "p_vu"};
  out.table.rows.push_back({g.beta, g.y, g.r, std::string(to_string(classify_family(g))), th.p_vs,
                            th.p_n, th.p_vu});
  return out;
}

CommandOutput run_paradox(const ExperimentConfig& c) {
  ParadoxSearchSpace space = default_paradox_space();
  const ParadoxOverrides& o = c.paradox;
  if (!o.ys.empty()) space.ys = o.ys;
  if (!o.rs.empty()) space.rs = o.rs;
  if (!o.p_intercepts.empty()) space.p_intercepts = o.p_intercepts;
  if (!o.p_slopes.empty()) space.p_slopes = o.p_slopes;
  if (o.beta_points) space.betas = linspace(0.0, 1.0, *o.beta_points);
  if (c.curve_t) space.t_curve = *c.curve_t;
  if (c.curve_f) space.f_curve = *c.curve_f;
  if (c.exo_p) space.mode = ProbabilityMode::kExogenous;  // rejected by the search

  const auto certs = search_paradox(space);
  CommandOutput out;
  out.table.columns = {"y",     "r",     "t_curve", "f_curve", "p_curve", "beta1",
                       "beta2", "cost1", "cost2",   "margin",  "family1", "family2"};
  for (const ParadoxCertificate& cert : certs) {
    const GameInstance& g = cert.instance;
    out.table.rows.push_back({g.y, g.r, g.curves.t_curve.to_spec(), g.curves.f_curve.to_spec(),
                              g.curves.p_curve.to_spec(), cert.beta1, cert.beta2, cert.cost1,
                              cert.cost2, cert.margin, std::string(to_string(cert.family1)),
                              std::string(to_string(cert.family2))});
  }
  if (certs.empty()) {
    out.certified = false;
    out.note = "no paradox certificate in the search space";
  }
  return out;
}

CommandOutput run_equivalence(const ExperimentConfig& c) {
  const std::uint64_t seed = c.seed.value_or(0);
  std::mt19937_64 rng(seed);
  std::vector<GameInstance> batch;
  batch.reserve(c.instances);
  for (std::size_t i = 0; i < c.instances; ++i) {
    batch.push_back(random_instance(
        rng, i % 2 ? ProbabilityMode::kExogenous : ProbabilityMode::kEndogenous));
  }
  const EquivalenceReport rep = certify_equivalence(batch);
  CommandOutput out;
  out.table.columns = {"count", "seed", "max_cost_gap", "max_probability_gap", "worst_index", "pass"};
  out.table.rows.push_back({static_cast<std::int64_t>(rep.count), static_cast<std::int64_t>(seed),
                            rep.max_cost_gap, rep.max_probability_gap,
                            static_cast<std::int64_t>(rep.worst_index), rep.pass});
  if (!rep.pass) {
    out.certified = false;
    out.note = "agent models disagree on instance " + std::to_string(rep.worst_index);
  }
  return out;
}

CommandOutput run_validate_mc(const ExperimentConfig& c) {
  require_instance(c, true);
  if (!c.seed) throw ValidationError("validate-mc needs a seed");
  const GameInstance g = build_instance(c);
  validate_instance(g);
  if (c.samples < kMinMonteCarloSamples) {
    throw ValidationError("validate-mc needs at least 10000 samples");
  }
  CommandOutput out;
  out.table.columns = {"beta",     "y",         "r",         "mode", "model",   "type",
                       "strategy", "p_accident", "analytic", "empirical", "std_error", "z",
                       "samples",  "pass"};
  const std::string mode(to_string(g.exogenous() ? ProbabilityMode::kExogenous
                                                 : ProbabilityMode::kEndogenous));
  for (AgentModel m : c.models) {
    const EquilibriumResult res = solve(g, m);
    const MonteCarloReport rep = monte_carlo_estimate(g, res.p_accident, c.samples, *c.seed);
    for (const StrategyEstimate& e : rep.estimates) {
      if (e.model != m) continue;
      const bool ok = std::abs(e.z) <= kMonteCarloZLimit;
      out.table.rows.push_back({g.beta, g.y, g.r, mode, std::string(to_string(m)),
                                std::string(to_string(e.type)), std::string(to_string(e.strategy)),
                                res.p_accident, e.analytic, e.empirical, e.std_error, e.z,
                                static_cast<std::int64_t>(e.samples), ok});
      if (!ok) {
        out.certified = false;
        if (!out.note.empty()) out.note += "; ";
        out.note += std::string(to_string(m)) + " " + std::string(to_string(e.type)) + "/" +
                    std::string(to_string(e.strategy)) + " z = " + format_number(e.z);
      }
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Command command) {
  switch (command) {
    case Command::kSolve:
      return "solve";
    case Command::kSweep:
      return "sweep";
    case Command::kClassify:
      return "classify";
    case Command::kParadoxSearch:
      return "paradox-search";
    case Command::kCertifyEquivalence:
      return "certify-equivalence";
    case Command::kValidateMc:
      return "validate-mc";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::kSolve, Command::kSweep, Command::kClassify, Command::kParadoxSearch,
                    Command::kCertifyEquivalence, Command::kValidateMc}) {
    if (to_string(c) == name) return c;
  }
  throw ValidationError("unknown command '" + std::string(name) + "'");
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json-lines" || name == "jsonl") return OutputFormat::kJsonLines;
  throw ValidationError("unknown output format '" + std::string(name) + "'");
}

std::string_view extension(OutputFormat format) {
  return format == OutputFormat::kCsv ? ".csv" : ".jsonl";
}

std::vector<double> parse_beta_grid(std::string_view text) {
  const auto colon = split(text, ':');
  if (colon.size() == 3) {
    const double points = parse_number(colon[2], "beta grid point count");
    if (points != std::floor(points)) throw ValidationError("beta grid point count must be an integer");
    return linspace(parse_number(colon[0], "beta grid start"), parse_number(colon[1], "beta grid stop"),
                    static_cast<long>(points));
  }
  if (colon.size() != 1) throw ValidationError("beta grid must be start:stop:points or a list");
  std::vector<double> out;
  for (const std::string& s : split(text, ',')) out.push_back(parse_number(s, "beta grid"));
  return out;
}

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, "config", {"command", "instance", "analysis", "output"});
  ExperimentConfig c;
  if (doc.contains("command")) c.command = parse_command(string_at(doc, "command"));

  if (doc.contains("instance")) {
    const json& in = doc.at("instance");
    check_keys(in, "instance", {"beta", "beta_grid", "y", "r", "exo_p", "curves"});
    if (in.contains("beta")) c.beta = number_at(in, "beta");
    if (in.contains("beta_grid")) c.beta_grid = grid_from(in.at("beta_grid"));
    if (in.contains("y")) c.y = number_at(in, "y");
    if (in.contains("r")) c.r = number_at(in, "r");
    if (in.contains("exo_p") && !in.at("exo_p").is_null()) c.exo_p = number_at(in, "exo_p");
    if (in.contains("curves")) {
      const json& cv = in.at("curves");
      check_keys(cv, "curves", {"t", "f", "p"});
      if (cv.contains("t")) c.curve_t = curve_from(cv.at("t"), "t");
      if (cv.contains("f")) c.curve_f = curve_from(cv.at("f"), "f");
      if (cv.contains("p")) c.curve_p = curve_from(cv.at("p"), "p");
    }
  }

  if (doc.contains("analysis")) {
    const json& an = doc.at("analysis");
    check_keys(an, "analysis", {"models", "seed", "samples", "instances", "paradox"});
    if (an.contains("models")) {
      const json& m = an.at("models");
      if (!m.is_array()) throw ValidationError("models must be an array of names");
      std::vector<std::string> names;
      for (const json& n : m) {
        if (!n.is_string()) throw ValidationError("models must be an array of names");
        names.push_back(n.get<std::string>());
      }
      c.models = parse_models(names);
    }
    if (an.contains("seed")) c.seed = count_at(an, "seed");
    if (an.contains("samples")) c.samples = count_at(an, "samples");
    if (an.contains("instances")) c.instances = count_at(an, "instances");
    if (an.contains("paradox")) {
      const json& px = an.at("paradox");
      check_keys(px, "paradox", {"ys", "rs", "p_intercepts", "p_slopes", "beta_points"});
      if (px.contains("ys")) c.paradox.ys = numbers_at(px, "ys");
      if (px.contains("rs")) c.paradox.rs = numbers_at(px, "rs");
      if (px.contains("p_intercepts")) c.paradox.p_intercepts = numbers_at(px, "p_intercepts");
      if (px.contains("p_slopes")) c.paradox.p_slopes = numbers_at(px, "p_slopes");
      if (px.contains("beta_points")) c.paradox.beta_points = static_cast<int>(count_at(px, "beta_points"));
    }
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    check_keys(o, "output", {"format", "path"});
    if (o.contains("format")) c.format = parse_format(string_at(o, "format"));
    if (o.contains("path")) c.out = string_at(o, "path");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

GameInstance build_instance(const ExperimentConfig& c) {
  GameInstance g;
  g.beta = c.beta.value_or(1.0);
  g.y = c.y.value_or(0.0);
  g.r = c.r.value_or(0.0);
  g.exo_p = c.exo_p;
  if (!c.curve_t || !c.curve_f || !c.curve_p) throw ValidationError("curves t, f and p are required");
  g.curves = ModelCurves{*c.curve_t, *c.curve_f, *c.curve_p};
  return g;
}

CommandOutput execute(const ExperimentConfig& c) {
  if (!c.command) throw ValidationError("no command given");
  if (c.models.empty()) throw ValidationError("at least one agent model is required");
  switch (*c.command) {
    case Command::kSolve:
      return run_solve(c);
    case Command::kSweep:
      return run_sweep(c);
    case Command::kClassify:
      return run_classify(c);
    case Command::kParadoxSearch:
      return run_paradox(c);
    case Command::kCertifyEquivalence:
      return run_equivalence(c);
    case Command::kValidateMc:
      return run_validate_mc(c);
  }
  throw ValidationError("no command given");
}

std::string render(const Table& table, OutputFormat format) {
  std::string out;
  if (format == OutputFormat::kCsv) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (i) out += ',';
      out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += csv_cell(row[i]);
      }
      out += '\n';
    }
    return out;
  }
  for (const auto& row : table.rows) {
    out += '{';
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += json(table.columns[i]).dump() + ':' + json_cell(row[i]);
    }
    out += "}\n";
  }
  return out;
}

std::string output_path(const ExperimentConfig& c) {
  if (c.out) return *c.out;
  const char* dir = std::getenv(kOutDirVariable);
  const std::string name = std::string(to_string(c.command.value_or(Command::kSolve))) +
                           std::string(extension(c.format));
  if (dir && *dir) return (std::filesystem::path(dir) / name).string();
  return name;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibria and social cost of the V2V hazard-warning game"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  std::optional<std::string> command, beta_grid, curve_t, curve_f, curve_p, models, format, out_path;
  std::optional<double> beta, y, r, exo_p;
  std::optional<std::uint64_t> seed, samples;

  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--command", command,
                 "solve | sweep | classify | paradox-search | certify-equivalence | validate-mc");
  app.add_option("--beta", beta, "information quality");
  app.add_option("--beta-grid", beta_grid, "start:stop:points or comma list");
  app.add_option("--y", y, "V2V penetration");
  app.add_option("--r", r, "reckless-crash cost ratio (> 1)");
  app.add_option("--exo-p", exo_p, "exogenous accident probability");
  app.add_option("--curve-t", curve_t, "true-positive curve, e.g. affine:0.5,0");
  app.add_option("--curve-f", curve_f, "false-positive curve");
  app.add_option("--curve-p", curve_p, "crash curve p(d)");
  app.add_option("--models", models, "comma list of bayesian,nonbayesian");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--out", out_path, "output file");
  app.add_option("--format", format, "csv | json-lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  ExperimentConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    // Flags override file values.
    if (command) config.command = parse_command(*command);
    if (beta) config.beta = beta;
    if (beta_grid) config.beta_grid = parse_beta_grid(*beta_grid);
    if (y) config.y = y;
    if (r) config.r = r;
    if (exo_p) config.exo_p = exo_p;
    if (curve_t) config.curve_t = Curve::parse(*curve_t);
    if (curve_f) config.curve_f = Curve::parse(*curve_f);
    if (curve_p) config.curve_p = Curve::parse(*curve_p);
    if (models) config.models = parse_models(split(*models, ','));
    if (seed) config.seed = seed;
    if (samples) config.samples = *samples;
    if (format) config.format = parse_format(*format);
    if (out_path) config.out = out_path;

    const CommandOutput result = execute(config);
    const std::string path = output_path(config);
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot write '" << path << "'\n";
      return 1;
    }
    file << render(result.table, config.format);
    file.close();
    out << "wrote " << result.table.rows.size() << " rows to " << path << '\n';
    if (!result.certified) {
      err << "certification failed: " << result.note << '\n';
      return 3;
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const StatisticalFailure& e) {
    err << "certification failed: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace v2v::cli
