#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "v2v/analysis.hpp"
#include "v2v/model.hpp"

namespace v2v::cli {

enum class Command { kSolve, kSweep, kClassify, kParadoxSearch, kCertifyEquivalence, kValidateMc };
enum class OutputFormat { kCsv, kJsonLines };

std::string_view to_string(Command command);
Command parse_command(std::string_view name);
OutputFormat parse_format(std::string_view name);
std::string_view extension(OutputFormat format);

// "start:stop:points" (inclusive linspace) or a comma-separated list.
std::vector<double> parse_beta_grid(std::string_view text);

// Overrides for the default paradox search grid; empty means default.
struct ParadoxOverrides {
  std::vector<double> ys;
  std::vector<double> rs;
  std::vector<double> p_intercepts;
  std::vector<double> p_slopes;
  std::optional<int> beta_points;
};

struct ExperimentConfig {
  std::optional<Command> command;

  std::optional<double> beta;
  std::vector<double> beta_grid;
  std::optional<double> y;
  std::optional<double> r;
  std::optional<double> exo_p;
  std::optional<Curve> curve_t;
  std::optional<Curve> curve_f;
  std::optional<Curve> curve_p;

  std::vector<AgentModel> models{AgentModel::kBayesian, AgentModel::kNonBayesian};
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 1'000'000;
  std::size_t instances = 1000;  // certify-equivalence batch size
  ParadoxOverrides paradox;

  OutputFormat format = OutputFormat::kCsv;
  std::optional<std::string> out;
};

// Reads the nested config document. Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

// Instance assembled from the config; beta defaults to 1 when only a grid is given.
GameInstance build_instance(const ExperimentConfig& config);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct CommandOutput {
  Table table;
  bool certified = true;  // false on a failed monotonicity/equivalence/statistical check
  std::string note;       // one-line diagnostic for failed certifications
};

// Validates the config and runs its command. Throws ValidationError and
// SolverError subclasses; never touches the filesystem.
CommandOutput execute(const ExperimentConfig& config);

std::string render(const Table& table, OutputFormat format);

// Output path: --out, else $V2V_OUT_DIR/<command>.<ext>, else ./<command>.<ext>.
std::string output_path(const ExperimentConfig& config);

// Full command-line entry point; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace v2v::cli
