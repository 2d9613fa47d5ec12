#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <reftaylor/expansion.hpp>
#include <reftaylor/fem.hpp>

namespace reftaylor::cli {

enum class Command { Expand, Interp1d, Simplex, Fem, Savings, Registry, Selftest };

Command parse_command(const std::string& name);
const char* to_string(Command c);

struct StudyConfig {
  Command command = Command::Expand;
  /// Registry name. Empty picks a per-command default.
  std::string function;
  std::vector<int> m_values{1, 2, 4, 8};
  std::vector<int> subdivisions{8, 16, 32, 64, 128};
  std::vector<double> beta_values{0.55, 0.6, 0.7, 0.8, 0.9, 1.0};
  int dim = 1;
  FemSpace space = FemSpace::P1;
  WeightKind kind = WeightKind::Closed;
  double eps = 1e-4;
  double diffusion = 1.0;
  double reaction = 0.0;
  std::optional<double> C;
  std::optional<double> alpha;
  std::optional<double> d2;
  int draws = 200;
  int samples = 20;  // random points per element for `simplex`
  std::uint64_t seed = 20240601;
  std::filesystem::path output;  // empty: CSV on stdout, no manifest
  int threads = 1;
};

/// Throws InvalidArgument on empty lists, nonpositive subdivisions/m, etc.
void validate(const StudyConfig& config);

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

struct StudyResult {
  Table table;
  /// Bound violations detected against certified bounds.
  int violations = 0;
  std::map<std::string, double> summary;
};

/// Runs the computation only. Deterministic for a given config; `threads`
/// changes the schedule, never the output.
StudyResult run_study(const StudyConfig& config);

/// Comma-separated, header first, reals as %.11e (12 significant digits).
void write_csv(std::ostream& os, const Table& table);

std::string manifest_json(const StudyConfig& config, const StudyResult& result,
                          double wall_seconds);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitIo = 3;

/// Runs the study and writes the CSV (to `out` when no output path is set)
/// plus `<output>.manifest.json`. Returns one of the exit codes above.
int run(const StudyConfig& config, std::ostream& out, std::ostream& err);

/// Thread cap from REFTAYLOR_THREADS, else the hardware concurrency.
int default_threads();

}  // namespace reftaylor::cli
