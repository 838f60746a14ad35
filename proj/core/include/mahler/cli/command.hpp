#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mahler/cli/system_file.hpp"

namespace mahler {

/// Report schema tag carried in every machine report.
inline constexpr const char* kReportFormat = "mahler-report v1";

/// Exit statuses shared by every command.
enum ExitStatus : int {
  kAffirmative = 0,
  kNegative = 1,
  kUnknown = 2,
  kInputError = 3,
};

/// One invocation. Options left unset fall back to the file's [settings].
struct Command {
  /// "check class-m", "check admissible", "check gauge", "check regular-point",
  /// "eval", "relations", "lift", "purity", "kron-power", "theta",
  /// "iterate-vectors", "probe" or "print".
  std::string name;
  std::vector<std::string> systems;
  std::vector<std::string> points;
  std::optional<long> digits;
  std::optional<long> order;
  std::optional<long> k_max;
  std::optional<std::string> bound;
  std::optional<long> degree;
  std::optional<long> d_max;
  std::optional<long> power;
  std::optional<long> l_max;
  /// Polynomial in X0, X1, ... for lift and purity.
  std::optional<std::string> relation;
  /// Purity generators as "GROUP:poly".
  std::vector<std::string> generators;
  /// Probe series in the concatenated system variables.
  std::optional<std::string> series;
  /// Label echoed in the report, usually the input path.
  std::string file_label;
};

struct Report {
  int status = kInputError;
  /// Deterministic machine report: identical inputs give identical bytes.
  std::string json;
  std::string text;
  /// Wall time in seconds; kept out of the machine report.
  double seconds = 0;
};

const std::vector<std::string>& command_names();

/// Runs one command. Input problems (unknown names, dimension mismatches,
/// preconditions of the underlying operation) give status 3 with the
/// message in the report instead of an exception.
Report run_command(const Command& cmd, const SystemFile& file);

}  // namespace mahler
