#pragma once

// Dispatches a validated specification and assembles the run report.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "spec.hpp"

namespace ouq::cli {

inline constexpr const char* kToolName = "ouq";
inline constexpr const char* kToolVersion = "0.1.0";

enum class ReportFormat { Json, Csv };

/// Command-line values that take precedence over the spec's solver block.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> restarts;
  std::optional<double> tol;
  std::optional<int> max_iters;
};

void apply(const Overrides& o, ProblemSpec& spec);

enum class RunStatus { Converged, BestFound };

struct RunReport {
  /// Everything except wall time, so that reruns are byte-identical.
  nlohmann::json document;
  /// CSV curves keyed by file name (only when the format asks for them).
  std::map<std::string, std::string> curves;
  RunStatus status = RunStatus::Converged;
  double wall_seconds = 0.0;

  /// 0 when every solver certified its result, 2 for best-found results.
  int exit_code() const noexcept { return status == RunStatus::Converged ? 0 : 2; }
};

/// Throws ouq::Error from whichever module fails.
RunReport run(const ProblemSpec& spec, ReportFormat format);

/// Writes report.json, timing.json and the curve files into `out_dir`.
void write_report(const RunReport& report, const std::filesystem::path& out_dir);

std::string report_text(const RunReport& report);

}  // namespace ouq::cli
