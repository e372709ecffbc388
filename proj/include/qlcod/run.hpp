#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlcod/classical.hpp"
#include "qlcod/params.hpp"
#include "qlcod/sde.hpp"
#include "qlcod/wigner.hpp"

namespace qlcod {

enum class RunMode { ClassicalScan, QuantumSteady, QuantumSweep, WignerExport, SdeEnsemble, EntanglementSweep };

const char* to_string(RunMode m) noexcept;
std::optional<RunMode> parse_mode(std::string_view name) noexcept;

struct SweepSpec {
  std::string parameter;  // "eps_over_k1" or "kerr"
  std::vector<double> values;
};

struct TruncationSpec {
  int step = 4;
  double rel_tol = 1e-3;
  int n_cap = 32;
};

struct RunConfig {
  RunMode mode = RunMode::QuantumSteady;
  SystemParams params;
  std::optional<SweepSpec> sweep;
  std::optional<SweepSpec> sweep2;  // quantum-sweep only: kerr axis of the two-parameter map
  int n_max = 16;
  PhaseGrid grid;                   // regime default unless given
  SdeConfig sde;
  ClassicalSweepOptions classical;
  std::optional<TruncationSpec> truncation_check;
  std::uint64_t seed = 0;
  unsigned threads = 0;             // 0: hardware concurrency
  std::string output;               // empty: caller decides

  /// Checks mode-specific requirements. Throws Error(Config) naming the key.
  void validate() const;
};

/// Strict JSON parse: unknown keys, wrong types and violated invariants raise
/// Error(Config) with the offending key in the message.
RunConfig parse_config(std::string_view text);

/// `mode` supplies a missing "mode" key; a present one must agree with it.
RunConfig parse_config(std::string_view text, RunMode mode);

/// Fully expanded configuration (defaults filled in), without output path and
/// thread count. Parsing it back yields the same computation.
std::string canonical_json(const RunConfig& config);

struct RunSummary {
  std::size_t points = 0;
  std::size_t failed = 0;
  bool total_failure() const { return points > 0 && failed == points; }
};

/// Runs the configured computation and writes the CSV artifact to `out`.
RunSummary run(const RunConfig& config, std::ostream& out);

/// Same, writing to config.output. Throws Error(Io) if the file cannot be written.
RunSummary run(const RunConfig& config);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace qlcod
