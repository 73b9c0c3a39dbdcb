#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/loop.hpp"

namespace mrl::compiler {

// A small C kernel with marker comments locating its optimizable loops:
//   // mrl:loop L0            (line directly above a loop header)
//   // mrl:prefetch L0 __builtin_prefetch(&a[i + MRL_DIST], 0, 3);
// The prefetch marker carries a statement template; injection materializes
// it with the configured distance on the following line.
struct KernelSpec {
  std::string name;
  std::string source_path;
  std::vector<std::string> loop_markers;  // outermost first
  std::vector<std::string> build_flags{"-O2"};
  std::string dataset_size = "small";
};

// Throws ConfigError unless every declared marker occurs exactly once and at
// least one marker is declared.
void validate_kernel(const KernelSpec& kernel, const std::string& source);

enum class PragmaKind { Unroll, Vectorize, Interleave, Prefetch };
std::string to_string(PragmaKind k);

struct PragmaAction {
  PragmaKind kind = PragmaKind::Vectorize;
  int parameter = 0;        // 0 = enable-flag form, else count/width/distance
  std::string marker;       // empty = outermost declared marker
};

PragmaAction pragma_action_from_spec(const ActionSpec& spec);

// The fixed 12-action roster: unroll_count {2,4,8}, vectorize enable +
// width {4,8}, interleave enable + count {2,4}, prefetch distance {8,16,64}.
std::vector<ActionSpec> list_actions();

struct InjectResult {
  std::string source;
  std::optional<std::string> warning;  // set when a conflicting pragma was replaced
};

// Insert the pragma (or prefetch statement) for `action` at its marker.
// Re-injection of the same kind at the same marker replaces the previous
// line, so injection is idempotent per (marker, kind). Throws MarkerNotFound.
InjectResult inject_pragma(const std::string& source, const PragmaAction& action,
                           const KernelSpec& kernel);

// value/unit/event-name triples from `<profiler> stat -x, ...` output
std::map<std::string, double> parse_perf_csv(const std::string& text);

struct MeasureOutput {
  MetricSnapshot snapshot;   // objective_value left at raw median wall time
  double median_wall_s = 0.0;
  std::string checksum;
  bool counters_present = false;
};

struct CompilerOptions {
  KernelSpec kernel;
  std::string cc = "clang";
  std::string profiler = "perf";
  int reps = 20;
  bool use_profiler = true;  // degrades automatically when unavailable
  std::string work_dir = "/tmp/mrl-compiler";
};

class CompilerDomain final : public Domain {
 public:
  explicit CompilerDomain(CompilerOptions opts);

  std::string id() const override { return "compiler"; }
  ObjectiveSense objective_sense() const override { return ObjectiveSense::Maximize; }
  std::vector<std::string> metric_names() const override;
  MetricPolarity metric_polarity(const std::string& metric) const override;
  std::vector<ActionSpec> actions() const override { return list_actions(); }
  MetricSnapshot reset(std::uint64_t seed) override;
  MetricSnapshot apply_and_measure(const std::string& action_id) override;

  // Compile `source` under the kernel's flags; returns the binary path and
  // captures compiler stderr. Throws CompileError.
  std::string compile(const std::string& source, const std::string& variant_tag);

  // Run the binary `reps` times serially (optionally under the profiler) and
  // summarize. Throws RunError / ProfilerUnavailable.
  MeasureOutput measure(const std::string& binary, int reps);

  const std::string& current_source() const { return source_; }
  const std::string& baseline_checksum() const { return baseline_checksum_; }
  const std::string& last_checksum() const { return last_checksum_; }
  bool profiler_active() const { return profiler_active_; }
  const std::string& log() const { return log_; }

 private:
  MetricSnapshot finish_snapshot(MeasureOutput&& out);

  CompilerOptions opts_;
  std::string pristine_source_;
  std::string source_;
  bool profiler_active_ = false;
  double baseline_median_s_ = 0.0;
  std::string baseline_checksum_;
  std::string last_checksum_;
  std::string log_;
  int variant_counter_ = 0;
};

}  // namespace mrl::compiler
