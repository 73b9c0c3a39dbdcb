#include "domains/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "util/subprocess.hpp"

namespace mrl::compiler {

namespace fs = std::filesystem;

std::string to_string(PragmaKind k) {
  switch (k) {
    case PragmaKind::Unroll:
      return "unroll";
    case PragmaKind::Vectorize:
      return "vectorize";
    case PragmaKind::Interleave:
      return "interleave";
    case PragmaKind::Prefetch:
      return "prefetch";
  }
  return "vectorize";
}

namespace {

PragmaKind kind_from_string(const std::string& s) {
  if (s == "unroll") return PragmaKind::Unroll;
  if (s == "vectorize") return PragmaKind::Vectorize;
  if (s == "interleave") return PragmaKind::Interleave;
  if (s == "prefetch") return PragmaKind::Prefetch;
  throw ConfigError("compiler: unknown pragma kind: " + s);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out.push_back('\n');
  }
  return out;
}

std::string loop_marker_comment(const std::string& marker) {
  return "// mrl:loop " + marker;
}

std::string pragma_text(const PragmaAction& a) {
  switch (a.kind) {
    case PragmaKind::Unroll:
      return "#pragma clang loop unroll_count(" + std::to_string(a.parameter) + ")";
    case PragmaKind::Vectorize:
      return a.parameter == 0
                 ? std::string("#pragma clang loop vectorize(enable)")
                 : "#pragma clang loop vectorize_width(" + std::to_string(a.parameter) + ")";
    case PragmaKind::Interleave:
      return a.parameter == 0
                 ? std::string("#pragma clang loop interleave(enable)")
                 : "#pragma clang loop interleave_count(" + std::to_string(a.parameter) + ")";
    case PragmaKind::Prefetch:
      return "";
  }
  return "";
}

bool pragma_line_matches_kind(const std::string& line, PragmaKind kind) {
  const std::string t = trim(line);
  if (t.rfind("#pragma clang loop ", 0) != 0) return false;
  switch (kind) {
    case PragmaKind::Unroll:
      return t.find("unroll") != std::string::npos;
    case PragmaKind::Vectorize:
      return t.find("vectorize") != std::string::npos;
    case PragmaKind::Interleave:
      return t.find("interleave") != std::string::npos;
    case PragmaKind::Prefetch:
      return false;
  }
  return false;
}

std::string indent_of(const std::string& line) {
  return line.substr(0, line.find_first_not_of(" \t"));
}

}  // namespace

PragmaAction pragma_action_from_spec(const ActionSpec& spec) {
  PragmaAction a;
  a.kind = kind_from_string(spec.payload.at("kind").get<std::string>());
  a.parameter = spec.payload.value("parameter", 0);
  a.marker = spec.payload.value("marker", std::string{});
  return a;
}

std::vector<ActionSpec> list_actions() {
  std::vector<ActionSpec> roster;
  auto add = [&](const std::string& id, const std::string& kind, int parameter,
                 const std::string& label) {
    ActionSpec s;
    s.id = id;
    s.category = kind;
    s.label = label;
    s.payload = json{{"kind", kind}, {"parameter", parameter}, {"marker", ""}};
    roster.push_back(std::move(s));
  };
  add("unroll_count_2", "unroll", 2, "unroll the marked loop 2x");
  add("unroll_count_4", "unroll", 4, "unroll the marked loop 4x");
  add("unroll_count_8", "unroll", 8, "unroll the marked loop 8x");
  add("vectorize_enable", "vectorize", 0, "enable loop vectorization");
  add("vectorize_width_4", "vectorize", 4, "vectorize with width 4");
  add("vectorize_width_8", "vectorize", 8, "vectorize with width 8");
  add("interleave_enable", "interleave", 0, "enable loop interleaving");
  add("interleave_count_2", "interleave", 2, "interleave 2 iterations");
  add("interleave_count_4", "interleave", 4, "interleave 4 iterations");
  add("prefetch_dist_8", "prefetch", 8, "software prefetch 8 elements ahead");
  add("prefetch_dist_16", "prefetch", 16, "software prefetch 16 elements ahead");
  add("prefetch_dist_64", "prefetch", 64, "software prefetch 64 elements ahead");
  return roster;
}

void validate_kernel(const KernelSpec& kernel, const std::string& source) {
  if (kernel.loop_markers.empty())
    throw ConfigError("kernel '" + kernel.name + "': at least one loop marker required");
  for (const auto& m : kernel.loop_markers) {
    const std::string needle = loop_marker_comment(m);
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = source.find(needle, pos)) != std::string::npos) {
      ++count;
      pos += needle.size();
    }
    if (count != 1)
      throw ConfigError("kernel '" + kernel.name + "': marker " + m + " occurs " +
                        std::to_string(count) + " times, expected exactly once");
  }
}

InjectResult inject_pragma(const std::string& source, const PragmaAction& action,
                           const KernelSpec& kernel) {
  const std::string marker =
      action.marker.empty() ? kernel.loop_markers.front() : action.marker;
  std::vector<std::string> lines = split_lines(source);
  InjectResult result;

  if (action.kind == PragmaKind::Prefetch) {
    // an explicit marker must match its template; the default marker takes
    // the first prefetch template in the source
    const std::string any_prefix = "// mrl:prefetch ";
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string t = trim(lines[i]);
      if (t.rfind(any_prefix, 0) != 0) continue;
      std::string rest = t.substr(any_prefix.size());
      const auto space = rest.find(' ');
      if (space == std::string::npos) continue;
      const std::string site = rest.substr(0, space);
      if (!action.marker.empty() && site != action.marker) continue;
      std::string stmt = rest.substr(space + 1);
      const auto dist_pos = stmt.find("MRL_DIST");
      if (dist_pos == std::string::npos)
        throw ConfigError("prefetch template for marker " + marker +
                          " lacks an MRL_DIST placeholder");
      stmt.replace(dist_pos, 8, std::to_string(action.parameter));
      // drop a previously injected statement directly below the template
      if (i + 1 < lines.size() &&
          trim(lines[i + 1]).rfind("__builtin_prefetch", 0) == 0) {
        if (trim(lines[i + 1]) != stmt)
          result.warning = "replaced prefetch at marker " + site;
        lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      }
      lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                   indent_of(lines[i]) + stmt);
      result.source = join_lines(lines);
      return result;
    }
    throw MarkerNotFound(action.marker.empty()
                             ? std::string("no prefetch template in kernel source")
                             : "prefetch marker " + action.marker + " not found");
  }

  const std::string needle = loop_marker_comment(marker);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]) != needle) continue;
    // the pragma block sits between the marker line and the loop header
    std::size_t header = i + 1;
    while (header < lines.size() &&
           trim(lines[header]).rfind("#pragma", 0) == 0)
      ++header;
    if (header >= lines.size())
      throw ConfigError("marker " + marker + " is not followed by a loop header");
    // replace an existing pragma of the same kind
    const std::string text = pragma_text(action);
    for (std::size_t j = i + 1; j < header; ++j) {
      if (pragma_line_matches_kind(lines[j], action.kind)) {
        if (trim(lines[j]) != text)
          result.warning = "replaced " + to_string(action.kind) + " pragma at marker " +
                           marker + " (was: " + trim(lines[j]) + ")";
        lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(j));
        --header;
        break;
      }
    }
    lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(header),
                 indent_of(lines[header]) + text);
    result.source = join_lines(lines);
    return result;
  }
  throw MarkerNotFound("loop marker " + marker + " not found in kernel source");
}

std::map<std::string, double> parse_perf_csv(const std::string& text) {
  std::map<std::string, double> counters;
  for (const auto& line : split_lines(text)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 3) continue;
    const std::string& value = fields[0];
    const std::string& event = fields[2];
    if (value.empty() || value[0] == '<') continue;  // <not counted>/<not supported>
    try {
      counters[event] = std::stod(value);
    } catch (const std::exception&) {
      // skip non-numeric rows (headers, comments)
    }
  }
  return counters;
}

CompilerDomain::CompilerDomain(CompilerOptions opts) : opts_(std::move(opts)) {
  std::ifstream in(opts_.kernel.source_path);
  if (!in)
    throw ConfigError("cannot open kernel source: " + opts_.kernel.source_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  pristine_source_ = ss.str();
  validate_kernel(opts_.kernel, pristine_source_);
  if (opts_.reps < 1) throw ConfigError("compiler: reps must be >= 1");
  fs::create_directories(opts_.work_dir);
}

std::vector<std::string> CompilerDomain::metric_names() const {
  return {"wall_time_s", "ipc", "l1d_miss_rate", "branch_miss_rate"};
}

MetricPolarity CompilerDomain::metric_polarity(const std::string& metric) const {
  return metric == "ipc" ? MetricPolarity::LowerWorse : MetricPolarity::HigherWorse;
}

std::string CompilerDomain::compile(const std::string& source, const std::string& variant_tag) {
  const fs::path src =
      fs::path(opts_.work_dir) / (opts_.kernel.name + "_" + variant_tag + ".c");
  const fs::path bin = fs::path(opts_.work_dir) / (opts_.kernel.name + "_" + variant_tag);
  {
    std::ofstream out(src, std::ios::trunc);
    out << source;
  }
  std::vector<std::string> argv{opts_.cc};
  argv.insert(argv.end(), opts_.kernel.build_flags.begin(), opts_.kernel.build_flags.end());
  argv.push_back("-o");
  argv.push_back(bin.string());
  argv.push_back(src.string());

  util::RunResult res = util::run_process(argv);
  if (!res.err.empty()) log_ += "[cc " + variant_tag + "]\n" + res.err;
  if (res.exit_code != 0)
    throw CompileError("compiler failed (" + opts_.cc + ", exit " +
                       std::to_string(res.exit_code) + "):\n" + res.err);
  return bin.string();
}

namespace {

struct KernelOutput {
  double time_s = 0.0;
  std::string checksum;
};

KernelOutput parse_kernel_stdout(const std::string& out) {
  KernelOutput ko;
  const auto tpos = out.find("time_s=");
  const auto cpos = out.find("checksum=");
  if (tpos == std::string::npos || cpos == std::string::npos)
    throw RunError("kernel output missing time_s=/checksum= fields: " + out.substr(0, 128));
  ko.time_s = std::stod(out.substr(tpos + 7));
  std::istringstream cs(out.substr(cpos + 9));
  cs >> ko.checksum;
  return ko;
}

}  // namespace

MeasureOutput CompilerDomain::measure(const std::string& binary, int reps) {
  static const std::vector<std::string> kEvents = {
      "cycles",  "instructions", "L1-dcache-loads", "L1-dcache-load-misses",
      "branches", "branch-misses"};

  MeasureOutput out;
  std::vector<double> wall;
  std::vector<double> ipc, l1d, branch;
  std::string checksum;

  for (int rep = 0; rep < reps; ++rep) {
    util::RunResult res;
    std::map<std::string, double> counters;
    if (profiler_active_) {
      std::string events;
      for (std::size_t i = 0; i < kEvents.size(); ++i)
        events += (i ? "," : "") + kEvents[i];
      res = util::run_process({opts_.profiler, "stat", "-x,", "-e", events, "--", binary});
      if (res.exit_code != 0)
        throw ProfilerUnavailable("profiler exited with " + std::to_string(res.exit_code) +
                                  ": " + res.err.substr(0, 256));
      counters = parse_perf_csv(res.err);
    } else {
      res = util::run_process({binary});
      if (res.exit_code != 0)
        throw RunError("kernel exited with " + std::to_string(res.exit_code) + ": " +
                       res.err.substr(0, 256));
    }

    const KernelOutput ko = parse_kernel_stdout(res.out);
    wall.push_back(ko.time_s);
    if (checksum.empty())
      checksum = ko.checksum;
    else if (checksum != ko.checksum)
      throw RunError("kernel checksum varies across repetitions");

    if (profiler_active_) {
      const auto need = [&](const std::string& e) -> std::optional<double> {
        auto it = counters.find(e);
        if (it == counters.end()) return std::nullopt;
        return it->second;
      };
      const auto cycles = need("cycles");
      const auto instrs = need("instructions");
      const auto loads = need("L1-dcache-loads");
      const auto misses = need("L1-dcache-load-misses");
      const auto branches = need("branches");
      const auto bmisses = need("branch-misses");
      if (!cycles || !instrs || !loads || !misses || !branches || !bmisses)
        throw ProfilerUnavailable("profiler produced incomplete counters");
      ipc.push_back(*instrs / std::max(1.0, *cycles));
      l1d.push_back(std::clamp(*misses / std::max(1.0, *loads), 0.0, 1.0));
      branch.push_back(std::clamp(*bmisses / std::max(1.0, *branches), 0.0, 1.0));
    }
  }

  out.snapshot.metrics["wall_time_s"] = summarize_reps(wall);
  if (profiler_active_) {
    out.snapshot.metrics["ipc"] = summarize_reps(ipc);
    out.snapshot.metrics["l1d_miss_rate"] = summarize_reps(l1d);
    out.snapshot.metrics["branch_miss_rate"] = summarize_reps(branch);
    out.counters_present = true;
  }
  out.median_wall_s = out.snapshot.metrics["wall_time_s"].median;
  out.checksum = checksum;
  return out;
}

MetricSnapshot CompilerDomain::finish_snapshot(MeasureOutput&& out) {
  last_checksum_ = out.checksum;
  MetricSnapshot snap = std::move(out.snapshot);
  snap.objective_value = baseline_median_s_ / out.median_wall_s;
  return snap;
}

MetricSnapshot CompilerDomain::reset(std::uint64_t) {
  source_ = pristine_source_;
  variant_counter_ = 0;
  log_.clear();

  const std::string bin = compile(source_, "baseline");

  // probe counter access once per trial; degrade to wall-time-only mode
  profiler_active_ = opts_.use_profiler && util::executable_exists(opts_.profiler);
  if (profiler_active_) {
    try {
      measure(bin, 1);
    } catch (const ProfilerUnavailable& e) {
      profiler_active_ = false;
      log_ += std::string("[profiler degraded] ") + e.what() + "\n";
    }
  } else if (opts_.use_profiler) {
    log_ += "[profiler degraded] " + opts_.profiler + " not found; wall-time only\n";
  }

  MeasureOutput out = measure(bin, opts_.reps);
  baseline_median_s_ = out.median_wall_s;
  baseline_checksum_ = out.checksum;
  return finish_snapshot(std::move(out));
}

MetricSnapshot CompilerDomain::apply_and_measure(const std::string& action_id) {
  const auto roster = list_actions();
  auto it = std::find_if(roster.begin(), roster.end(),
                         [&](const ActionSpec& a) { return a.id == action_id; });
  if (it == roster.end())
    throw UnknownAction("compiler: unknown action '" + action_id + "'");

  InjectResult injected = inject_pragma(source_, pragma_action_from_spec(*it), opts_.kernel);
  if (injected.warning) log_ += "[inject] " + *injected.warning + "\n";
  source_ = injected.source;

  const std::string bin = compile(source_, "v" + std::to_string(++variant_counter_));
  MeasureOutput out;
  try {
    out = measure(bin, opts_.reps);
  } catch (const ProfilerUnavailable& e) {
    // counters vanished mid-trial: degrade to wall-time-only and re-measure
    profiler_active_ = false;
    log_ += std::string("[profiler degraded] ") + e.what() + "\n";
    out = measure(bin, opts_.reps);
  }
  if (!baseline_checksum_.empty() && out.checksum != baseline_checksum_)
    throw DomainFailure("variant checksum " + out.checksum +
                        " differs from baseline " + baseline_checksum_);
  return finish_snapshot(std::move(out));
}

}  // namespace mrl::compiler
