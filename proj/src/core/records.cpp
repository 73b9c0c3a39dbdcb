#include "core/records.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mrl {

namespace {

void check_finite(const MetricSnapshot& s, const char* where) {
  if (!std::isfinite(s.objective_value))
    throw Error(std::string("non-finite objective_value in ") + where);
  for (const auto& [name, st] : s.metrics) {
    if (!std::isfinite(st.mean) || !std::isfinite(st.median) || !std::isfinite(st.std))
      throw Error("non-finite value for metric '" + name + "' in " + where);
  }
}

json header_json(const TrialRecord& t) {
  json j{{"schema_version", kSchemaVersion},
         {"type", "trial"},
         {"domain_id", t.domain_id},
         {"agent_id", t.agent_id},
         {"config", t.config},
         {"baseline", t.baseline},
         {"truncated", t.truncated},
         {"truncation_reason", t.truncation_reason},
         {"flags", t.flags}};
  return j;
}

}  // namespace

std::string serialize_trial(const TrialRecord& trial) {
  check_finite(trial.baseline, "baseline");
  std::string out = header_json(trial).dump();
  out.push_back('\n');
  for (const auto& it : trial.iterations) {
    check_finite(it.pre, "iteration pre");
    check_finite(it.post, "iteration post");
    if (!std::isfinite(it.objective_delta)) throw Error("non-finite objective_delta");
    json j = it;
    j["schema_version"] = kSchemaVersion;
    j["type"] = "iteration";
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

TrialRecord deserialize_trial(std::string_view bytes) {
  TrialRecord trial;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  int expect_index = 0;

  while (pos < bytes.size()) {
    std::size_t eol = bytes.find('\n', pos);
    const std::size_t line_start = pos;
    std::string_view line = (eol == std::string_view::npos)
                                ? bytes.substr(pos)
                                : bytes.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? bytes.size() : eol + 1;
    ++line_no;
    if (line.empty()) continue;

    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw ParseError("malformed JSON object", line_no, line_start);
    try {
      if (j.value("schema_version", -1) != kSchemaVersion)
        throw Error("missing or unsupported schema_version");
      const std::string type = j.at("type").get<std::string>();
      if (type == "trial") {
        if (have_header) throw Error("duplicate trial header");
        trial.domain_id = j.at("domain_id").get<std::string>();
        trial.agent_id = j.at("agent_id").get<std::string>();
        trial.config = j.at("config").get<LoopConfig>();
        trial.baseline = j.at("baseline").get<MetricSnapshot>();
        trial.truncated = j.value("truncated", false);
        trial.truncation_reason = j.value("truncation_reason", std::string{});
        trial.flags = j.value("flags", std::vector<std::string>{});
        have_header = true;
      } else if (type == "iteration") {
        if (!have_header) throw Error("iteration before trial header");
        IterationRecord rec = j.get<IterationRecord>();
        if (rec.index != expect_index)
          throw Error("iteration index " + std::to_string(rec.index) +
                      " out of order, expected " + std::to_string(expect_index));
        ++expect_index;
        trial.iterations.push_back(std::move(rec));
      } else {
        throw Error("unknown record type: " + type);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no, line_start);
    }
  }

  if (!have_header) throw ParseError("no trial header found", line_no, bytes.size());
  if (static_cast<int>(trial.iterations.size()) > trial.config.n_iterations)
    throw ParseError("more iterations than config.n_iterations", line_no, bytes.size());
  return trial;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

void save_trial(const TrialRecord& trial, const std::string& path) {
  atomic_write(path, serialize_trial(trial));
}

TrialRecord load_trial(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open trial record: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_trial(ss.str());
}

}  // namespace mrl
