#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/loop.hpp"

namespace mrl::agents {

struct LlmConfig {
  std::string endpoint = "http://127.0.0.1:8080/v1/chat/completions";
  std::string model = "unset";
  double temperature = 0.0;
  std::string api_key_env = "MRL_API_KEY";  // key is read from the environment only
  int timeout_s = 60;
  std::optional<std::string> reasoning_effort;  // opaque passthrough
};

void to_json(json& j, const LlmConfig& v);
void from_json(const json& j, LlmConfig& v);

// Strictly validate one raw agent reply against the decision schema:
// required fields present, target_metric declared, action_id in the roster.
// Unknown extra fields are tolerated (they survive only in raw_output).
// Markdown code fences around the JSON object are stripped. Throws
// SchemaViolation naming the offending field.
AgentDecision parse_decision(const std::string& raw, const AgentRequest& request);

// Chat-completions-style client: system + user messages, structured JSON
// reply, exactly one schema-repair re-prompt that quotes the validator error
// verbatim. Network problems surface as TransportError; a reply that stays
// invalid after the repair attempt is an AgentFailure.
class LlmAgent final : public Agent {
 public:
  explicit LlmAgent(LlmConfig config);

  std::string id() const override { return "llm:" + config_.model; }
  AgentDecision decide(const AgentRequest& request) override;

  // every outbound request and raw response, for replayability
  const std::vector<json>& transcript() const { return transcript_; }

 private:
  std::string post_chat(const json& body);

  LlmConfig config_;
  std::string api_key_;
  std::vector<json> transcript_;
};

std::string llm_system_prompt();
std::string build_user_message(const AgentRequest& request);

}  // namespace mrl::agents
