#pragma once

#include <string>
#include <string_view>

#include "core/types.hpp"

namespace mrl {

// Trial record wire format: UTF-8 JSON lines. The first line is the trial
// header, every following line is one iteration, and every line carries
// "schema_version": 1. Serialization is canonical (keys sorted, shortest
// round-trip floats), so deserialize(serialize(t)) == t and re-serializing
// is byte-identical.
inline constexpr int kSchemaVersion = 1;

std::string serialize_trial(const TrialRecord& trial);

// Throws ParseError (with line number and byte offset) on malformed input.
TrialRecord deserialize_trial(std::string_view bytes);

// File helpers. save_trial writes atomically (temp file + rename).
void save_trial(const TrialRecord& trial, const std::string& path);
TrialRecord load_trial(const std::string& path);

// Write arbitrary text atomically (temp file in the same directory + rename).
void atomic_write(const std::string& path, const std::string& content);

}  // namespace mrl
