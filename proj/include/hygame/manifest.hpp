#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hygame {

// Reproducibility record emitted next to every tool output.  The hash covers
// the command line and the canonical configuration string only — never the
// timestamp — so re-running the same invocation yields the same hash.
struct RunManifest {
  std::string tool = "hygame";
  std::string version = "0.1.0";
  std::string command;              // argv joined with single spaces
  std::string config;               // canonical "key=value\n" lines, sorted
  std::string timestamp;            // ISO 8601 UTC, informational only

  std::string hash() const;         // 16 lowercase hex digits
  std::string to_json() const;      // one self-contained object
};

std::uint64_t fnv1a64(const std::string& data);

// Canonicalize key/value settings: sorted by key, "key=value" joined with
// newlines.  Values should already be rendered deterministically.
std::string canonical_config(std::vector<std::pair<std::string, std::string>> kv);

// argv joined with single spaces, exactly as hashed.
std::string join_command(int argc, char** argv);

std::string utc_timestamp();

}  // namespace hygame
