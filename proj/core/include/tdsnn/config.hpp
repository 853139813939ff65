#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tdsnn/network.hpp"
#include "tdsnn/reservoir.hpp"

namespace tdsnn {

// Everything a CLI run needs. Sections map one-to-one onto the members:
// [network] [topology] [neuron] [synapse] [weight] [train] [feedback].
struct RunConfig {
  NetworkConfig network;
  TrainConfig train;
  FeedbackParams feedback;

  // Throws ConfigError naming the offending key.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses TOML-style `key = value` text on top of `defaults`.
///
/// Values are numbers, true/false, double-quoted strings, or arrays of
/// strings (arrays may span lines). Explicit connections are written as
/// "pre>post:exc|inh:code" under [topology]. The result is validated.
///
/// Throws ConfigError with line and key context on syntax errors, unknown
/// sections or keys, duplicates, type mismatches and range violations.
RunConfig parse_config(std::string_view text, const RunConfig& defaults = {});

// Reads and parses a file; IoError if it cannot be read.
RunConfig load_config(const std::filesystem::path& path, const RunConfig& defaults = {});

// Every key, doubles at 17 significant digits, so parsing the output
// reproduces the config exactly.
std::string serialize_config(const RunConfig& config);

// The 100-neuron reservoir used for sine generation.
RunConfig reservoir_preset();

}  // namespace tdsnn
