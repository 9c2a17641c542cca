#pragma once

#include <string>
#include <string_view>

#include "secnet/params.hpp"

namespace secnet::config {

/// Everything a run needs. Keys absent from the file keep their defaults
/// (the urban parameter set of default_system_params()).
struct RunConfig {
  SystemParams params = default_system_params();
  SimConfig sim;
  QuadratureSpec quad;
  /// Retained UAV intensity the parent intensity was solved for.
  double lambda_u = 8e-6;
};

/// Parses INI text with sections [system], [channel], [sim], [quad].
/// Environment variables SECNET_<KEY> (key matched case-insensitively)
/// override file values when `use_environment` is set.
RunConfig parse_config(std::string_view text, bool use_environment = true);

/// Reads and parses a file; throws ConfigError if it cannot be read.
RunConfig load_config(const std::string& path, bool use_environment = true);

/// Defaults with environment overrides applied.
RunConfig default_config(bool use_environment = true);

/// Human-readable dump of primitives and derived quantities.
std::string describe(const RunConfig& cfg);

}  // namespace secnet::config
