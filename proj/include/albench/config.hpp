#pragma once

#include <stdexcept>
#include <string>

#include "albench/harness.hpp"

namespace albench {

std::string mode_name(ExperimentConfig::Mode mode);
ExperimentConfig::Mode mode_from_name(const std::string& name);
std::string consensus_rule_name(ExperimentConfig::ConsensusRule rule);
ExperimentConfig::ConsensusRule consensus_rule_from_name(const std::string& name);
std::string classifier_list_name(const std::vector<ClassifierSpec>& specs);

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(int line_no, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + message), line(line_no) {}
};

struct LoadedConfig {
  ExperimentConfig experiment;
  bool write_chart = true;
  std::string canonical;  // normalized echo; hashing this gives the config hash
};

// INI-style sections of key = value pairs; '#' or ';' starts a comment.
// Unknown sections/keys and malformed values raise ConfigError with the
// offending line number.
LoadedConfig parse_config_text(const std::string& text);
LoadedConfig load_config_file(const std::string& path);

std::string canonical_config(const ExperimentConfig& config, bool write_chart);

}  // namespace albench
