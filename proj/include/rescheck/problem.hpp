#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rescheck/responsibility.hpp"

namespace rescheck {

/// A self-describing problem file: atom partition, named formulas, agent and
/// environment strategies, and histories. Everything cross-validates on load.
struct Problem {
  AtomPartition partition;
  std::map<std::string, std::string> formula_texts;
  std::map<std::string, Formula> formulas;
  std::map<std::string, AgentStrategy> strategies;
  std::map<std::string, EnvStrategy> env_strategies;
  std::map<std::string, History> histories;

  static Problem from_json(const nlohmann::json& j);
  static Problem from_file(const std::string& path);

  /// Resolves a name from the formula table, or parses inline text in which
  /// identifiers may reference named formulas.
  Formula formula(const std::string& name_or_text) const;
  const AgentStrategy& strategy(const std::string& name) const;
  const EnvStrategy& env_strategy(const std::string& name) const;
  const History& history(const std::string& name) const;
};

/// The bundled plant-watering corpus: one two-step day, agent atom w (water),
/// environment atom r (rain), goals phi1/phi2/phi3, vacuous spec E1, the
/// strategies sigma1/sigma2/sigma3 and a rainy-evening environment.
nlohmann::json plant_example_json();

nlohmann::json trace_to_json(const Trace& t);
History history_from_json(const nlohmann::json& j, const AtomPartition& p);
nlohmann::json verdict_to_json(const Verdict& v, const AtomPartition& p, const std::string& kind);
nlohmann::json report_to_json(const ResponsibilityReport& r, const AtomPartition& p);

}  // namespace rescheck
