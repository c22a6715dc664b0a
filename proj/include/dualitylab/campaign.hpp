#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "dualitylab/processes.hpp"
#include "dualitylab/report.hpp"

namespace dualitylab {

// CLI flags override the corresponding config-file fields on every task.
struct CampaignOverrides {
  std::optional<std::string> pair;
  std::optional<int> nmax;
  std::map<std::string, std::string> params;  // exact fraction strings
  std::optional<std::string> graph;
  std::optional<double> t;
  std::optional<long> replicas;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> csv;
};

// Task kinds: verify-structural, verify-orthogonality, verify-generator-duality,
// verify-basis, verify-detailed-balance, semigroup-check, simulate.
Report run_campaign(const nlohmann::json& config, const CampaignOverrides& overrides = {});
Report run_campaign_file(const std::string& config_path, const CampaignOverrides& overrides = {});

// The full acceptance grid as a campaign config; criterion k in 1..9 selects
// the matching subset of tasks.
nlohmann::json default_acceptance_campaign();
nlohmann::json acceptance_tasks_for_criterion(int criterion);

// The Theorem 1.4 tables: three self-duality rows, three duality rows.
std::string list_catalog();

// "path:N", "cycle:N", "complete:N" or an edge-list file path.
Graph resolve_graph(const std::string& spec);

}  // namespace dualitylab
