#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dualitylab/campaign.hpp"
#include "dualitylab/version.hpp"

namespace {

using dualitylab::CampaignOverrides;

// --params two_k=3/2 (repeatable)
void collect_params(const std::vector<std::string>& kvs, CampaignOverrides& o) {
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--params", "expected key=value, got '" + kv + "'");
    o.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
}

int finish(const dualitylab::Report& report, bool quiet) {
  if (!quiet) {
    for (const auto& r : report.records)
      if (!r.pass) std::cout << "FAIL  " << r.kind << "  " << r.name << "\n";
    std::cout << "passed " << report.passed() << ", failed " << report.failed() << "\n";
  }
  return report.failed() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"duality-lab: exact certification and stochastic simulation of "
               "Markov-process dualities with orthogonal-polynomial duality functions"};
  app.set_version_flag("--version", dualitylab::kVersion);
  app.require_subcommand(1);

  std::string config_path, graph, out, csv, pair, process, x0_csv, report_path;
  std::vector<std::string> params;
  int nmax = -1;
  double t = -1, dt = 0;
  long replicas = -1;
  std::uint64_t seed = 0;
  bool have_seed = false;

  auto* verify = app.add_subcommand("verify", "run a verification campaign (defaults to the "
                                              "shipped acceptance grid)");
  verify->add_option("--config", config_path, "campaign config (JSON)");
  verify->add_option("--pair", pair, "duality pair tag (sep-sep, sip-sip, irw-irw, bmp-sip, "
                                     "bep-sip, kmp-dkmp)");
  verify->add_option("--nmax", nmax, "index grid bound");
  verify->add_option("--params", params, "parameters as key=value with exact fractions")
      ->take_all();
  verify->add_option("--graph", graph, "graph: edge-list file, or path:N / cycle:N / complete:N");
  verify->add_option("--t", t, "time horizon for semigroup tasks");
  verify->add_option("--replicas", replicas, "Monte Carlo replicas");
  verify->add_option("--seed", seed, "master seed")->each([&](const std::string&) { have_seed = true; });
  verify->add_option("--out", out, "write the JSON report here");
  verify->add_option("--csv", csv, "write CSV samples here");

  auto* simulate = app.add_subcommand("simulate", "simulate one process and write sample paths");
  simulate->add_option("--process", process, "process tag (sep, sip, irw, bmp, bep, kmp, dkmp)")
      ->required();
  simulate->add_option("--params", params, "parameters as key=value with exact fractions")
      ->take_all();
  simulate->add_option("--graph", graph, "graph spec")->required();
  simulate->add_option("--x0", x0_csv, "initial configuration, comma separated")->required();
  simulate->add_option("--t", t, "time horizon")->required();
  simulate->add_option("--replicas", replicas, "number of paths");
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--dt", dt, "diffusion time step (default 1e-3 * t)");
  simulate->add_option("--csv", csv, "CSV output path");
  simulate->add_option("--out", out, "write the JSON report here");

  auto* catalog = app.add_subcommand("catalog", "print the duality pairs of the theorem tables");

  auto* report_cmd = app.add_subcommand("report", "re-read a report and print its summary");
  report_cmd->add_option("--in", report_path, "report JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (catalog->parsed()) {
      std::cout << dualitylab::list_catalog();
      return 0;
    }
    if (report_cmd->parsed()) {
      const auto rep = dualitylab::Report::read(report_path);
      std::cout << "tool " << rep.tool_version << " at " << rep.timestamp << "\n";
      return finish(rep, false);
    }

    CampaignOverrides o;
    collect_params(params, o);
    if (!pair.empty()) o.pair = pair;
    if (nmax >= 0) o.nmax = nmax;
    if (!graph.empty()) o.graph = graph;
    if (t >= 0) o.t = t;
    if (replicas >= 0) o.replicas = replicas;
    if (have_seed) o.seed = seed;
    if (!out.empty()) o.out = out;
    if (!csv.empty()) o.csv = csv;

    if (verify->parsed()) {
      dualitylab::Report rep;
      if (!config_path.empty()) {
        rep = dualitylab::run_campaign_file(config_path, o);
      } else if (!pair.empty()) {
        nlohmann::json task{{"kind", "verify-generator-duality"}, {"pair", pair}};
        if (nmax >= 0) task["nmax"] = nmax;
        rep = dualitylab::run_campaign(nlohmann::json{{"tasks", {task}}}, o);
      } else {
        rep = dualitylab::run_campaign(dualitylab::default_acceptance_campaign(), o);
      }
      return finish(rep, false);
    }

    if (simulate->parsed()) {
      nlohmann::json x0 = nlohmann::json::array();
      std::stringstream ss(x0_csv);
      std::string item;
      while (std::getline(ss, item, ',')) x0.push_back(std::stod(item));
      nlohmann::json task{{"kind", "simulate"}, {"process", process}, {"graph", graph},
                          {"x0", x0},           {"t", t}};
      if (dt > 0) task["dt"] = dt;
      if (replicas >= 0) task["replicas"] = replicas;
      if (have_seed) task["seed"] = seed;
      dualitylab::Report rep = dualitylab::run_campaign(nlohmann::json{{"tasks", {task}}}, o);
      return finish(rep, false);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
