#include "dualitylab/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dualitylab/duality.hpp"
#include "dualitylab/parallel.hpp"
#include "dualitylab/semigroup.hpp"
#include "dualitylab/version.hpp"

namespace dualitylab {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& field, const std::string& reason) {
  throw std::invalid_argument("config: " + field + ": " + reason);
}

Rational param_rational(const json& v, const std::string& field) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      schema_error(field, "not an exact fraction");
    }
  }
  if (v.is_number_integer()) return Rational(v.get<long long>());
  schema_error(field, "must be an integer or an exact fraction string like \"1/3\"");
}

std::map<std::string, Rational> parse_params(const json& task) {
  std::map<std::string, Rational> out;
  if (!task.contains("params")) return out;
  if (!task.at("params").is_object()) schema_error("params", "must be an object");
  for (const auto& [key, value] : task.at("params").items()) {
    if (key != "two_j" && key != "two_k" && key != "p" && key != "lambda")
      schema_error("params." + key, "unknown parameter (expected two_j, two_k, p, lambda)");
    out[key] = param_rational(value, "params." + key);
  }
  return out;
}

std::string params_label(const std::map<std::string, Rational>& params) {
  std::string s;
  for (const auto& [k, v] : params) s += " " + k + "=" + to_fraction_string(v);
  return s;
}

json params_json(const std::map<std::string, Rational>& params) {
  json j = json::object();
  for (const auto& [k, v] : params) j[k] = to_fraction_string(v);
  return j;
}

Rational need_param(const std::map<std::string, Rational>& params, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) schema_error("params." + key, "required but missing");
  return it->second;
}

FamilySpec family_from(const std::string& name, const std::map<std::string, Rational>& params) {
  if (name == "charlier") return Charlier{need_param(params, "lambda")};
  if (name == "krawtchouk") {
    const Rational tj = need_param(params, "two_j");
    if (denominator(tj) != 1 || tj < 1) schema_error("params.two_j", "must be a positive integer");
    return Krawtchouk{numerator(tj).convert_to<unsigned>(), need_param(params, "p")};
  }
  if (name == "meixner") return Meixner{need_param(params, "two_k"), need_param(params, "p")};
  if (name == "hermite") return Hermite{};
  if (name == "laguerre") return Laguerre{need_param(params, "two_k")};
  schema_error("family", "unknown family tag '" + name + "'");
}

ProcessSpec process_from(const std::string& name, const std::map<std::string, Rational>& params) {
  if (name == "sep") {
    const Rational tj = need_param(params, "two_j");
    if (denominator(tj) != 1 || tj < 1) schema_error("params.two_j", "must be a positive integer");
    return Sep{numerator(tj).convert_to<unsigned>()};
  }
  if (name == "sip") return Sip{need_param(params, "two_k")};
  if (name == "irw") return Irw{};
  if (name == "bmp") return Bmp{};
  if (name == "bep") return Bep{need_param(params, "two_k")};
  if (name == "kmp") return Kmp{need_param(params, "two_k")};
  if (name == "dkmp") return DualKmp{need_param(params, "two_k")};
  schema_error("process", "unknown process tag '" + name + "'");
}

PairParams pair_params_from(const std::map<std::string, Rational>& params) {
  PairParams pp;
  if (const auto it = params.find("two_j"); it != params.end())
    pp.two_j = numerator(it->second).convert_to<unsigned>();
  if (const auto it = params.find("two_k"); it != params.end()) pp.two_k = it->second;
  if (const auto it = params.find("p"); it != params.end()) pp.p = it->second;
  if (const auto it = params.find("lambda"); it != params.end()) pp.lambda = it->second;
  return pp;
}

// ----- default acceptance grid -------------------------------------------

const std::vector<std::string> kLambdaGrid = {"1/2", "1", "3"};
const std::vector<std::string> kTwoJGrid = {"1", "2", "5"};
const std::vector<std::string> kPGrid = {"1/5", "1/2", "4/5"};
const std::vector<std::string> kTwoKGrid = {"1/2", "1", "3/2", "3"};

std::vector<json> grid_for_family(const std::string& family) {
  std::vector<json> out;
  if (family == "charlier") {
    for (const auto& l : kLambdaGrid) out.push_back({{"lambda", l}});
  } else if (family == "krawtchouk") {
    for (const auto& tj : kTwoJGrid)
      for (const auto& p : kPGrid) out.push_back({{"two_j", tj}, {"p", p}});
  } else if (family == "meixner") {
    for (const auto& tk : kTwoKGrid)
      for (const auto& p : kPGrid) out.push_back({{"two_k", tk}, {"p", p}});
  } else if (family == "hermite") {
    out.push_back(json::object());
  } else if (family == "laguerre") {
    for (const auto& tk : kTwoKGrid) out.push_back({{"two_k", tk}});
  } else {
    schema_error("family", "unknown family tag '" + family + "'");
  }
  return out;
}

std::vector<json> grid_for_pair(const std::string& pair) {
  std::vector<json> out;
  if (pair == "sep-sep") return grid_for_family("krawtchouk");
  if (pair == "sip-sip") return grid_for_family("meixner");
  if (pair == "irw-irw") return grid_for_family("charlier");
  if (pair == "bmp-sip") return grid_for_family("hermite");
  if (pair == "bep-sip" || pair == "kmp-dkmp") return grid_for_family("laguerre");
  schema_error("pair", "unknown pair tag '" + pair + "'");
}

// ----- task runners --------------------------------------------------------

std::vector<TaskRecord> run_structural(const json& task) {
  const std::string fname = task.at("family").get<std::string>();
  const unsigned nmax = task.value("nmax", 10u);
  std::vector<json> instances =
      task.value("grid", false) ? grid_for_family(fname) : std::vector<json>{task.value("params", json::object())};
  std::vector<TaskRecord> records;
  for (const auto& inst : instances) {
    std::map<std::string, Rational> params;
    for (const auto& [k, v] : inst.items()) params[k] = param_rational(v, "params." + k);
    const FamilySpec fam = family_from(fname, params);
    const unsigned cap = family_degree_cap(fam);
    const unsigned hi = std::min(nmax, cap);
    const unsigned gen_to = std::min(nmax + 1, cap);
    const auto seq = generate(fam, gen_to);
    for (unsigned n = 0; n <= hi; ++n) {
      const Poly1 h = hypergeometric_residual(seq, n);
      bool raising_checked = n >= 1 && n + 1 <= gen_to;
      Poly1 r;
      if (raising_checked) r = raising_residual(seq, n);
      TaskRecord rec;
      rec.kind = "verify-structural";
      rec.name = fname + params_label(params) + " n=" + std::to_string(n);
      rec.pass = h.is_zero() && r.is_zero();
      rec.details = {{"family", fname},
                     {"params", params_json(params)},
                     {"n", n},
                     {"hypergeometric_zero", h.is_zero()}};
      if (raising_checked) rec.details["raising_zero"] = r.is_zero();
      if (!h.is_zero()) rec.details["hypergeometric_residual"] = h.to_string();
      if (!r.is_zero()) rec.details["raising_residual"] = r.to_string();
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::vector<TaskRecord> run_orthogonality(const json& task) {
  const std::string fname = task.at("family").get<std::string>();
  const unsigned nmax = task.value("nmax", 10u);
  std::vector<json> instances =
      task.value("grid", false) ? grid_for_family(fname) : std::vector<json>{task.value("params", json::object())};
  std::vector<TaskRecord> records;
  for (const auto& inst : instances) {
    std::map<std::string, Rational> params;
    for (const auto& [k, v] : inst.items()) params[k] = param_rational(v, "params." + k);
    const FamilySpec fam = family_from(fname, params);
    const unsigned hi = std::min(nmax, family_degree_cap(fam));
    const auto seq = generate(fam, hi);
    const auto measure = stationary_measure(fam);
    for (unsigned n = 0; n <= hi; ++n)
      for (unsigned m = 0; m <= hi; ++m) {
        const Rational value = orthogonality_check(seq, measure, n, m);
        const Rational expected = n == m ? closed_norm(fam, n) : Rational(0);
        TaskRecord rec;
        rec.kind = "verify-orthogonality";
        rec.name = fname + params_label(params) + " (n=" + std::to_string(n) +
                   ",m=" + std::to_string(m) + ")";
        rec.pass = value == expected;
        rec.details = {{"family", fname},
                       {"params", params_json(params)},
                       {"n", n},
                       {"m", m},
                       {"value", to_fraction_string(value)},
                       {"expected", to_fraction_string(expected)}};
        records.push_back(std::move(rec));
      }
  }
  return records;
}

std::vector<TaskRecord> run_generator_duality(const json& task) {
  const std::string pname = task.at("pair").get<std::string>();
  const auto tag = pair_from_name(pname);
  if (!tag) schema_error("pair", "unknown pair tag '" + pname + "'");
  const unsigned nmax = task.value("nmax", 8u);
  std::vector<Rational> gauges;
  if (task.contains("gauges"))
    for (const auto& g : task.at("gauges")) gauges.push_back(param_rational(g, "gauges[]"));
  else
    gauges.push_back(Rational(1));
  std::vector<json> instances =
      task.value("grid", false) ? grid_for_pair(pname) : std::vector<json>{task.value("params", json::object())};

  std::vector<std::vector<TaskRecord>> slots(instances.size());
  parallel_for(instances.size(), [&](std::size_t idx, unsigned) {
    const auto& inst = instances[idx];
    std::map<std::string, Rational> params;
    for (const auto& [k, v] : inst.items()) params[k] = param_rational(v, "params." + k);
    const DualityPair base = make_duality_pair(*tag, pair_params_from(params));
    const unsigned hi = std::min(nmax, base.family.index_cap());
    for (const Rational& gauge : gauges) {
      DualityPair pair = base;
      pair.family = base.family.gauge_rescale(gauge);
      for (unsigned n1 = 0; n1 <= hi; ++n1)
        for (unsigned n2 = 0; n2 <= hi; ++n2) {
          const Residual res = verify_generator_duality(pair, n1, n2);
          TaskRecord rec;
          rec.kind = "verify-generator-duality";
          rec.name = pname + params_label(params) +
                     (gauge == 1 ? "" : " gauge=" + to_fraction_string(gauge)) + " (n1=" +
                     std::to_string(n1) + ",n2=" + std::to_string(n2) + ")";
          rec.pass = res.zero();
          rec.details = {{"pair", pname},
                         {"params", params_json(params)},
                         {"gauge", to_fraction_string(gauge)},
                         {"n1", n1},
                         {"n2", n2}};
          if (!res.zero()) rec.details["residual"] = res.value.to_string();
          slots[idx].push_back(std::move(rec));
        }
    }
  });
  std::vector<TaskRecord> records;
  for (auto& s : slots)
    for (auto& r : s) records.push_back(std::move(r));
  return records;
}

std::vector<TaskRecord> run_basis(const json& task) {
  const unsigned nmax = task.value("nmax", 8u);
  std::vector<Rational> lambdas;
  if (task.contains("lambdas"))
    for (const auto& l : task.at("lambdas")) lambdas.push_back(param_rational(l, "lambdas[]"));
  else
    for (const auto& l : kLambdaGrid) lambdas.push_back(parse_rational(l));

  std::vector<TaskRecord> records;
  const auto basis = falling_factorial_basis(nmax);
  for (const Rational& lambda : lambdas) {
    const auto fam = DualityFamily::theorem_normalized(Charlier{lambda});
    const MomentFunctional measure((Poisson{lambda}));
    bool cob_ok = true, gs_ok = true;
    json first_fail;
    for (unsigned n = 0; n <= nmax; ++n) {
      const auto d = change_of_basis(fam, basis, n);
      for (unsigned k = 0; k <= n; ++k) {
        const Rational expected = Rational(binomial(n, k)) * rat_pow(-lambda, -(long)k);
        if (d[k] != expected) {
          cob_ok = false;
          if (first_fail.is_null())
            first_fail = {{"n", n}, {"k", k}, {"got", to_fraction_string(d[k])},
                          {"expected", to_fraction_string(expected)}};
        }
      }
      const Rational b_n = gram_schmidt_normalization(
          [&](unsigned m) { return basis[m]; }, Charlier{lambda}, measure, n);
      if (b_n != rat_pow(-lambda, n)) gs_ok = false;
    }
    TaskRecord rec;
    rec.kind = "verify-basis";
    rec.name = "irw change-of-basis + gram-schmidt lambda=" + to_fraction_string(lambda);
    rec.pass = cob_ok && gs_ok;
    rec.details = {{"lambda", to_fraction_string(lambda)},
                   {"change_of_basis_matches_binomial_pattern", cob_ok},
                   {"gram_schmidt_b_n_equals_(-lambda)^n", gs_ok}};
    if (!first_fail.is_null()) rec.details["first_mismatch"] = first_fail;
    records.push_back(std::move(rec));

    const Rational sym = selfduality_symmetry(fam, nmax, nmax);
    TaskRecord sy;
    sy.kind = "verify-basis";
    sy.name = "selfduality-symmetry charlier lambda=" + to_fraction_string(lambda);
    sy.pass = sym == 0;
    sy.details = {{"family", "charlier"},
                  {"lambda", to_fraction_string(lambda)},
                  {"max_discrepancy", to_fraction_string(sym)}};
    records.push_back(std::move(sy));
  }

  // hypergeometric-form Krawtchouk and Meixner symmetry over their grids
  for (const auto& inst : grid_for_family("krawtchouk")) {
    std::map<std::string, Rational> params;
    for (const auto& [k, v] : inst.items()) params[k] = param_rational(v, "params." + k);
    const FamilySpec f = family_from("krawtchouk", params);
    const auto fam = DualityFamily::hypergeometric_form(f);
    const unsigned hi = std::min(nmax, family_degree_cap(f));
    const Rational sym = selfduality_symmetry(fam, hi, hi);
    TaskRecord rec;
    rec.kind = "verify-basis";
    rec.name = "selfduality-symmetry krawtchouk(hyp)" + params_label(params);
    rec.pass = sym == 0;
    rec.details = {{"family", "krawtchouk"},
                   {"params", params_json(params)},
                   {"max_discrepancy", to_fraction_string(sym)}};
    records.push_back(std::move(rec));
  }
  for (const auto& inst : grid_for_family("meixner")) {
    std::map<std::string, Rational> params;
    for (const auto& [k, v] : inst.items()) params[k] = param_rational(v, "params." + k);
    const auto fam = DualityFamily::hypergeometric_form(family_from("meixner", params));
    const Rational sym = selfduality_symmetry(fam, nmax, nmax);
    TaskRecord rec;
    rec.kind = "verify-basis";
    rec.name = "selfduality-symmetry meixner(hyp)" + params_label(params);
    rec.pass = sym == 0;
    rec.details = {{"family", "meixner"},
                   {"params", params_json(params)},
                   {"max_discrepancy", to_fraction_string(sym)}};
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<TaskRecord> run_detailed_balance(const json& task) {
  const std::string pname = task.at("process").get<std::string>();
  const auto params = parse_params(task);
  const ProcessSpec proc = process_from(pname, params);
  const Graph g = resolve_graph(task.at("graph").get<std::string>());
  const Rational marginal = std::holds_alternative<Irw>(proc) ? need_param(params, "lambda")
                                                              : need_param(params, "p");
  std::vector<long> totals;
  if (task.contains("totals"))
    for (const auto& t : task.at("totals")) totals.push_back(t.get<long>());
  else
    totals = {1, 2, 3};
  std::vector<TaskRecord> records;
  for (long total : totals) {
    if (const auto* sep = std::get_if<Sep>(&proc))
      if (total > static_cast<long>(sep->two_j) * g.vertex_count) continue;
    const Rational residual = detailed_balance_residual(proc, g, total, marginal);
    TaskRecord rec;
    rec.kind = "verify-detailed-balance";
    rec.name = pname + params_label(params) + " " + task.at("graph").get<std::string>() +
               " total=" + std::to_string(total);
    rec.pass = residual == 0;
    rec.details = {{"process", pname},
                   {"params", params_json(params)},
                   {"graph", task.at("graph").get<std::string>()},
                   {"total", total},
                   {"max_residual", to_fraction_string(residual)}};
    records.push_back(std::move(rec));
  }
  return records;
}

SemigroupPair pair_for_semigroup(const std::string& tag,
                                 const std::map<std::string, Rational>& params) {
  if (tag == "dkmp-dkmp") {
    const Rational two_k = need_param(params, "two_k");
    const Rational p = need_param(params, "p");
    return dkmp_selfdual_pair(two_k, p);
  }
  const auto t = pair_from_name(tag);
  if (!t) schema_error("pair", "unknown pair tag '" + tag + "'");
  return semigroup_pair(make_duality_pair(*t, pair_params_from(params)));
}

json estimate_json(const SemigroupEstimate& e) {
  json j{{"value", e.value}, {"standard_error", e.standard_error}, {"method", e.method}};
  if (e.method == "uniformization") j["truncation_bound"] = e.truncation_bound;
  if (e.method == "monte-carlo") {
    j["replicas"] = e.replicas;
    j["seed"] = e.seed;
  }
  return j;
}

Config config_for_process(const ProcessSpec& proc, const json& arr, const std::string& field) {
  if (!arr.is_array()) schema_error(field, "must be an array");
  if (process_discrete(proc)) {
    DiscreteConfig x;
    for (const auto& v : arr) x.push_back(v.get<long>());
    return x;
  }
  ContinuousConfig x;
  for (const auto& v : arr) x.push_back(v.get<double>());
  return x;
}

std::vector<TaskRecord> run_semigroup_check(const json& task) {
  const std::string pname = task.at("pair").get<std::string>();
  const auto params = parse_params(task);
  const SemigroupPair pair = pair_for_semigroup(pname, params);
  const Graph g = resolve_graph(task.at("graph").get<std::string>());

  McOptions opt;
  opt.replicas = task.value("replicas", 100000L);
  opt.seed = task.value("seed", 1ULL);
  opt.dt = task.value("dt", 0.0);
  opt.tol = task.value("tol", 1e-8);
  const std::string method = task.value("method", std::string("auto"));
  if (method == "mc-forward") opt.force_mc_forward = true;
  else if (method == "mc-both") opt.force_mc_forward = opt.force_mc_dual = true;
  else if (method != "auto") schema_error("method", "expected auto, mc-forward or mc-both");
  const double conservation_tol = task.value("conservation_tol", 1e-12);

  std::vector<TaskRecord> records;

  if (task.contains("random_tuples")) {
    const int tuples = task.at("random_tuples").get<int>();
    const double t_max = task.value("t_max", 2.0);
    const long total_max = task.value("total_max", 4L);
    std::mt19937_64 rng(opt.seed);
    long site_cap = std::numeric_limits<long>::max();
    if (const auto* sep = std::get_if<Sep>(&pair.forward)) site_cap = sep->two_j;
    const auto draw_config = [&]() {
      DiscreteConfig x(g.vertex_count, 0);
      do {
        long budget = total_max;
        for (auto& v : x) {
          const long cap = std::min(site_cap, budget);
          v = static_cast<long>(rng() % static_cast<std::uint64_t>(cap + 1));
          budget -= v;
        }
      } while (std::all_of(x.begin(), x.end(), [](long v) { return v == 0; }));
      return x;
    };
    for (int i = 0; i < tuples; ++i) {
      const DiscreteConfig x0 = draw_config();
      const DiscreteConfig n0 = draw_config();
      const double t = t_max * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const auto cmp = mc_duality_check(pair, g, x0, n0, t, opt);
      TaskRecord rec;
      rec.kind = "semigroup-check";
      rec.name = pname + params_label(params) + " " + task.at("graph").get<std::string>() +
                 " tuple " + std::to_string(i);
      rec.pass = cmp.pass;
      rec.details = {{"pair", pname},
                     {"params", params_json(params)},
                     {"x0", x0},
                     {"n0", n0},
                     {"t", t},
                     {"forward", estimate_json(cmp.forward)},
                     {"dual", estimate_json(cmp.dual)},
                     {"difference", cmp.difference},
                     {"tolerance", opt.tol}};
      records.push_back(std::move(rec));
    }
    return records;
  }

  const Config x0 = config_for_process(pair.forward, task.at("x0"), "x0");
  DiscreteConfig n0;
  for (const auto& v : task.at("n0")) n0.push_back(v.get<long>());
  const double t = task.at("t").get<double>();
  const int trials = task.value("trials", 1);
  const int min_pass = task.value("min_pass", trials);

  int passed_trials = 0;
  double worst_conservation = 0;
  json trial_details = json::array();
  for (int trial = 0; trial < trials; ++trial) {
    McOptions topt = opt;
    topt.seed = opt.seed + static_cast<std::uint64_t>(trial);
    auto cmp = mc_duality_check(pair, g, x0, n0, t, topt);
    bool trial_pass = cmp.pass;
    if (task.contains("expect")) {
      const double expect = task.at("expect").get<double>();
      const double gap = std::abs(cmp.forward.value - expect);
      const double allowed = cmp.forward.standard_error > 0
                                 ? 3.0 * cmp.forward.standard_error
                                 : task.value("expect_tol", 1e-8);
      trial_pass = trial_pass && gap <= allowed;
    }
    const double cons = std::max(cmp.forward_conservation, cmp.dual_conservation);
    worst_conservation = std::max(worst_conservation, cons);
    trial_pass = trial_pass && cons <= conservation_tol;
    passed_trials += trial_pass ? 1 : 0;
    trial_details.push_back({{"seed", topt.seed},
                             {"forward", estimate_json(cmp.forward)},
                             {"dual", estimate_json(cmp.dual)},
                             {"difference", cmp.difference},
                             {"combined_se", cmp.combined_se},
                             {"conservation", cons},
                             {"pass", trial_pass}});
  }
  TaskRecord rec;
  rec.kind = "semigroup-check";
  rec.name = pname + params_label(params) + " " + task.at("graph").get<std::string>() + " t=" +
             std::to_string(t) + (trials > 1 ? " trials=" + std::to_string(trials) : "");
  rec.pass = passed_trials >= min_pass;
  rec.details = {{"pair", pname},
                 {"params", params_json(params)},
                 {"t", t},
                 {"trials", trials},
                 {"passed_trials", passed_trials},
                 {"min_pass", min_pass},
                 {"max_conservation_drift", worst_conservation},
                 {"trial_results", std::move(trial_details)}};
  records.push_back(std::move(rec));
  return records;
}

std::vector<TaskRecord> run_simulate(const json& task, const std::optional<std::string>& csv_override) {
  const std::string pname = task.at("process").get<std::string>();
  const auto params = parse_params(task);
  const ProcessSpec proc = process_from(pname, params);
  const Graph g = resolve_graph(task.at("graph").get<std::string>());
  const Config x0 = config_for_process(proc, task.at("x0"), "x0");
  const double t = task.at("t").get<double>();
  const long replicas = task.value("replicas", 1L);
  const std::uint64_t seed = task.value("seed", 1ULL);
  const double dt = task.value("dt", 1e-3 * std::max(t, 1e-12));
  const double conservation_tol = task.value("conservation_tol", 1e-9);
  std::string csv_path = task.value("csv", std::string());
  if (csv_override) csv_path = *csv_override;

  std::ofstream csv;
  if (!csv_path.empty()) {
    csv.open(csv_path);
    if (!csv) schema_error("csv", "cannot open " + csv_path + " for writing");
    csv << "replica,time,site,value\n";
    csv.precision(17);
  }

  const bool diffusion = std::holds_alternative<Bmp>(proc) || std::holds_alternative<Bep>(proc);
  double worst = 0;
  std::vector<double> final_mean(g.vertex_count, 0.0);
  for (long r = 0; r < replicas; ++r) {
    const std::uint64_t replica_seed = seed + static_cast<std::uint64_t>(r);
    SimPath path = diffusion
                       ? diffusion_simulate(proc, g, std::get<ContinuousConfig>(x0), t, dt, replica_seed)
                       : gillespie_simulate(proc, g, x0, t, replica_seed);
    worst = std::max(worst, path.conservation_drift);
    for (std::size_t e = 0; e < path.times.size(); ++e)
      if (csv.is_open())
        for (int site = 0; site < g.vertex_count; ++site)
          csv << r << "," << path.times[e] << "," << site << "," << path.configs[e][site] << "\n";
    for (int site = 0; site < g.vertex_count; ++site)
      final_mean[site] += path.configs.back()[site] / static_cast<double>(replicas);
  }

  TaskRecord rec;
  rec.kind = "simulate";
  rec.name = pname + params_label(params) + " " + task.at("graph").get<std::string>() + " t=" +
             std::to_string(t) + " replicas=" + std::to_string(replicas);
  rec.pass = worst <= conservation_tol;
  rec.details = {{"process", pname},
                 {"params", params_json(params)},
                 {"t", t},
                 {"replicas", replicas},
                 {"seed", seed},
                 {"max_conservation_drift", worst},
                 {"conservation_tol", conservation_tol},
                 {"final_mean", final_mean}};
  if (!csv_path.empty()) rec.details["csv"] = csv_path;
  return {rec};
}

json apply_overrides(json task, const CampaignOverrides& o) {
  if (o.pair && (task.value("kind", "") == "verify-generator-duality" ||
                 task.value("kind", "") == "semigroup-check"))
    task["pair"] = *o.pair;
  if (o.nmax) task["nmax"] = *o.nmax;
  if (!o.params.empty()) {
    json p = task.value("params", json::object());
    for (const auto& [k, v] : o.params) p[k] = v;
    task["params"] = p;
  }
  if (o.graph && task.contains("graph")) task["graph"] = *o.graph;
  if (o.t && task.contains("t")) task["t"] = *o.t;
  if (o.replicas) task["replicas"] = *o.replicas;
  if (o.seed) task["seed"] = *o.seed;
  return task;
}

}  // namespace

Graph resolve_graph(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    const int n = std::atoi(spec.c_str() + colon + 1);
    if (kind == "path" && n >= 1) return path_graph(n);
    if (kind == "cycle" && n >= 3) {
      std::vector<std::pair<int, int>> edges;
      for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
      return make_graph(n, std::move(edges));
    }
    if (kind == "complete" && n >= 2) {
      std::vector<std::pair<int, int>> edges;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      return make_graph(n, std::move(edges));
    }
  }
  return load_graph(spec);
}

Report run_campaign(const nlohmann::json& config, const CampaignOverrides& overrides) {
  if (!config.is_object()) throw std::invalid_argument("config: top level must be an object");
  if (!config.contains("tasks") || !config.at("tasks").is_array())
    throw std::invalid_argument("config: tasks: required array is missing");

  Report report;
  report.tool_version = kVersion;
  report.timestamp = iso_timestamp_now();

  for (const auto& raw : config.at("tasks")) {
    const json task = apply_overrides(raw, overrides);
    const std::string kind = task.value("kind", "");
    std::vector<TaskRecord> recs;
    if (kind == "verify-structural") recs = run_structural(task);
    else if (kind == "verify-orthogonality") recs = run_orthogonality(task);
    else if (kind == "verify-generator-duality") recs = run_generator_duality(task);
    else if (kind == "verify-basis") recs = run_basis(task);
    else if (kind == "verify-detailed-balance") recs = run_detailed_balance(task);
    else if (kind == "semigroup-check") recs = run_semigroup_check(task);
    else if (kind == "simulate") recs = run_simulate(task, overrides.csv);
    else schema_error("kind", "unknown task kind '" + kind + "'");
    for (auto& r : recs) report.records.push_back(std::move(r));
  }

  std::string out = config.value("out", std::string());
  if (overrides.out) out = *overrides.out;
  if (!out.empty()) report.write(out);
  return report;
}

Report run_campaign_file(const std::string& config_path, const CampaignOverrides& overrides) {
  std::ifstream in(config_path);
  if (!in) throw std::invalid_argument("config: cannot open " + config_path);
  json config;
  try {
    in >> config;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + config_path + " is not valid JSON: " + e.what());
  }
  return run_campaign(config, overrides);
}

namespace {

json c8_task(const std::string& pair, json params, json x0, double t, double dt,
             std::uint64_t seed) {
  json task{{"kind", "semigroup-check"}, {"criterion", 8},      {"pair", pair},
            {"graph", "path:2"},         {"x0", std::move(x0)}, {"n0", json::array({1, 1})},
            {"t", t},                    {"replicas", 100000},  {"seed", seed},
            {"trials", 40},              {"min_pass", 38},      {"method", "mc-forward"},
            {"conservation_tol", 1e-12}};
  if (!params.empty()) task["params"] = std::move(params);
  if (dt > 0) task["dt"] = dt;
  return task;
}

}  // namespace

nlohmann::json acceptance_tasks_for_criterion(int criterion) {
  json tasks = json::array();
  const auto families = {"charlier", "krawtchouk", "meixner", "hermite", "laguerre"};
  const auto pairs = {"sep-sep", "sip-sip", "irw-irw", "bmp-sip", "bep-sip", "kmp-dkmp"};
  switch (criterion) {
    case 1:
      for (const auto* f : families)
        tasks.push_back({{"kind", "verify-structural"}, {"criterion", 1}, {"family", f},
                         {"grid", true}, {"nmax", 10}});
      break;
    case 2:
      for (const auto* f : families)
        tasks.push_back({{"kind", "verify-orthogonality"}, {"criterion", 2}, {"family", f},
                         {"grid", true}, {"nmax", 10}});
      break;
    case 3:
      for (const auto* p : pairs)
        tasks.push_back({{"kind", "verify-generator-duality"}, {"criterion", 3}, {"pair", p},
                         {"grid", true}, {"nmax", 8}});
      break;
    case 4:
      for (const auto* p : pairs)
        tasks.push_back({{"kind", "verify-generator-duality"}, {"criterion", 4}, {"pair", p},
                         {"grid", true}, {"nmax", 8},
                         {"gauges", json::array({"7/3", "-2/5", "5"})}});
      break;
    case 5:
      tasks.push_back({{"kind", "verify-basis"}, {"criterion", 5},
                       {"lambdas", json::array({"1/2", "1", "3"})}, {"nmax", 8}});
      break;
    case 6:
      for (const std::string graph : {"path:2", "path:3", "cycle:3"}) {
        for (const auto& inst : grid_for_family("krawtchouk")) {
          json t{{"kind", "verify-detailed-balance"}, {"criterion", 6}, {"process", "sep"},
                 {"params", inst}, {"graph", graph}, {"totals", json::array({1, 2, 3, 4})}};
          tasks.push_back(std::move(t));
        }
        for (const auto& inst : grid_for_family("meixner")) {
          json t{{"kind", "verify-detailed-balance"}, {"criterion", 6}, {"process", "sip"},
                 {"params", inst}, {"graph", graph}, {"totals", json::array({1, 2, 3, 4})}};
          tasks.push_back(std::move(t));
        }
        for (const auto& inst : grid_for_family("charlier")) {
          json t{{"kind", "verify-detailed-balance"}, {"criterion", 6}, {"process", "irw"},
                 {"params", inst}, {"graph", graph}, {"totals", json::array({1, 2, 3, 4})}};
          tasks.push_back(std::move(t));
        }
      }
      break;
    case 7:
      for (const std::string graph : {"path:2", "path:3"}) {
        tasks.push_back({{"kind", "semigroup-check"}, {"criterion", 7}, {"pair", "sep-sep"},
                         {"params", {{"two_j", "2"}, {"p", "1/2"}}}, {"graph", graph},
                         {"random_tuples", 10}, {"t_max", 2.0}, {"total_max", 4},
                         {"seed", 7001}, {"tol", 1e-8}});
        tasks.push_back({{"kind", "semigroup-check"}, {"criterion", 7}, {"pair", "sip-sip"},
                         {"params", {{"two_k", "1"}, {"p", "1/2"}}}, {"graph", graph},
                         {"random_tuples", 10}, {"t_max", 2.0}, {"total_max", 4},
                         {"seed", 7002}, {"tol", 1e-8}});
        tasks.push_back({{"kind", "semigroup-check"}, {"criterion", 7}, {"pair", "irw-irw"},
                         {"params", {{"lambda", "1"}}}, {"graph", graph},
                         {"random_tuples", 10}, {"t_max", 2.0}, {"total_max", 4},
                         {"seed", 7003}, {"tol", 1e-8}});
        tasks.push_back({{"kind", "semigroup-check"}, {"criterion", 7}, {"pair", "dkmp-dkmp"},
                         {"params", {{"two_k", "1"}, {"p", "1/2"}}}, {"graph", graph},
                         {"random_tuples", 10}, {"t_max", 2.0}, {"total_max", 4},
                         {"seed", 7004}, {"tol", 1e-8}});
      }
      break;
    case 8:
      tasks.push_back(c8_task("bmp-sip", json::object(), json::array({1.0, 0.5}), 0.5,
                              0.03125, 90001));
      tasks.push_back(c8_task("bep-sip", {{"two_k", "1"}}, json::array({1.2, 0.8}), 0.25,
                              0.00025, 90002));
      tasks.push_back(c8_task("kmp-dkmp", {{"two_k", "1"}}, json::array({1.5, 0.5}), 1.0, 0.0,
                              90003));
      break;
    case 9:
      tasks.push_back({{"kind", "semigroup-check"}, {"criterion", 9}, {"pair", "irw-irw"},
                       {"params", {{"lambda", "1"}}}, {"graph", "path:2"},
                       {"x0", json::array({1, 0})}, {"n0", json::array({1, 0})}, {"t", 1.0},
                       {"method", "auto"}, {"tol", 1e-8},
                       {"expect", 0.43233235838169365}, {"expect_tol", 1e-8}});
      tasks.push_back({{"kind", "semigroup-check"}, {"criterion", 9}, {"pair", "irw-irw"},
                       {"params", {{"lambda", "1"}}}, {"graph", "path:2"},
                       {"x0", json::array({1, 0})}, {"n0", json::array({1, 0})}, {"t", 1.0},
                       {"method", "mc-forward"}, {"replicas", 100000}, {"seed", 424242},
                       {"expect", 0.43233235838169365}});
      break;
    default:
      throw std::invalid_argument("acceptance criterion must be 1..9");
  }
  return tasks;
}

nlohmann::json default_acceptance_campaign() {
  json tasks = json::array();
  for (int c = 1; c <= 9; ++c)
    for (const auto& t : acceptance_tasks_for_criterion(c)) tasks.push_back(t);
  return json{{"tasks", std::move(tasks)}};
}

std::string list_catalog() {
  std::ostringstream os;
  os << "Duality catalog (Theorem normalizations; one factor per site)\n\n";
  os << "Self-duality:\n";
  os << "  SEP(j) <-> SEP(j)    Binomial(2j, p), 2j positive integer, p in (0,1):"
        "  K_n(x) / C(2j, n), n <= 2j\n";
  os << "  SIP(k) <-> SIP(k)    NegativeBinomial(2k, p), 2k > 0, p in (0,1):"
        "  M_n(x) / (2k)_n\n";
  os << "  IRW    <-> IRW       Poisson(lambda), lambda > 0:  C_n(x)\n";
  os << "\nDuality:\n";
  os << "  BMP ↔ SIP(1/4): Hermite H_{2n}/(2n−1)!!  (Gaussian, variance 1/2;"
        " dual SIP rates x4)\n";
  os << "  BEP(k) ↔ SIP(k): Laguerre n! L_n^(2k-1)(x) / (2k)_n  (Gamma(2k), 2k > 0)\n";
  os << "  KMP(k) ↔ dual-KMP(k): Laguerre n! L_n^(2k-1)(x) / (2k)_n  (Gamma(2k), 2k > 0)\n";
  return os.str();
}

}  // namespace dualitylab
