// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include "capid/error.hpp"
#include "capid/identification.hpp"
#include "capid/info_spec.hpp"
#include "capid/simulate.hpp"
#include "capid/updating.hpp"
#include "json_io.hpp"

namespace capid::cli {

namespace {

constexpr std::size_t kDefaultSweepDenominator = 12;

struct Input {
  std::string bytes;
  Json doc;
};

template <Scalar T>
IdentificationProblem<T> identification_problem(const LoadedProblem<T>& p) {
  if (!p.lambda) throw ValidationError("problem has no \"lambda\"");
  if (p.has_vertex_rules()) throw ValidationError("this command needs capacity-based info specs, not vertex lists");
  std::vector<RuleSpec<T>> rules;
  for (const auto& r : p.rules) rules.push_back({r.id, r.carrier, build_capacity(*r.spec)});
  return IdentificationProblem<T>(p.ground, std::move(rules), *p.lambda);
}

template <Scalar T>
VertexSetProblem<T> vertex_set_problem(const LoadedProblem<T>& p) {
  if (!p.lambda) throw ValidationError("problem has no \"lambda\"");
  VertexSetProblem<T> out{p.ground, {}, *p.lambda};
  for (const auto& r : p.rules) {
    out.rules.push_back({r.id, r.spec ? core_vertices(build_capacity(*r.spec)) : r.vertex_list});
  }
  return out;
}

template <Scalar T>
Measure<T> required_q(const RunConfig& config, const LoadedProblem<T>& p) {
  if (config.q) return q_from_json<T>(Json::parse(*config.q), p);
  if (p.options.contains("q")) return q_from_json<T>(p.options["q"], p);
  throw ValidationError("this command needs Q (--q or options.q)");
}

template <Scalar T>
Json verdict_to_json(const GroundSet& ground, const Verdict<T>& v) {
  Json out = Json::object();
  out["rationalizes"] = v.rationalizes;
  out["total_violations"] = v.total_violations;
  Json list = Json::array();
  for (const auto& violation : v.violated) {
    list.push_back({{"subset", subset_to_json(ground, violation.subset)},
                    {"shortfall", scalar_to_json(violation.shortfall)}});
  }
  out["violated"] = std::move(list);
  out["truncated"] = v.total_violations > v.violated.size();
  return out;
}

template <Scalar T>
Json rows_to_json(const LoadedProblem<T>& p, const std::vector<DominanceRow<T>>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json coefficients = Json::object();
    for (std::size_t d = 0; d < row.coefficients.size(); ++d) {
      if (!is_zero(row.coefficients[d])) coefficients[p.rules[d].id] = scalar_to_json(row.coefficients[d]);
    }
    out.push_back({{"subset", subset_to_json(p.ground, row.subset)},
                   {"lambda", scalar_to_json(row.bound)},
                   {"coefficients", std::move(coefficients)}});
  }
  return out;
}

template <Scalar T>
Json cmd_check(const RunConfig& config, const LoadedProblem<T>& p) {
  const Measure<T> q = required_q(config, p);
  if (p.has_vertex_rules()) {
    const Verdict<T> v = necessary_check(vertex_set_problem(p), q);
    Json out = verdict_to_json(p.ground, v);
    out["method"] = "lower-envelope";
    // Without a core assumption a pass is only consistent with rationalizability.
    out["conclusive"] = !v.rationalizes;
    return out;
  }
  const auto problem = identification_problem(p);
  Json out = verdict_to_json(p.ground, check_rationalizes(problem, q));
  if (p.options.value("list_constraints", false)) {
    out["nonredundant_constraints"] = rows_to_json(p, nonredundant_constraints(problem));
  }
  return out;
}

template <Scalar T>
Json cmd_exists(const RunConfig&, const LoadedProblem<T>& p) {
  Json out = Json::object();
  if (p.has_vertex_rules()) {
    auto q = necessary_exists(vertex_set_problem(p));
    out["method"] = "lower-envelope";
    out["refuted"] = !q.has_value();
    out["q"] = q ? q_to_json(p, *q) : Json();
    return out;
  }
  auto q = exists_rationalizing(identification_problem(p));
  out["rationalizable"] = q.has_value();
  out["q"] = q ? q_to_json(p, *q) : Json();
  return out;
}

template <Scalar T>
Json cmd_bounds(const RunConfig&, const LoadedProblem<T>& p) {
  Json out = Json::object();
  try {
    Json rows = Json::array();
    for (const auto& b : probability_bounds(identification_problem(p))) {
      rows.push_back({{"id", b.id},
                      {"lower", scalar_to_json(b.lower)},
                      {"upper", scalar_to_json(b.upper)},
                      {"argmin", q_to_json(p, b.argmin)},
                      {"argmax", q_to_json(p, b.argmax)}});
    }
    out["identified_set"] = "nonempty";
    out["bounds"] = std::move(rows);
  } catch (const InfeasibleSet&) {
    out["identified_set"] = "empty";
    out["bounds"] = Json::array();
  }
  return out;
}

template <Scalar T>
Json cmd_vertices(const RunConfig&, const LoadedProblem<T>& p) {
  Json out = Json::object();
  Json list = Json::array();
  try {
    for (const auto& v : identified_vertices(identification_problem(p))) list.push_back(q_to_json(p, v));
    out["identified_set"] = "nonempty";
  } catch (const InfeasibleSet&) {
    out["identified_set"] = "empty";
  }
  out["count"] = list.size();
  out["vertices"] = std::move(list);
  return out;
}

template <Scalar T>
Json cmd_witness(const RunConfig& config, const LoadedProblem<T>& p) {
  const auto problem = identification_problem(p);
  const Measure<T> q = required_q(config, p);
  const Verdict<T> verdict = check_rationalizes(problem, q);
  Json out = Json::object();
  out["rationalizes"] = verdict.rationalizes;
  if (!verdict.rationalizes) {
    out["verdict"] = verdict_to_json(p.ground, verdict);
    out["witnesses"] = Json();
    return out;
  }
  Json list = Json::array();
  for (const auto& w : witness_decomposition(problem, q)) {
    Json entry = {{"rule", w.rule_id}, {"rho", measure_to_json(p.ground, w.rho)}};
    const auto& rule = p.rules[p.rule_index(w.rule_id)];
    if (rule.decision) {
      const std::vector<Measure<T>> pi =
          construct_menu_measures<T>(std::span<const Measure<T>>(&w.rho, 1),
                                     std::span<const DecisionRule>(&*rule.decision, 1), *rule.menus);
      entry["menu_distribution"] = measure_to_json(rule.menus->as_ground_set(), pi.front());
    }
    list.push_back(std::move(entry));
  }
  out["witnesses"] = std::move(list);
  return out;
}

template <Scalar T>
Json cmd_menu_homog(const RunConfig& config, const LoadedProblem<T>& p) {
  if (!p.menus) throw ValidationError("menu-homogeneity needs a top-level \"menus\" collection");
  if (!p.lambda) throw ValidationError("problem has no \"lambda\"");
  std::vector<DecisionRule> rules;
  for (const auto& r : p.rules) {
    if (!r.decision || r.source.contains("menus")) {
      throw ValidationError("rule '" + r.id + "' must choose from the shared menu collection");
    }
    rules.push_back(*r.decision);
  }
  const GroundSet menu_labels = p.menus->as_ground_set();
  Json out = Json::object();
  if (config.q || p.options.contains("q")) {
    const Measure<T> q = required_q(config, p);
    auto pi = check_menu_homogeneous<T>(rules, *p.menus, *p.lambda, q);
    out["q"] = q_to_json(p, q);
    out["homogeneous"] = pi.has_value();
    out["menu_distribution"] = pi ? measure_to_json(menu_labels, *pi) : Json();
    return out;
  }
  const std::size_t denominator = p.options.value("sweep_denominator", kDefaultSweepDenominator);
  Json list = Json::array();
  for (const auto& point : menu_homogeneous_sweep<T>(rules, *p.menus, *p.lambda, denominator)) {
    list.push_back({{"q", q_to_json(p, point.q)}, {"menu_distribution", measure_to_json(menu_labels, point.menu_distribution)}});
  }
  out["sweep_denominator"] = denominator;
  out["feasible"] = std::move(list);
  return out;
}

template <Scalar T>
Json subsets_to_json(const GroundSet& ground, const std::vector<SubsetMask>& masks) {
  Json out = Json::array();
  for (SubsetMask m : masks) out.push_back(subset_to_json(ground, m));
  return out;
}

template <Scalar T>
Json cmd_identify_kappa(const RunConfig& config, const Json& doc) {
  check_schema(doc);
  std::vector<T> points;
  for (const auto& x : require(doc, "grid", "updating")) points.push_back(scalar_from_json<T>(x, "grid"));
  OddsGrid<T> grid(std::move(points), scalar_from_json<T>(require(doc, "prior", "updating"), "prior"));
  std::vector<T> shifted;
  for (const T& x : grid.points()) shifted.push_back(x - grid.prior());
  const LabelResolver shifted_resolve = numeric_resolver(grid.shifted_ground(), shifted);
  const LabelResolver grid_resolve = numeric_resolver(grid.ground(), grid.points());

  const Json& experiment = require(doc, "experiment_capacity", "updating");
  Capacity<T> nu = experiment.contains("info_spec")
                       ? build_capacity(info_spec_from_json<T>(experiment["info_spec"], grid.shifted_ground(),
                                                               shifted_resolve, std::nullopt, "experiment_capacity"))
                       : capacity_from_json<T>(experiment, grid.shifted_ground(), shifted_resolve, "experiment_capacity");
  const ExperimentModel<T> model(grid, std::move(nu));
  const Measure<T> lambda = measure_from_json<T>(require(doc, "lambda", "updating"), grid.ground(), grid_resolve, "lambda");

  KappaRange<T> range = full_kappa_range(model);
  if (doc.contains("kappa_range")) {
    const Json& r = doc["kappa_range"];
    if (!r.is_array() || r.size() != 2) throw ValidationError("kappa_range must be [lo, hi]");
    range = clamp_kappa_range(model, {scalar_from_json<T>(r[0], "kappa_range"), scalar_from_json<T>(r[1], "kappa_range")});
  }
  const KappaInterval<T> answer = rationalizing_kappa_interval(lambda, model, range);

  Json out = Json::object();
  out["kappa_floor"] = scalar_to_json(model.kappa_floor());
  out["kappa_range"] = Json::array({scalar_to_json(range.min), scalar_to_json(range.max)});
  out["interval"] = answer.interval ? Json::array({scalar_to_json(answer.interval->first), scalar_to_json(answer.interval->second)})
                                    : Json();
  out["diagnosis"] = std::string(diagnosis_name(answer.diagnosis));
  out["underreaction_witnesses"] = subsets_to_json<T>(grid.ground(), answer.underreaction_witnesses);
  out["overreaction_witnesses"] = subsets_to_json<T>(grid.ground(), answer.overreaction_witnesses);
  if (config.kappa) {
    const T kappa = parse_scalar<T>(*config.kappa);
    Json check = verdict_to_json(grid.ground(), check_average_bias(lambda, model, kappa));
    check["kappa"] = scalar_to_json(kappa);
    out["check"] = std::move(check);
  }
  return out;
}

template <Scalar T>
Json cmd_simulate(const RunConfig& config, const Json& doc, const LoadedProblem<T>& p) {
  if (p.has_vertex_rules()) throw ValidationError("simulate needs capacity-based info specs");
  const Measure<T> q = required_q(config, p);
  std::uint64_t seed = doc.value("seed", std::uint64_t{0});
  if (config.seed) seed = *config.seed;
  std::vector<InfoSpec<T>> specs;
  for (const auto& r : p.rules) specs.push_back(*r.spec);
  const SyntheticPopulation<T> pop = synth_population<T>(specs, q, seed);

  Json problem = Json::object();
  problem["schema"] = kSchema;
  problem["labels"] = p.ground.labels();
  if (doc.contains("menus")) problem["menus"] = doc["menus"];
  problem["lambda"] = measure_to_json(p.ground, pop.lambda);
  problem["rules"] = doc["rules"];
  Json options = p.options;
  options["q"] = q_to_json(p, q);
  problem["options"] = std::move(options);
  Json rho = Json::object();
  for (std::size_t d = 0; d < p.rules.size(); ++d) rho[p.rules[d].id] = measure_to_json(p.ground, pop.rho[d]);
  problem["simulation"] = {{"rng", kRngAlgorithm}, {"seed", seed}, {"rho", std::move(rho)}};
  return problem;
}

template <Scalar T>
Json audit_entry(std::string name, const Capacity<T>& nu) {
  Json out = Json::object();
  out["name"] = std::move(name);
  const bool convex = is_convex(nu);
  out["convex"] = convex;
  out["belief_function"] = is_belief_function(nu);
  out["minimal_carrier"] = subset_to_json(nu.ground(), nu.minimal_carrier());
  Json masses = Json::object();
  const std::vector<T> m = mobius(nu);
  for (std::uint32_t k = 1; k < m.size(); ++k) {
    if (!is_zero(m[k])) masses[nu.ground().key_of(SubsetMask(k))] = scalar_to_json(m[k]);
  }
  out["mobius"] = std::move(masses);
  if (convex) {
    Json vertices = Json::array();
    for (const auto& v : core_vertices(nu)) vertices.push_back(measure_to_json(nu.ground(), v));
    out["core_vertex_count"] = vertices.size();
    out["core_vertices"] = std::move(vertices);
  } else {
    out["core_vertex_count"] = Json();
  }
  return out;
}

template <Scalar T>
Json cmd_capacity_audit(const Json& doc) {
  check_schema(doc);
  Json list = Json::array();
  if (doc.contains("rules")) {
    const LoadedProblem<T> p = load_problem<T>(doc);
    for (const auto& r : p.rules) {
      if (r.spec) {
        list.push_back(audit_entry(r.id, build_capacity(*r.spec)));
      } else {
        list.push_back(audit_entry(r.id, lower_probability(std::span<const Measure<T>>(r.vertex_list), p.ground)));
      }
    }
  } else {
    const GroundSet ground(require(doc, "labels", "capacity").get<std::vector<std::string>>());
    const LabelResolver resolve = label_resolver(ground);
    if (doc.contains("info_spec")) {
      const InfoSpec<T> spec = info_spec_from_json<T>(doc["info_spec"], ground, resolve, std::nullopt, "info_spec");
      list.push_back(audit_entry(std::string(spec.tag()), build_capacity(spec)));
    } else {
      list.push_back(audit_entry("capacity", capacity_from_json<T>(doc, ground, resolve, "capacity")));
    }
  }
  return Json{{"capacities", std::move(list)}};
}

template <Scalar T>
Json dispatch(const RunConfig& config, const Json& doc) {
  const std::string& c = config.command;
  if (c == "identify-kappa") return cmd_identify_kappa<T>(config, doc);
  if (c == "capacity-audit") return cmd_capacity_audit<T>(doc);
  const LoadedProblem<T> p = load_problem<T>(doc);
  if (c == "check") return cmd_check(config, p);
  if (c == "exists") return cmd_exists(config, p);
  if (c == "bounds") return cmd_bounds(config, p);
  if (c == "vertices") return cmd_vertices(config, p);
  if (c == "witness") return cmd_witness(config, p);
  if (c == "menu-homog") return cmd_menu_homog(config, p);
  if (c == "simulate") return cmd_simulate(config, doc, p);
  throw ValidationError("unknown command '" + c + "'");
}

void render_text(const Json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_structured() && !value.empty()) {
        os << pad << key << ":\n";
        render_text(value, os, indent + 1);
      } else {
        os << pad << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& value : j) {
      if (value.is_object()) {
        os << pad << "-\n";
        render_text(value, os, indent + 1);
      } else {
        os << pad << "- " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
      }
    }
  } else {
    os << pad << j.dump() << "\n";
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"check",      "exists",         "bounds",   "vertices",      "witness",
                                                 "menu-homog", "identify-kappa", "simulate", "capacity-audit"};
  return names;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string bytes;
  {
    std::ifstream in(config.input_path, std::ios::binary);
    if (!in) {
      err << "error: cannot read '" << config.input_path << "'\n";
      return kExitUnreadable;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
      err << "error: cannot read '" << config.input_path << "'\n";
      return kExitUnreadable;
    }
    bytes = buffer.str();
  }

  Json result;
  try {
    if (config.mode != "exact" && config.mode != "float") throw ValidationError("mode must be exact or float");
    const Json doc = Json::parse(bytes);
    result = config.mode == "exact" ? dispatch<Rational>(config, doc) : dispatch<double>(config, doc);
  } catch (const SizeLimit& e) {
    err << "error: " << e.what() << "\n";
    return kExitSizeLimit;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }

  Json report = Json::object();
  const std::string digest = sha256_hex(bytes);
  if (config.command == "simulate") {
    // The simulated problem is itself an input document; provenance rides along.
    report = std::move(result);
    report["metadata"] = {{"command", config.command}, {"mode", config.mode}, {"input_sha256", digest}};
  } else {
    report["schema"] = kSchema;
    report["command"] = config.command;
    report["mode"] = config.mode;
    if (config.mode == "float") report["tolerance"] = 1e-9;
    report["input_sha256"] = digest;
    report["result"] = std::move(result);
  }

  std::ostringstream text;
  if (config.format == "text") {
    render_text(report, text, 0);
  } else {
    text << report.dump(2) << "\n";
  }
  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::binary);
    file << text.str();
    if (!file) {
      err << "error: cannot write '" << *config.output_path << "'\n";
      return kExitUnreadable;
    }
  } else {
    out << text.str();
  }
  return kExitOk;
}

}  // namespace capid::cli
