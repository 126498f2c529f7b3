#include "dex/report.hpp"

#include <algorithm>
#include <fstream>

#include "dex/checks.hpp"
#include "dex/errors.hpp"
#include "dex/examples.hpp"
#include "dex/io.hpp"
#include "dex/rounding.hpp"
#include "dex/toperator.hpp"
#include "dex/ttc.hpp"

namespace dex {

using nlohmann::json;

namespace {

json base_payload(const std::string& command, const CommandOptions& opts) {
  json j;
  j["command"] = command;
  j["seed"] = opts.seed;
  return j;
}

json coalition_json(const Economy& e, uint32_t mask) {
  json arr = json::array();
  for (AgentId i : coalition_members(mask)) arr.push_back(e.agents[i]);
  return arr;
}

json block_to_json(const Economy& e, const BlockCertificate& cert) {
  json j;
  j["coalition"] = coalition_json(e, cert.coalition);
  json bundles;
  for (const auto& [i, b] : cert.bundles) bundles[e.agents[i]] = bundle_to_json(e, b);
  j["bundles"] = bundles;
  return j;
}

json ext_vector_json(const std::vector<ExtValue>& v) {
  json arr = json::array();
  for (const ExtValue& x : v) arr.push_back(x.str());
  return arr;
}

json ttc_to_json(const Economy& e, const TTCResult& r) {
  json j;
  json assignment;
  for (AgentId i = 0; i < e.num_agents(); ++i)
    assignment[e.agents[i]] = e.objects[r.assignment[i]];
  j["assignment"] = assignment;
  json rounds = json::array();
  for (const auto& round : r.rounds) {
    json arr = json::array();
    for (AgentId i : round) arr.push_back(e.agents[i]);
    rounds.push_back(arr);
  }
  j["rounds"] = rounds;
  json cycles = json::array();
  for (const auto& round : r.cycles) {
    json per_round = json::array();
    for (const auto& cycle : round) {
      json arr = json::array();
      for (AgentId i : cycle) arr.push_back(e.agents[i]);
      per_round.push_back(arr);
    }
    cycles.push_back(per_round);
  }
  j["cycles"] = cycles;
  return j;
}

json trace_to_json(const Economy& e, const TTrace& trace) {
  json iterates = json::array();
  for (const auto& u : trace.iterates) iterates.push_back(ext_vector_json(u));
  json j;
  j["iterates"] = iterates;
  j["fixed_point"] = ext_vector_json(trace.fixed_point);
  j["iteration_count"] = trace.iterates.size() - 1;
  (void)e;
  return j;
}

void require_monotone_injective_dtu(const Economy& e) {
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    if (!check_injective(e, i))
      throw InputError("precondition failed: agent " + e.agents[i] + " is not injective");
    if (!check_strictly_monotone(e, i))
      throw InputError("precondition failed: agent " + e.agents[i] +
                       " is not strictly monotone on finite bundles");
  }
  DtuResult dtu = check_discrete_TU(e);
  if (!dtu.ok)
    throw InputError("precondition failed: discrete transferable utility does not hold");
}

}  // namespace

json allocation_to_json(const Economy& e, const Allocation& x) {
  json j;
  for (AgentId i = 0; i < e.num_agents(); ++i)
    j[e.agents[i]] = bundle_to_json(e, x.bundles[i]);
  return j;
}

json profile_to_json(const Economy& e, const UtilityProfile& u) {
  json j;
  for (AgentId i = 0; i < e.num_agents(); ++i) j[e.agents[i]] = u[i].str();
  return j;
}

StructuredAllocation structured_from_json(const Economy& e, const json& j) {
  StructuredAllocation xs;
  xs.allocation.bundles.assign(e.num_agents(), Bundle::empty());
  try {
    for (const auto& [agent, arr] : j.at("bundles").items())
      xs.allocation.bundles[e.agent_index(agent)] = bundle_from_json(e, arr);
    for (const auto& group : j.at("structure")) {
      uint32_t mask = 0;
      for (const auto& agent : group)
        mask |= uint32_t(1) << e.agent_index(agent.get<std::string>());
      xs.structure.push_back(mask);
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed structured allocation: ") + ex.what());
  }
  return xs;
}

json structured_to_json(const Economy& e, const StructuredAllocation& xs) {
  json j;
  j["bundles"] = allocation_to_json(e, xs.allocation);
  json structure = json::array();
  for (uint32_t mask : xs.structure) structure.push_back(coalition_json(e, mask));
  j["structure"] = structure;
  return j;
}

RunReport cmd_validate(const std::string& path, const CommandOptions& opts) {
  RunReport report;
  report.payload = base_payload("validate", opts);
  Economy e = load_economy(path);
  report.payload["digest"] = economy_digest(e);
  ValidationReport v = validate_economy(e);
  report.payload["ok"] = v.ok();
  report.payload["violations"] = v.violations;
  report.exit_code = v.ok() ? 0 : 1;
  return report;
}

RunReport cmd_solve(const std::string& path, const std::string& solver,
                    const CommandOptions& opts) {
  RunReport report;
  report.payload = base_payload("solve " + solver, opts);
  Economy e = load_economy(path);
  report.payload["digest"] = economy_digest(e);
  ValidationReport v = validate_economy(e);
  if (!v.ok()) throw InputError("economy file is invalid: " + v.violations.front());

  if (solver == "weak-core" || solver == "strong-core" || solver == "pairwise-stable") {
    std::vector<Allocation> result =
        solver == "weak-core" ? weak_core(e, opts.budget)
        : solver == "strong-core" ? strong_core(e, opts.budget)
                                  : pairwise_stable_set(e, opts.budget);
    json arr = json::array();
    for (const Allocation& x : result) arr.push_back(allocation_to_json(e, x));
    report.payload["allocations"] = arr;
    report.payload["count"] = result.size();
    return report;
  }
  if (solver == "ttc") {
    TTCResult r = run_ttc(housing_market(e));
    report.payload["ttc"] = ttc_to_json(e, r);
    return report;
  }
  if (solver == "talgo") {
    int k = opts.k < 0 ? e.num_agents() : opts.k;
    TContext ctx(e, k, opts.budget);
    TTrace trace = iterate_to_fixed_point(ctx);
    report.payload["k"] = k;
    report.payload["trace"] = trace_to_json(e, trace);
    std::optional<Allocation> fixed = check_T_fixed_point(ctx, trace.fixed_point);
    report.payload["t_fixed"] = fixed.has_value();
    if (fixed) report.payload["allocation"] = allocation_to_json(e, *fixed);
    return report;
  }
  if (solver == "bargaining") {
    if (!opts.structure_path.empty()) {
      StructuredAllocation xs = structured_from_json(e, parse_json_file(opts.structure_path));
      BargainingResult r = pairwise_bargaining_set(e, xs, opts.budget);
      report.payload["in_bargaining_set"] = r.in_set;
      if (r.unanswered) {
        json obj;
        obj["pair"] = json::array({e.agents[r.unanswered->i], e.agents[r.unanswered->j]});
        obj["bundles"] = json::object({{e.agents[r.unanswered->i], bundle_to_json(e, r.unanswered->yi)},
                                       {e.agents[r.unanswered->j], bundle_to_json(e, r.unanswered->yj)}});
        report.payload["unanswered_objection"] = obj;
      }
      report.exit_code = r.in_set ? 0 : 1;
      return report;
    }
    int k = opts.k < 0 ? 2 : opts.k;
    if (k != 2) throw InputError("bargaining requires k = 2");
    require_monotone_injective_dtu(e);
    TContext ctx(e, 2, opts.budget);
    TTrace trace = iterate_to_fixed_point(ctx);
    CyclePairing pairing = classify_and_pair(ctx, trace.fixed_point);
    StructuredAllocation xs = construct_bargaining_allocation(ctx, pairing);
    BargainingResult r = pairwise_bargaining_set(e, xs, opts.budget);
    report.payload["trace"] = trace_to_json(e, trace);
    json a1 = json::array(), a2 = json::array(), pairs = json::array();
    for (AgentId i : pairing.a1) a1.push_back(e.agents[i]);
    for (AgentId i : pairing.a2) a2.push_back(e.agents[i]);
    for (const auto& [f, s] : pairing.pairs)
      pairs.push_back(json::array({e.agents[f], e.agents[s]}));
    report.payload["a1"] = a1;
    report.payload["a2"] = a2;
    report.payload["pairs"] = pairs;
    report.payload["result"] = structured_to_json(e, xs);
    report.payload["individually_rational"] = individually_rational(e, xs.allocation);
    report.payload["in_bargaining_set"] = r.in_set;
    report.exit_code = r.in_set ? 0 : 1;
    return report;
  }
  throw InputError("unknown solver '" + solver + "'");
}

RunReport cmd_check(const std::string& path, const std::string& check,
                    const CommandOptions& opts) {
  RunReport report;
  report.payload = base_payload("check " + check, opts);
  json file = parse_json_file(path);

  if (check == "balanced" || check == "convex") {
    NTUGame g;
    if (file.contains("generators")) {
      g = ntu_game_from_json(file);
    } else {
      Economy e = economy_from_json(file);
      report.payload["digest"] = economy_digest(e);
      g = build_ntu_game(e, opts.budget);
    }
    if (check == "balanced") {
      BalancedResult r = check_balanced(g);
      report.payload["ok"] = r.ok;
      if (r.violation) {
        json coll = json::array();
        for (size_t t = 0; t < r.violation->collection.coalitions.size(); ++t) {
          json c;
          json members = json::array();
          for (AgentId i : coalition_members(r.violation->collection.coalitions[t]))
            members.push_back(g.agents[i]);
          c["coalition"] = members;
          c["weight"] = format_rational(r.violation->collection.weights[t]);
          coll.push_back(c);
        }
        report.payload["violation"] =
            json{{"collection", coll}, {"u", ext_vector_json(r.violation->u)}};
      }
      report.exit_code = r.ok ? 0 : 1;
    } else {
      ConvexResult r = check_ordinal_convexity(g);
      report.payload["ok"] = r.ok;
      if (r.violation) {
        json s = json::array(), s2 = json::array();
        for (AgentId i : coalition_members(r.violation->s)) s.push_back(g.agents[i]);
        for (AgentId i : coalition_members(r.violation->s_prime)) s2.push_back(g.agents[i]);
        report.payload["violation"] =
            json{{"s", s}, {"s_prime", s2}, {"u", ext_vector_json(r.violation->u)}};
      }
      report.exit_code = r.ok ? 0 : 1;
    }
    return report;
  }

  Economy e = economy_from_json(file);
  report.payload["digest"] = economy_digest(e);
  if (check == "injective" || check == "monotone") {
    json per_agent;
    bool all = true;
    for (AgentId i = 0; i < e.num_agents(); ++i) {
      bool ok = check == "injective" ? check_injective(e, i) : check_strictly_monotone(e, i);
      per_agent[e.agents[i]] = ok;
      all = all && ok;
    }
    report.payload["ok"] = all;
    report.payload["agents"] = per_agent;
    report.exit_code = all ? 0 : 1;
    return report;
  }
  if (check == "dtu") {
    DtuResult r = check_discrete_TU(e);
    report.payload["ok"] = r.ok;
    if (r.violation)
      report.payload["violation"] = json{{"i", e.agents[r.violation->i]},
                                         {"j", e.agents[r.violation->j]},
                                         {"theta", format_rational(r.violation->theta)},
                                         {"theta_prime", format_rational(r.violation->theta_prime)}};
    report.exit_code = r.ok ? 0 : 1;
    return report;
  }
  if (check == "gft") {
    GftResult r = check_gains_from_trade(e, opts.budget);
    report.payload["ok"] = r.ok;
    if (r.violation) {
      json x, x2;
      for (const auto& [i, b] : r.violation->x) x[e.agents[i]] = bundle_to_json(e, b);
      for (const auto& [i, b] : r.violation->x_prime) x2[e.agents[i]] = bundle_to_json(e, b);
      report.payload["violation"] = json{{"s", coalition_json(e, r.violation->s)},
                                         {"s_prime", coalition_json(e, r.violation->s_prime)},
                                         {"x", x},
                                         {"x_prime", x2}};
    }
    report.exit_code = r.ok ? 0 : 1;
    return report;
  }
  throw InputError("unknown check '" + check + "'");
}

RunReport cmd_gen(const InstanceSpec& spec, const std::string& out_path,
                  const CommandOptions& opts) {
  RunReport report;
  CommandOptions seeded = opts;
  seeded.seed = spec.seed;
  report.payload = base_payload("gen " + spec.family, seeded);
  Economy e = generate_economy(spec);
  ValidationReport v = validate_economy(e);
  if (!v.ok()) throw InvariantError("generated economy failed validation: " + v.violations.front());
  save_economy(e, out_path);
  report.payload["digest"] = economy_digest(e);
  report.payload["path"] = out_path;
  report.payload["economy"] = economy_to_json(e);
  return report;
}

RunReport cmd_examples(const std::string& name, const CommandOptions& opts) {
  RunReport report;
  report.payload = base_payload("examples " + name, opts);
  auto out_file = [&](const std::string& file) { return opts.out_dir + "/" + file; };

  const char* completion_note =
      "ordinal tables are completed by giving the listed bundles the top values "
      "in listed order and every unlisted bundle a distinct value strictly below "
      "the endowment's";

  if (name == "ex1") {
    Economy e = examples::ex1_economy();
    save_economy(e, out_file("ex1.json"));
    report.payload["note"] = completion_note;
    std::vector<Allocation> strong = strong_core(e, opts.budget);
    std::vector<Allocation> weak = weak_core(e, opts.budget);
    Allocation x = examples::ex1_x(), y = examples::ex1_y();
    bool strong_is_x = strong.size() == 1 && strong.front() == x;
    bool weak_has_both = std::count(weak.begin(), weak.end(), x) == 1 &&
                         std::count(weak.begin(), weak.end(), y) == 1;
    report.payload["path"] = out_file("ex1.json");
    report.payload["strong_core_is_exactly_X"] = strong_is_x;
    report.payload["weak_core_contains_X_and_Y"] = weak_has_both;
    report.payload["weak_core_count"] = weak.size();
    report.exit_code = strong_is_x && weak_has_both ? 0 : 1;
    return report;
  }
  if (name == "ex2" || name == "shoes-gft") {
    Economy e = examples::ex2_economy();
    save_economy(e, out_file("ex2.json"));
    report.payload["path"] = out_file("ex2.json");
    report.payload["note"] = completion_note;
    if (name == "ex2") {
      std::vector<Allocation> weak = weak_core(e, opts.budget);
      report.payload["weak_core_empty"] = weak.empty();
      json cycle = json::array();
      bool cycle_ok = true;
      const Allocation allocs[3] = {examples::ex2_x(), examples::ex2_y(), examples::ex2_z()};
      const char* names[3] = {"X", "Y", "Z"};
      for (int t = 0; t < 3; ++t) {
        auto block = find_block(e, allocs[t], true, opts.budget);
        cycle_ok = cycle_ok && block.has_value();
        json entry;
        entry["allocation"] = names[t];
        if (block) entry["blocked_by"] = block_to_json(e, *block);
        cycle.push_back(entry);
      }
      report.payload["blocking_cycle"] = cycle;
      report.exit_code = weak.empty() && cycle_ok ? 0 : 1;
    } else {
      GftResult r = check_gains_from_trade(e, opts.budget);
      report.payload["gains_from_trade"] = r.ok;
      if (r.violation) {
        report.payload["witness_s"] = coalition_json(e, r.violation->s);
        report.payload["witness_s_prime"] = coalition_json(e, r.violation->s_prime);
      }
      report.exit_code = !r.ok ? 0 : 1;  // the claim is that the property fails
    }
    return report;
  }
  if (name == "konishi") {
    Economy e = examples::konishi_economy();
    save_economy(e, out_file("konishi.json"));
    report.payload["path"] = out_file("konishi.json");
    report.payload["note"] =
        "utilities are additively separable across the left/right categories, "
        "with two objects of one category out of the consumption space";
    AgentId a1 = e.agent_index("1");
    Bundle l4r1 = Bundle::empty(), l4r2 = Bundle::empty();
    l4r1.add(e.object_index("l4"));
    l4r1.add(e.object_index("r1"));
    l4r2.add(e.object_index("l4"));
    l4r2.add(e.object_index("r2"));
    bool ordinal = eval(e, a1, l4r1) > eval(e, a1, l4r2) &&
                   eval(e, a1, l4r1) == ExtValue(Rational(6)) &&
                   eval(e, a1, l4r2) == ExtValue(Rational(5));
    std::vector<Allocation> weak = weak_core(e, opts.budget);
    report.payload["ordinal_comparison_3p3_gt_3p2"] = ordinal;
    report.payload["weak_core_empty"] = weak.empty();
    report.exit_code = ordinal && weak.empty() ? 0 : 1;
    return report;
  }
  if (name == "roommate") {
    NTUGame g = examples::roommate_game();
    std::ofstream out(out_file("roommate.ntu.json"));
    out << ntu_game_to_json(g).dump(2) << '\n';
    report.payload["path"] = out_file("roommate.ntu.json");
    auto core = ntu_weak_core(g);
    BalancedResult balanced = check_balanced(g);
    report.payload["ntu_weak_core_empty"] = core.empty();
    report.payload["balanced"] = balanced.ok;
    report.exit_code = core.empty() && !balanced.ok ? 0 : 1;
    return report;
  }
  throw InputError("unknown example '" + name + "'");
}

RunReport cmd_round(const std::string& path, const CommandOptions& opts) {
  RunReport report;
  report.payload = base_payload("round", opts);
  FractionalMatrix m = load_matrix(path);
  report.payload["initial_fractional"] = m.fractional_count();
  if (m.mode == FractionalMatrix::Mode::kDichotomous) {
    RoundingTrace trace;
    FractionalMatrix result = round_dichotomous(m, &trace);
    report.payload["mode"] = "dichotomous";
    report.payload["matrix"] = matrix_to_json(result);
    report.payload["passes"] = trace.passes.size();
  } else {
    RoundOutcome out = round_categorical(m);
    report.payload["mode"] = "categorical";
    json assigned;
    for (const auto& [agent, objects] : out.assigned) assigned[agent] = objects;
    report.payload["assigned"] = assigned;
    report.payload["rounding_passes"] = out.trace.rounding_passes;
    report.payload["splits"] = out.trace.splits;
  }
  return report;
}

}  // namespace dex
