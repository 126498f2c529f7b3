#include "dex/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dex/errors.hpp"

namespace dex {

using nlohmann::json;

namespace {

ExtValue ext_value_from_json(const json& j) {
  if (j.is_number_integer()) return ExtValue(Rational(j.get<long long>()));
  if (j.is_string()) return parse_ext_value(j.get<std::string>());
  throw ParseError("expected a rational as \"p/q\" string, got: " + j.dump());
}

Rational rational_from_json(const json& j) {
  ExtValue v = ext_value_from_json(j);
  if (!v.is_finite()) throw ParseError("expected a finite rational, got -inf");
  return v.finite();
}

Bundle bundle_from_names(const Economy& e, const json& arr) {
  if (!arr.is_array()) throw ParseError("expected an array of object ids");
  Bundle b = Bundle::empty();
  for (const auto& name : arr) b.add(e.object_index(name.get<std::string>()));
  return b;
}

UtilityFunction utility_from_json(const Economy& e, const json& j) {
  if (!j.contains("kind")) throw ParseError("utility without 'kind' tag");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "table") {
    TableUtility t;
    if (j.contains("default")) t.fallback = ext_value_from_json(j.at("default"));
    for (const auto& entry : j.at("entries")) {
      Bundle b = bundle_from_names(e, entry.at("bundle"));
      t.entries[b.bits] = ext_value_from_json(entry.at("value"));
    }
    if (e.num_objects() > 12)
      throw ParseError("table utilities are limited to 12 objects");
    return {t};
  }
  if (kind == "dichotomous") return {DichotomousUtility{bundle_from_names(e, j.at("good"))}};
  if (kind == "categorical") {
    if (e.categories.empty())
      throw ParseError("categorical utility requires top-level 'categories'");
    return {CategoricalUtility{bundle_from_names(e, j.at("acceptable"))}};
  }
  if (kind == "additive") {
    AdditiveUtility a;
    a.weights.assign(e.num_objects(), Rational(0));
    std::vector<bool> seen(e.num_objects(), false);
    for (const auto& [name, w] : j.at("weights").items()) {
      ObjectId o = e.object_index(name);
      a.weights[o] = rational_from_json(w);
      seen[o] = true;
      if (a.weights[o] <= Rational(0))
        throw ParseError("additive weight for '" + name + "' must be positive");
    }
    for (ObjectId o = 0; o < e.num_objects(); ++o)
      if (!seen[o]) throw ParseError("additive utility missing weight for '" + e.objects[o] + "'");
    return {a};
  }
  if (kind == "housing") {
    HousingUtility h;
    for (const auto& name : j.at("ranking")) h.ranking.push_back(e.object_index(name.get<std::string>()));
    if (int(h.ranking.size()) != e.num_objects())
      throw ParseError("housing ranking must list every house exactly once");
    std::vector<bool> seen(e.num_objects(), false);
    for (ObjectId o : h.ranking) {
      if (seen[o]) throw ParseError("housing ranking lists a house twice");
      seen[o] = true;
    }
    return {h};
  }
  throw ParseError("unknown utility kind '" + kind + "'");
}

json utility_to_json(const Economy& e, const UtilityFunction& v) {
  json j;
  j["kind"] = v.kind();
  if (const auto* t = std::get_if<TableUtility>(&v.fn)) {
    j["default"] = t->fallback.str();
    json entries = json::array();
    for (const auto& [bits, val] : t->entries) {
      json entry;
      entry["bundle"] = bundle_to_json(e, Bundle{bits});
      entry["value"] = val.str();
      entries.push_back(entry);
    }
    j["entries"] = entries;
  } else if (const auto* d = std::get_if<DichotomousUtility>(&v.fn)) {
    j["good"] = bundle_to_json(e, d->good);
  } else if (const auto* c = std::get_if<CategoricalUtility>(&v.fn)) {
    j["acceptable"] = bundle_to_json(e, c->acceptable);
  } else if (const auto* a = std::get_if<AdditiveUtility>(&v.fn)) {
    json weights;
    for (ObjectId o = 0; o < e.num_objects(); ++o)
      weights[e.objects[o]] = format_rational(a->weights[o]);
    j["weights"] = weights;
  } else {
    const auto& h = std::get<HousingUtility>(v.fn);
    json ranking = json::array();
    for (ObjectId o : h.ranking) ranking.push_back(e.objects[o]);
    j["ranking"] = ranking;
  }
  return j;
}

}  // namespace

json bundle_to_json(const Economy& e, Bundle b) {
  json arr = json::array();
  for (ObjectId o : b.members()) arr.push_back(e.objects[o]);
  return arr;
}

Bundle bundle_from_json(const Economy& e, const json& j) { return bundle_from_names(e, j); }

Economy economy_from_json(const json& j) {
  Economy e;
  try {
    for (const auto& name : j.at("objects")) e.objects.push_back(name.get<std::string>());
    if (e.objects.size() > 16) throw ParseError("economies are limited to 16 objects");
    for (const auto& name : j.at("agents")) e.agents.push_back(name.get<std::string>());
    if (e.agents.size() > 8) throw ParseError("economies are limited to 8 agents");
    if (j.contains("categories")) {
      for (const auto& [cname, objs] : j.at("categories").items()) {
        e.category_names.push_back(cname);
        e.categories.push_back(bundle_from_names(e, objs));
      }
    }
    const json& endow = j.at("endowments");
    for (const auto& name : e.agents) {
      if (!endow.contains(name)) throw ParseError("missing endowment for agent '" + name + "'");
      e.endowments.push_back(bundle_from_names(e, endow.at(name)));
    }
    const json& utils = j.at("utilities");
    for (const auto& name : e.agents) {
      if (!utils.contains(name)) throw ParseError("missing utility for agent '" + name + "'");
      e.utilities.push_back(utility_from_json(e, utils.at(name)));
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed economy file: ") + ex.what());
  }
  return e;
}

json economy_to_json(const Economy& e) {
  json j;
  j["objects"] = e.objects;
  j["agents"] = e.agents;
  if (!e.categories.empty()) {
    json cats;
    for (size_t k = 0; k < e.categories.size(); ++k)
      cats[e.category_names[k]] = bundle_to_json(e, e.categories[k]);
    j["categories"] = cats;
  }
  json endow, utils;
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    endow[e.agents[i]] = bundle_to_json(e, e.endowments[i]);
    utils[e.agents[i]] = utility_to_json(e, e.utilities[i]);
  }
  j["endowments"] = endow;
  j["utilities"] = utils;
  return j;
}

json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ParseError("JSON parse error in '" + path + "': " + ex.what());
  }
}

Economy load_economy(const std::string& path) { return economy_from_json(parse_json_file(path)); }

void save_economy(const Economy& e, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file '" + path + "'");
  out << economy_to_json(e).dump(2) << '\n';
}

std::string economy_digest(const Economy& e) {
  std::string text = economy_to_json(e).dump();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace dex
