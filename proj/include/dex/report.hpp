#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "dex/generate.hpp"
#include "dex/oracle.hpp"

namespace dex {

// Machine-readable command report. Identical inputs, flags, and seed yield
// byte-identical payloads; wall-clock timing goes to stderr, not here.
struct RunReport {
  nlohmann::json payload;
  int exit_code = 0;
};

struct CommandOptions {
  double budget = kDefaultBudget;
  uint64_t seed = 0;
  int k = -1;                           // talgo/bargaining coalition cap
  std::string structure_path;           // bargaining: check this instead
  std::string out_dir = ".";            // examples: where bundles land
};

RunReport cmd_validate(const std::string& path, const CommandOptions& opts);
RunReport cmd_solve(const std::string& path, const std::string& solver,
                    const CommandOptions& opts);
RunReport cmd_check(const std::string& path, const std::string& check,
                    const CommandOptions& opts);
RunReport cmd_gen(const InstanceSpec& spec, const std::string& out_path,
                  const CommandOptions& opts);
RunReport cmd_examples(const std::string& name, const CommandOptions& opts);
RunReport cmd_round(const std::string& path, const CommandOptions& opts);

// Shared serializers.
nlohmann::json allocation_to_json(const Economy& e, const Allocation& x);
nlohmann::json profile_to_json(const Economy& e, const UtilityProfile& u);
StructuredAllocation structured_from_json(const Economy& e, const nlohmann::json& j);
nlohmann::json structured_to_json(const Economy& e, const StructuredAllocation& xs);

}  // namespace dex
