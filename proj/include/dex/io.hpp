#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "dex/economy.hpp"

namespace dex {

// Economy file schema: top-level keys `objects`, `agents`, `endowments`,
// `utilities` (tagged by `kind`), and `categories` for categorical
// economies. Rationals travel as "p/q" strings.
Economy economy_from_json(const nlohmann::json& j);
nlohmann::json economy_to_json(const Economy& e);

Economy load_economy(const std::string& path);
void save_economy(const Economy& e, const std::string& path);

nlohmann::json bundle_to_json(const Economy& e, Bundle b);
Bundle bundle_from_json(const Economy& e, const nlohmann::json& j);

// FNV-1a hash of the canonical serialized form, as fixed-width hex.
std::string economy_digest(const Economy& e);

nlohmann::json parse_json_file(const std::string& path);

}  // namespace dex
