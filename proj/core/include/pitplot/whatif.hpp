#pragma once

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pitplot/model.hpp"

namespace pitplot {

struct FieldOverride {
    std::string project_id;
    std::string field_path;
    double value = 0.0;

    bool operator==(const FieldOverride&) const = default;
};

/// A derived scenario: drop projects, make projects certain to succeed, or
/// change individual fields.
struct WhatIf {
    std::set<std::string> exclusions;
    std::set<std::string> forced_success;
    std::vector<FieldOverride> overrides;

    bool empty() const { return exclusions.empty() && forced_success.empty() && overrides.empty(); }
    bool operator==(const WhatIf&) const = default;
};

/// Applies overrides, then forced successes, then exclusions to a copy of
/// `portfolio` and validates the result. NotFoundError for unknown ids.
ValidatedPortfolio apply_whatif(const ValidatedPortfolio& portfolio, const WhatIf& whatif);

WhatIf parse_whatif(const nlohmann::json& doc);
nlohmann::json to_json(const WhatIf& whatif);

/// "ID:path=value" as used on the command line.
FieldOverride parse_override(std::string_view text);

} // namespace pitplot
