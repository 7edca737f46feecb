#include "pitplot/whatif.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace pitplot {

namespace {

void require_known(const PortfolioSpec& spec, const std::string& id, std::string_view role) {
    if (!spec.find(id)) throw NotFoundError(fmt::format("unknown project id '{}' in {}", id, role));
}

} // namespace

ValidatedPortfolio apply_whatif(const ValidatedPortfolio& portfolio, const WhatIf& whatif) {
    PortfolioSpec spec = portfolio.spec();
    for (const auto& id : whatif.exclusions) require_known(spec, id, "exclusions");
    for (const auto& id : whatif.forced_success) require_known(spec, id, "forced_success");
    for (const auto& o : whatif.overrides) require_known(spec, o.project_id, "overrides");

    auto project = [&](const std::string& id) -> ProjectSpec& {
        return *std::find_if(spec.projects.begin(), spec.projects.end(),
                             [&](const ProjectSpec& p) { return p.id == id; });
    };
    for (const auto& o : whatif.overrides) set_field(project(o.project_id), o.field_path, o.value);
    for (const auto& id : whatif.forced_success) {
        for (auto& phase : project(id).phases) phase.success_prob = 1.0;
    }
    std::erase_if(spec.projects, [&](const ProjectSpec& p) { return whatif.exclusions.contains(p.id); });
    return validate_portfolio(std::move(spec));
}

WhatIf parse_whatif(const nlohmann::json& doc) {
    WhatIf w;
    std::vector<Diagnostic> problems;
    if (!doc.is_object()) throw ValidationError("", "whatif", "expected an object");

    auto id_set = [&](const char* key, std::set<std::string>& out) {
        if (!doc.contains(key)) return;
        const auto& arr = doc.at(key);
        if (!arr.is_array()) {
            problems.push_back({"", key, "expected an array of project ids"});
            return;
        }
        for (const auto& v : arr) {
            if (v.is_string()) {
                out.insert(v.get<std::string>());
            } else {
                problems.push_back({"", key, "project ids must be strings"});
            }
        }
    };
    id_set("exclusions", w.exclusions);
    id_set("forced_success", w.forced_success);

    if (doc.contains("overrides")) {
        const auto& arr = doc.at("overrides");
        if (!arr.is_array()) {
            problems.push_back({"", "overrides", "expected an array"});
        } else {
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const auto& o = arr[i];
                const std::string where = fmt::format("overrides[{}]", i);
                if (!o.is_object() || !o.contains("project_id") || !o.contains("field") || !o.contains("value") ||
                    !o.at("project_id").is_string() || !o.at("field").is_string() || !o.at("value").is_number()) {
                    problems.push_back({"", where, "expected {project_id: string, field: string, value: number}"});
                    continue;
                }
                w.overrides.push_back({o.at("project_id").get<std::string>(), o.at("field").get<std::string>(),
                                       o.at("value").get<double>()});
            }
        }
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return w;
}

nlohmann::json to_json(const WhatIf& whatif) {
    nlohmann::json overrides = nlohmann::json::array();
    for (const auto& o : whatif.overrides) {
        overrides.push_back({{"project_id", o.project_id}, {"field", o.field_path}, {"value", o.value}});
    }
    return {{"exclusions", whatif.exclusions},
            {"forced_success", whatif.forced_success},
            {"overrides", overrides}};
}

FieldOverride parse_override(std::string_view text) {
    const auto colon = text.find(':');
    const auto eq = text.find('=');
    if (colon == std::string_view::npos || eq == std::string_view::npos || eq < colon || colon == 0) {
        throw ValidationError("", std::string(text), "override must look like ID:field.path=value");
    }
    FieldOverride o{std::string(text.substr(0, colon)), std::string(text.substr(colon + 1, eq - colon - 1)), 0.0};
    const std::string value(text.substr(eq + 1));
    std::size_t used = 0;
    try {
        o.value = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size()) {
        throw ValidationError(o.project_id, o.field_path, fmt::format("'{}' is not a number", value));
    }
    return o;
}

} // namespace pitplot
