#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pitplot/model.hpp"
#include "pitplot/tornado.hpp"

namespace pitplot {

/// Parses the portfolio document. Type and shape problems are collected as
/// diagnostics and thrown together as one ValidationError; the result is not
/// yet invariant-checked (see validate_portfolio).
PortfolioSpec parse_portfolio(const nlohmann::json& doc);
nlohmann::json to_json(const PortfolioSpec& spec);

/// Applies the keys present in `doc` on top of `base`.
SimConfig parse_config(const nlohmann::json& doc, SimConfig base = {});
nlohmann::json to_json(const SimConfig& config);

TornadoScenario parse_tornado_scenario(const nlohmann::json& doc);
nlohmann::json to_json(const TornadoScenario& scenario);

/// Reads and parses JSON text; IoError for unreadable files, ValidationError
/// (naming the file) for malformed syntax.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

PortfolioSpec load_portfolio(const std::filesystem::path& path);
SimConfig load_config(const std::filesystem::path& path, SimConfig base = {});
TornadoScenario load_tornado_scenario(const std::filesystem::path& path);

} // namespace pitplot
