#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace drawgraph {

nlohmann::json read_json(const std::string& path);

// Writes via a temp file + rename so readers never see partial output.
void write_json_atomic(const nlohmann::json& j, const std::string& path, int indent = 1);

void write_text_atomic(const std::string& text, const std::string& path);

} // namespace drawgraph
