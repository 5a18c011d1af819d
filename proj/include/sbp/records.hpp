#pragma once

#include "sbp/morse.hpp"
#include "sbp/optimizer.hpp"

#include <json.hpp>

#include <string>

namespace sbp {

/// JSON-lines record; the field itself is stored as a BPF1 path reference.
nlohmann::json record_to_json(const SolutionRecord& rec, const std::string& field_path);
nlohmann::json spectrum_to_json(const SpectrumReport& rep);

/// Appends one JSON line to the given file.
void append_record_line(const std::string& path, const nlohmann::json& j);

}  // namespace sbp
