#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "map_model.hpp"

namespace mapfunc {

/*!
 * Parse a model file.
 *
 * The format is a small subset of TOML: `[section]` headers, `key = value`
 * lines with numbers, quoted strings or booleans, and `#` comments. See
 * docs/model-schema.md. Errors carry the source name and line number.
 */
MapModel parse_model(std::string_view text, std::string_view source = "<model>");
MapModel load_model(const std::filesystem::path& path);

//! Canonical text form; parse_model(to_model_text(m)) reproduces m exactly.
std::string to_model_text(const MapModel& model);

//! FNV-1a 64 over the canonical text.
std::uint64_t model_hash(const MapModel& model);
std::string model_hash_hex(const MapModel& model);

//! Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace mapfunc
