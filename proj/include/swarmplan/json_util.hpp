#pragma once

#include "swarmplan/errors.hpp"

#include <json.hpp>

#include <filesystem>
#include <initializer_list>
#include <string>

namespace swarmplan {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& file);
void write_text_file(const std::filesystem::path& file, const std::string& text);

/// Parses JSON; on failure rethrows as ParseError with "<origin>:<line>".
json parse_json_document(const std::string& text, const std::string& origin);

/// Throws ParseError unless `value` is an object whose keys all belong to
/// `allowed` (unknown fields are rejected).
void require_object(const json& value, const std::string& context,
                    std::initializer_list<const char*> allowed);

const json& require_field(const json& obj, const char* key, const std::string& context);
const json& require_array(const json& obj, const char* key, const std::string& context);
double require_number(const json& obj, const char* key, const std::string& context);
std::int64_t require_int(const json& obj, const char* key, const std::string& context);

/// "%.17g" rendering; round-trips doubles exactly and is byte-stable.
std::string format_double(double value);

} // namespace swarmplan
