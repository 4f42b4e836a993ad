#include "swarmplan/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace swarmplan {

std::string read_text_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError("cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + file.string());
    out << text;
}

json parse_json_document(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based position in the input
        std::size_t line = 1;
        std::size_t end = std::min<std::size_t>(e.byte, text.size());
        for (std::size_t i = 0; i + 1 < end; ++i)
            if (text[i] == '\n') ++line;
        throw ParseError(origin + ":" + std::to_string(line) + ": " + e.what());
    }
}

void require_object(const json& value, const std::string& context,
                    std::initializer_list<const char*> allowed) {
    if (!value.is_object()) throw ParseError(context + ": expected an object");
    for (const auto& [key, _] : value.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* a) { return key == a; });
        if (!known) throw ParseError(context + ": unknown field '" + key + "'");
    }
}

const json& require_field(const json& obj, const char* key, const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(context + ": missing field '" + key + "'");
    return *it;
}

const json& require_array(const json& obj, const char* key, const std::string& context) {
    const json& v = require_field(obj, key, context);
    if (!v.is_array()) throw ParseError(context + ": field '" + key + "' must be an array");
    return v;
}

double require_number(const json& obj, const char* key, const std::string& context) {
    const json& v = require_field(obj, key, context);
    if (!v.is_number()) throw ParseError(context + ": field '" + key + "' must be a number");
    return v.get<double>();
}

std::int64_t require_int(const json& obj, const char* key, const std::string& context) {
    const json& v = require_field(obj, key, context);
    if (!v.is_number_integer())
        throw ParseError(context + ": field '" + key + "' must be an integer");
    return v.get<std::int64_t>();
}

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace swarmplan
