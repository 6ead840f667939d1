// Minimal JSON-schema checker covering the subset the shipped schemas use:
// type (string or union), properties/required/additionalProperties, items,
// enum, pattern, minimum, minItems/maxItems. Throws std::runtime_error with
// a JSON-pointer-ish path on the first violation.

#pragma once

#include <json.hpp>

#include <fstream>
#include <regex>
#include <stdexcept>
#include <string>

namespace testsupport {

using nlohmann::json;

inline bool type_matches(const std::string& t, const json& v) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    throw std::runtime_error("schema uses unsupported type: " + t);
}

inline void validate_json(const json& schema, const json& value, const std::string& path = "$") {
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error(path + ": " + msg + " (got " + value.dump().substr(0, 80) + ")");
    };

    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(t.get<std::string>(), value);
        } else {
            for (const auto& alt : t)
                if (type_matches(alt.get<std::string>(), value)) ok = true;
        }
        if (!ok) fail("type mismatch, expected " + t.dump());
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& alt : schema["enum"])
            if (alt == value) ok = true;
        if (!ok) fail("not in enum " + schema["enum"].dump());
    }
    if (schema.contains("pattern") && value.is_string()) {
        std::regex re(schema["pattern"].get<std::string>());
        if (!std::regex_search(value.get<std::string>(), re))
            fail("pattern " + schema["pattern"].get<std::string>() + " not matched");
    }
    if (schema.contains("minimum") && value.is_number()) {
        if (value.get<double>() < schema["minimum"].get<double>())
            fail("below minimum " + schema["minimum"].dump());
    }

    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!value.contains(key.get<std::string>()))
                    fail("missing required key '" + key.get<std::string>() + "'");
        const json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (props && props->contains(it.key())) {
                validate_json((*props)[it.key()], it.value(), path + "." + it.key());
            } else if (schema.contains("additionalProperties") &&
                       schema["additionalProperties"].is_boolean() &&
                       !schema["additionalProperties"].get<bool>()) {
                fail("unexpected key '" + it.key() + "'");
            }
        }
    }

    if (value.is_array()) {
        if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>())
            fail("fewer than minItems " + schema["minItems"].dump());
        if (schema.contains("maxItems") && value.size() > schema["maxItems"].get<std::size_t>())
            fail("more than maxItems " + schema["maxItems"].dump());
        if (schema.contains("items")) {
            std::size_t i = 0;
            for (const auto& el : value)
                validate_json(schema["items"], el, path + "[" + std::to_string(i++) + "]");
        }
    }
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

} // namespace testsupport
