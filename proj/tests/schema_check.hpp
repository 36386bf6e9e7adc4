#pragma once

// Structural checker for the subset of JSON Schema used by
// docs/session-api.schema.json: type, enum, required, properties, items,
// minimum, oneOf and local $ref.

#include <string>
#include <vector>

#include <json.hpp>

namespace pbemo::testing {

class SchemaCheck {
public:
    explicit SchemaCheck(nlohmann::json root) : root_(std::move(root)) {}

    /// Problems found validating `value` against $defs/<name>; empty when valid.
    std::vector<std::string> errors(const nlohmann::json& value, const std::string& name) const
    {
        std::vector<std::string> out;
        check(value, root_.at("$defs").at(name), "$", out);
        return out;
    }

private:
    static bool has_type(const nlohmann::json& v, const std::string& t)
    {
        if (t == "object") return v.is_object();
        if (t == "array") return v.is_array();
        if (t == "string") return v.is_string();
        if (t == "integer") return v.is_number_integer();
        if (t == "number") return v.is_number();
        if (t == "boolean") return v.is_boolean();
        if (t == "null") return v.is_null();
        return false;
    }

    const nlohmann::json& resolve(const nlohmann::json& s) const
    {
        if (!s.contains("$ref")) return s;
        const std::string ref = s["$ref"];
        const std::string prefix = "#/$defs/";
        return root_.at("$defs").at(ref.substr(prefix.size()));
    }

    void check(const nlohmann::json& v, const nlohmann::json& schema, const std::string& path,
               std::vector<std::string>& out) const
    {
        const auto& s = resolve(schema);
        if (s.contains("oneOf")) {
            std::size_t matches = 0;
            for (const auto& alt : s["oneOf"]) {
                std::vector<std::string> sub;
                check(v, alt, path, sub);
                matches += sub.empty();
            }
            if (matches != 1) out.push_back(path + ": matches " + std::to_string(matches) + " oneOf branches");
            return;
        }
        if (s.contains("type")) {
            bool ok = false;
            if (s["type"].is_array()) {
                for (const auto& t : s["type"]) ok = ok || has_type(v, t);
            } else {
                ok = has_type(v, s["type"]);
            }
            if (!ok) {
                out.push_back(path + ": expected " + s["type"].dump() + ", got " + v.type_name());
                return;
            }
        }
        if (s.contains("enum")) {
            bool found = false;
            for (const auto& e : s["enum"]) found = found || e == v;
            if (!found) out.push_back(path + ": " + v.dump() + " not in " + s["enum"].dump());
        }
        if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
            out.push_back(path + ": below minimum");
        if (s.contains("required")) {
            if (!v.is_object()) {
                out.push_back(path + ": expected an object");
                return;
            }
            for (const auto& k : s["required"])
                if (!v.contains(k.get<std::string>())) out.push_back(path + ": missing " + k.get<std::string>());
        }
        if (s.contains("properties") && v.is_object()) {
            for (const auto& [k, sub] : s["properties"].items())
                if (v.contains(k)) check(v[k], sub, path + "." + k, out);
        }
        if (s.contains("items") && v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i)
                check(v[i], s["items"], path + "[" + std::to_string(i) + "]", out);
        }
    }

    nlohmann::json root_;
};

} // namespace pbemo::testing
