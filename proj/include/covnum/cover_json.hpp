#pragma once

// Canonical JSON form of a system: {"classes":[{"a":int,"n":int},...]} with
// classes sorted by (n, a), so equal systems serialize to identical bytes.

#include <string>
#include <vector>

#include "covnum/cover.hpp"
#include "json.hpp"

namespace covnum {

inline nlohmann::json to_json(const CoverSystem& sys) {
    nlohmann::json classes = nlohmann::json::array();
    const auto canon = sys.canonical();
    for (const auto& c : canon.classes()) {
        classes.push_back({{"a", c.residue()}, {"n", c.modulus()}});
    }
    return {{"classes", std::move(classes)}};
}

inline std::string dump_cover(const CoverSystem& sys) { return to_json(sys).dump(); }

inline CoverSystem cover_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("classes") || !j.at("classes").is_array()) {
        throw ParseError("cover JSON must be an object with a \"classes\" array");
    }
    std::vector<ResidueClass> classes;
    for (const auto& item : j.at("classes")) {
        if (!item.is_object() || !item.contains("a") || !item.contains("n")) {
            throw ParseError("each class needs integer fields \"a\" and \"n\"");
        }
        const auto& a = item.at("a");
        const auto& n = item.at("n");
        if (!a.is_number_integer() || !n.is_number_integer()) {
            throw ParseError("class fields \"a\" and \"n\" must be integers");
        }
        if (n.is_number_unsigned() ? n.get<u64>() == 0 : n.get<i64>() <= 0) {
            throw ParseError("modulus must be positive");
        }
        if (a.is_number_unsigned() && a.get<u64>() > kMaxValue) {
            throw ParseError("residue out of range");
        }
        try {
            classes.emplace_back(a.get<i64>(), n.get<u64>());
        } catch (const RangeError& e) {
            throw ParseError(e.what());
        }
    }
    if (classes.empty()) throw ParseError("cover JSON has no classes");
    try {
        return CoverSystem(std::move(classes));
    } catch (const RangeError& e) {
        throw ParseError(std::string("cover period overflows: ") + e.what());
    }
}

inline CoverSystem parse_cover(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return cover_from_json(j);
}

}  // namespace covnum
