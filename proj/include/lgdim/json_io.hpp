#pragma once

// JSON file formats:
//   scheme   {"rows":[{"b":0.5,"d":0.0,"cells":[{"a":0.25,"c":0.0}]}]}
//   family   {"schemes":[<scheme>, ...]}
//   sequence {"periodic":[1,2]} | {"explicit":[2,1,1]} |
//            {"bernoulli":{"p":[0.7,0.3],"seed":1}}

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgdim/frequency.hpp"
#include "lgdim/scheme.hpp"
#include "lgdim/sequences.hpp"

namespace lgdim {

using json = nlohmann::json;

inline json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

inline SchemeDescription scheme_description_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
        throw std::invalid_argument("scheme JSON must be an object with a \"rows\" array");
    SchemeDescription desc;
    for (const auto& jr : j["rows"]) {
        SchemeRow row;
        row.b = jr.at("b").get<double>();
        row.d = jr.at("d").get<double>();
        if (!jr.contains("cells") || !jr["cells"].is_array())
            throw std::invalid_argument("scheme row must contain a \"cells\" array");
        for (const auto& jc : jr["cells"])
            row.cells.push_back({jc.at("a").get<double>(), jc.at("c").get<double>()});
        desc.rows.push_back(std::move(row));
    }
    return desc;
}

inline json to_json(const SchemeDescription& desc) {
    json rows = json::array();
    for (const auto& r : desc.rows) {
        json cells = json::array();
        for (const auto& c : r.cells) cells.push_back({{"a", c.a}, {"c", c.c}});
        rows.push_back({{"b", r.b}, {"d", r.d}, {"cells", cells}});
    }
    return {{"rows", rows}};
}

inline json to_json(const LGScheme& scheme) { return to_json(scheme.description()); }

inline LGScheme scheme_from_json(const json& j) {
    return validate_scheme(scheme_description_from_json(j));
}

inline SchemeFamily family_from_json(const json& j) {
    if (j.is_object() && j.contains("rows")) return SchemeFamily{{scheme_from_json(j)}};
    if (!j.is_object() || !j.contains("schemes") || !j["schemes"].is_array())
        throw std::invalid_argument("family JSON must be an object with a \"schemes\" array");
    SchemeFamily fam;
    for (const auto& js : j["schemes"]) fam.schemes.push_back(scheme_from_json(js));
    if (fam.schemes.empty()) throw std::invalid_argument("family must contain at least one scheme");
    return fam;
}

inline json to_json(const SchemeFamily& family) {
    json schemes = json::array();
    for (const auto& s : family.schemes) schemes.push_back(to_json(s));
    return {{"schemes", schemes}};
}

inline SymbolSequence sequence_from_json(const json& j, int symbol_count = 0) {
    if (!j.is_object()) throw std::invalid_argument("sequence JSON must be an object");
    if (j.contains("periodic"))
        return SymbolSequence::periodic(j["periodic"].get<std::vector<int>>(), symbol_count);
    if (j.contains("explicit"))
        return SymbolSequence::explicit_prefix(j["explicit"].get<std::vector<int>>(), symbol_count);
    if (j.contains("bernoulli")) {
        const auto& jb = j["bernoulli"];
        auto p = FrequencyVector::from_entries(jb.at("p").get<std::vector<double>>());
        return SymbolSequence::bernoulli(std::move(p), jb.value("seed", 0ull));
    }
    throw std::invalid_argument(
        "sequence JSON must contain \"periodic\", \"explicit\" or \"bernoulli\"");
}

inline json to_json(const SymbolSequence& seq) {
    switch (seq.kind()) {
        case SymbolSequence::Kind::periodic:
            return {{"periodic", seq.word()}};
        case SymbolSequence::Kind::explicit_prefix:
            return {{"explicit", seq.word()}};
        case SymbolSequence::Kind::bernoulli:
            return {{"bernoulli", {{"p", seq.frequencies().entries}, {"seed", seq.seed()}}}};
    }
    throw std::logic_error("unreachable");
}

// "1/2,1/2" (exact rationals) or "0.5,0.5" (validated floats)
inline FrequencyVector frequencies_from_string(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);

    const bool rational =
        !parts.empty() && parts[0].find('/') != std::string::npos;
    if (rational) {
        std::int64_t den = 0;
        std::vector<std::int64_t> nums;
        for (const auto& p : parts) {
            const auto slash = p.find('/');
            if (slash == std::string::npos)
                throw std::invalid_argument("mixed rational/decimal frequency list: " + text);
            const std::int64_t n = std::stoll(p.substr(0, slash));
            const std::int64_t d = std::stoll(p.substr(slash + 1));
            if (d <= 0) throw std::invalid_argument("denominator must be positive in " + p);
            if (den == 0)
                den = d;
            else if (den != d)
                throw std::invalid_argument("all entries must share one denominator: " + text);
            nums.push_back(n);
        }
        return FrequencyVector::from_rational(std::move(nums), den);
    }
    std::vector<double> entries;
    for (const auto& p : parts) entries.push_back(std::stod(p));
    return FrequencyVector::from_entries(std::move(entries));
}

}  // namespace lgdim
