#pragma once

#include <json.hpp>
#include <string>

#include "pwfn.hpp"

namespace fivol {

inline nlohmann::json pwfn_to_json(const PiecewiseFn& fn) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pc : fn.pieces) {
        nlohmann::json jp;
        jp["interval"] = nlohmann::json::array();
        jp["interval"].push_back(pc.a);
        if (pc.b == kInf)
            jp["interval"].push_back(nullptr);
        else
            jp["interval"].push_back(pc.b);
        nlohmann::json coeffs = nlohmann::json::object();
        for (const auto& t : pc.terms) {
            std::string key = std::to_string(t.e);
            if (t.p > 0) key += ":" + std::to_string(t.p);
            coeffs[key] = t.c;
        }
        jp["coefficients"] = std::move(coeffs);
        arr.push_back(std::move(jp));
    }
    return arr;
}

inline PiecewiseFn pwfn_from_json(const nlohmann::json& arr, bool allow_unbounded) {
    if (!arr.is_array()) throw_parse("pieces: expected an array");
    PiecewiseFn fn;
    for (const auto& jp : arr) {
        if (!jp.contains("interval") || !jp["interval"].is_array() || jp["interval"].size() != 2)
            throw_parse("piece needs 'interval' [a,b]");
        Piece pc;
        pc.a = jp["interval"][0].get<double>();
        pc.b = jp["interval"][1].is_null() ? kInf : jp["interval"][1].get<double>();
        if (!(pc.a >= 0.0) || !(pc.b > pc.a)) throw_parse("bad interval in piece");
        if (pc.b == kInf && !allow_unbounded) throw_parse("support must be bounded");
        if (!jp.contains("coefficients") || !jp["coefficients"].is_object())
            throw_parse("piece needs 'coefficients' object");
        for (auto it = jp["coefficients"].begin(); it != jp["coefficients"].end(); ++it) {
            const std::string& key = it.key();
            int e = 0, p = 0;
            size_t colon = key.find(':');
            try {
                e = std::stoi(key.substr(0, colon));
                if (colon != std::string::npos) p = std::stoi(key.substr(colon + 1));
            } catch (const std::exception&) {
                throw_parse("bad coefficient key '" + key + "'");
            }
            if (e < -12 || e > 12 || p < 0 || p > 6)
                throw_parse("coefficient key outside the supported family");
            pc.terms.push_back({e, p, it.value().get<double>()});
        }
        fn.pieces.push_back(std::move(pc));
    }
    fn.normalize();
    return fn;
}

}  // namespace fivol
