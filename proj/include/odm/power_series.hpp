/// @file power_series.hpp
/// @brief Divergent-series container with growth metadata, plus JSON exchange.
///
/// A PowerSeries holds exact rational coefficients E_0..E_K of a perturbative
/// expansion together with the parameters describing its large-order growth
/// E_k ~ k! A^{-k} k^b and the strong-coupling exponents (alpha, beta) used
/// by the conformal mapping.
///
/// Exchange format (JSON): rationals are [numerator, denominator] pairs of
/// decimal integer strings so arbitrary sizes survive the round trip.

#ifndef ODM_POWER_SERIES_HPP
#define ODM_POWER_SERIES_HPP

#include "numeric.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace odm {

struct PowerSeries {
    std::string model;
    Rational alpha{0};
    Rational beta{0};
    Rational A{0};
    std::optional<Rational> b;
    std::vector<Rational> coeffs; // E_0 .. E_K

    unsigned order() const {
        if (coeffs.empty()) throw domain_error("empty series");
        return static_cast<unsigned>(coeffs.size() - 1);
    }
};

namespace detail {

inline nlohmann::json rational_to_json(const Rational& q) {
    return nlohmann::json::array(
        {numerator(q).str(), denominator(q).str()});
}

inline Rational rational_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw schema_error(where + ": expected [numerator, denominator] string pair");
    Integer num, den;
    try {
        num = Integer(j[0].get<std::string>());
        den = Integer(j[1].get<std::string>());
    } catch (const std::exception&) {
        throw schema_error(where + ": not a decimal integer");
    }
    if (den == 0) throw schema_error(where + ": zero denominator");
    return Rational(num, den);
}

} // namespace detail

inline nlohmann::json to_json(const PowerSeries& s) {
    nlohmann::json j;
    j["model"] = s.model;
    j["alpha"] = detail::rational_to_json(s.alpha);
    j["beta"] = detail::rational_to_json(s.beta);
    j["A"] = detail::rational_to_json(s.A);
    j["b"] = s.b ? detail::rational_to_json(*s.b) : nlohmann::json(nullptr);
    j["coeffs"] = nlohmann::json::array();
    for (const auto& c : s.coeffs) j["coeffs"].push_back(detail::rational_to_json(c));
    return j;
}

inline PowerSeries series_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw schema_error("series: expected a JSON object");
    for (const char* key : {"model", "alpha", "beta", "A", "b", "coeffs"})
        if (!j.contains(key)) throw schema_error(std::string("series: missing key '") + key + "'");
    PowerSeries s;
    if (!j["model"].is_string()) throw schema_error("series.model: expected a string");
    s.model = j["model"].get<std::string>();
    s.alpha = detail::rational_from_json(j["alpha"], "series.alpha");
    s.beta = detail::rational_from_json(j["beta"], "series.beta");
    s.A = detail::rational_from_json(j["A"], "series.A");
    if (s.A <= 0) throw schema_error("series.A: must be positive");
    if (s.alpha <= 1) throw schema_error("series.alpha: must exceed 1");
    if (!j["b"].is_null()) s.b = detail::rational_from_json(j["b"], "series.b");
    if (!j["coeffs"].is_array() || j["coeffs"].empty())
        throw schema_error("series.coeffs: expected a nonempty array");
    size_t i = 0;
    for (const auto& c : j["coeffs"]) {
        s.coeffs.push_back(detail::rational_from_json(c, "series.coeffs[" + std::to_string(i) + "]"));
        ++i;
    }
    return s;
}

inline void save_series(const PowerSeries& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw domain_error("cannot open '" + path + "' for writing");
    f << to_json(s).dump(2) << "\n";
}

inline PowerSeries load_series(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw domain_error("cannot open '" + path + "' for reading");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw schema_error(std::string("series: invalid JSON: ") + e.what());
    }
    return series_from_json(j);
}

} // namespace odm

#endif
