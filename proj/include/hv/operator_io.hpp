#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "hv/fuchsian.hpp"

namespace hv {

using Json = nlohmann::json;

// Operator data file: coefficients[i][j] is the x^j coefficient (exact
// rational string) of the (theta+shift)^i term.
inline Json operator_to_json(const FuchsianOperator<Rational>& op) {
    Json j;
    j["name"] = op.name;
    j["order"] = op.order;
    j["shift"] = rational_to_string(op.shift);
    j["variable"] = op.variable;
    Json coeffs = Json::array();
    for (auto& p : op.coeffs) {
        Json row = Json::array();
        for (auto& c : p.c) row.push_back(rational_to_string(c));
        coeffs.push_back(row);
    }
    j["coefficients"] = coeffs;
    return j;
}

inline FuchsianOperator<Rational> operator_from_json(const Json& j) {
    FuchsianOperator<Rational> op;
    try {
        op.name = j.at("name").get<std::string>();
        op.order = j.at("order").get<unsigned>();
        op.shift = parse_rational(j.at("shift").get<std::string>());
        op.variable = j.value("variable", std::string("lambda"));
        for (auto& row : j.at("coefficients")) {
            std::vector<Rational> c;
            for (auto& v : row) c.push_back(parse_rational(v.get<std::string>()));
            op.coeffs.push_back(RationalPoly(std::move(c)));
        }
    } catch (const Json::exception& e) {
        throw config_error(std::string("malformed operator file: ") + e.what());
    }
    op.validate();
    return op;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw config_error("cannot parse JSON in '" + path + "': " + e.what());
    }
    return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << j.dump(1) << "\n";
}

inline FuchsianOperator<Rational> load_operator_file(const std::string& path) {
    return operator_from_json(load_json_file(path));
}

} // namespace hv
