#pragma once

#include <filesystem>
#include <functional>

#include "hv/relations.hpp"

namespace hv {

// ---- scalar/matrix serialization ------------------------------------------

inline std::string complex_to_decimal(const Complex& z, unsigned digits) {
    return z.real().str(digits) + (z.imag() < 0 ? "" : "+") + z.imag().str(digits) + "i";
}

inline Json complex_to_json(const Complex& z, unsigned digits) {
    Json j;
    j["re"] = z.real().str(digits);
    j["im"] = z.imag().str(digits);
    return j;
}

inline Json complex_to_hex_json(const Complex& z) {
    Json j;
    j["re"] = real_to_hex(z.real());
    j["im"] = real_to_hex(z.imag());
    return j;
}

inline Complex complex_from_hex_json(const Json& j, unsigned digits) {
    return Complex(real_from_hex(j.at("re").get<std::string>(), digits),
                   real_from_hex(j.at("im").get<std::string>(), digits));
}

inline Json matrix_to_json(const Matrix<Complex>& m, unsigned digits, bool as_integers) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (as_integers)
                row.push_back(nearest_integer(m(i, j).real()).str());
            else
                row.push_back(complex_to_json(m(i, j), digits));
        }
        rows.push_back(row);
    }
    return rows;
}

inline Json matrix_to_hex_json(const Matrix<Complex>& m) {
    Json j;
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    Json data = Json::array();
    for (auto& v : m.a) data.push_back(complex_to_hex_json(v));
    j["data"] = data;
    return j;
}

inline Matrix<Complex> matrix_from_hex_json(const Json& j, unsigned digits) {
    Matrix<Complex> m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    std::size_t k = 0;
    for (auto& v : j.at("data")) m.a.at(k++) = complex_from_hex_json(v, digits);
    return m;
}

// ---- phi parsing -----------------------------------------------------------

// accepts "1/64", "0.105", "2", and complex forms "1/10+1/10i", "0.1-0.2i"
inline std::pair<Complex, std::optional<Rational>> parse_phi(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) throw config_error("empty phi");
    if (s.back() == 'i') {
        // split into real and imaginary parts at the last +/- that is not leading
        std::string body = s.substr(0, s.size() - 1);
        std::size_t split = std::string::npos;
        for (std::size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != '/' && body[k - 1] != '+' &&
                body[k - 1] != '-' && body[k - 1] != 'e') {
                split = k;
                break;
            }
        }
        if (split == std::string::npos) throw config_error("cannot parse complex phi '" + text + "'");
        Rational re = parse_rational(body.substr(0, split));
        std::string im_text = body.substr(split);
        if (im_text == "+" || im_text == "-") im_text += "1";
        Rational im = parse_rational(im_text);
        return {Complex(make_real(re), make_real(im)), std::nullopt};
    }
    Rational q = parse_rational(s);
    return {make_complex(q), q};
}

// ---- contour files ---------------------------------------------------------

// {"name":..., "kind":"open-segment-chain"|"closed-loop-composition",
//  "pieces":[ {"type":"leg","from":...,"to":...,"detour":"upper"} |
//             {"type":"loop","around":"lambda=..."} ]}
// point spec: singularity name, rational/decimal string, or {"re":...,"im":...}
inline Complex resolve_point(const EllipticPair& pair, const Json& j,
                             std::optional<std::size_t>* obstacle_out) {
    if (obstacle_out) obstacle_out->reset();
    if (j.is_object()) {
        Real re = make_real(parse_rational(j.at("re").get<std::string>()));
        Real im = make_real(parse_rational(j.at("im").get<std::string>()));
        return Complex(re, im);
    }
    std::string s = j.get<std::string>();
    if (s.rfind("lambda=", 0) == 0) {
        std::size_t idx = resolve_obstacle(pair, s);
        if (obstacle_out) *obstacle_out = idx;
        return pair.obstacles().points[idx];
    }
    return make_complex(parse_rational(s));
}

inline ContourSpec contour_from_json(const EllipticPair& pair, const Json& j, int default_side) {
    ContourSpec spec;
    try {
        spec.name = j.value("name", std::string("contour"));
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "closed-loop-composition") spec.closed = true;
        else if (kind != "open-segment-chain") throw config_error("unknown contour kind '" + kind + "'");
        std::vector<PlanePath> parts;
        bool first = true;
        for (auto& pj : j.at("pieces")) {
            std::string type = pj.at("type").get<std::string>();
            if (type == "loop") {
                if (!spec.closed) throw config_error("loop pieces belong to closed contours");
                std::size_t idx = resolve_obstacle(pair, pj.at("around").get<std::string>());
                int orient = pj.value("orientation", 1);
                parts.push_back(standard_loop(pair.basepoint(), idx, pair.obstacles(), orient,
                                              default_side));
            } else if (type == "leg") {
                std::optional<std::size_t> from_obs, to_obs;
                Complex from = resolve_point(pair, pj.at("from"), &from_obs);
                Complex to = resolve_point(pair, pj.at("to"), &to_obs);
                int side = default_side;
                if (pj.contains("detour"))
                    side = pj.at("detour").get<std::string>() == "lower" ? -1 : +1;
                Obstacles blockers = pair.obstacles();
                if (from_obs) blockers.exclusion[*from_obs] = Real(0);
                if (to_obs) blockers.exclusion[*to_obs] = Real(0);
                PlanePath leg = route_avoiding(from, to, Real(0), blockers, to_obs, side);
                if (first) spec.start_obstacle = from_obs;
                spec.end_obstacle = to_obs;
                parts.push_back(leg);
            } else {
                throw config_error("unknown contour piece type '" + type + "'");
            }
            first = false;
        }
        spec.path = compose(parts, pow(Real(10), -static_cast<int>(Real::default_precision() / 2)));
    } catch (const Json::exception& e) {
        throw config_error(std::string("malformed contour file: ") + e.what());
    }
    return spec;
}

inline Json builtin_contour_json(const std::string& name) {
    Json j;
    j["name"] = name;
    if (name == "vanishing-1-9") {
        j["kind"] = "open-segment-chain";
        j["pieces"] = Json::array(
            {{{"type", "leg"}, {"from", "lambda=varphi"}, {"to", "lambda=1/9"}, {"detour", "upper"}}});
        return j;
    }
    if (name == "vanishing-1-25") {
        j["kind"] = "open-segment-chain";
        j["pieces"] = Json::array({{{"type", "leg"},
                                    {"from", "lambda=varphi/(1-2sqrt(varphi))^2"},
                                    {"to", "lambda=1/9"},
                                    {"detour", "upper"}}});
        return j;
    }
    if (name == "t3-holomorphic") {
        j["kind"] = "closed-loop-composition";
        Json pieces = Json::array();
        for (std::string nm : {"lambda=0", "lambda=varphi/(1+2sqrt(varphi))^2", "lambda=varphi",
                               "lambda=varphi/(1-2sqrt(varphi))^2"})
            pieces.push_back({{"type", "loop"}, {"around", nm}});
        j["pieces"] = pieces;
        return j;
    }
    throw config_error("unknown built-in contour '" + name + "'");
}

// ---- identity files --------------------------------------------------------

inline IdentitySpec identity_from_json(const EllipticPair& pair, const Json& j, int default_side) {
    IdentitySpec spec;
    try {
        spec.name = j.value("name", std::string("identity"));
        spec.phi = parse_rational(j.at("phi").get<std::string>());
        if (j.contains("gamma")) {
            std::vector<Rational> g;
            for (auto& v : j.at("gamma")) g.push_back(parse_rational(v.get<std::string>()));
            if (g.size() != 4) throw config_error("gamma must have 4 entries");
            spec.gamma_claimed = g;
        }
        for (auto& tj : j.at("terms")) {
            IdentityTerm term;
            const Json& gj = tj.at("G");
            if (gj.is_array()) {
                for (auto& v : gj) term.g.push_back(v.get<long>());
                if (term.g.size() != 4) throw config_error("G must have 4 entries");
            } else {
                std::vector<long> g1, g2;
                for (auto& v : gj.at("g1")) g1.push_back(v.get<long>());
                for (auto& v : gj.at("g2")) g2.push_back(v.get<long>());
                term.split = {g1, g2};
            }
            const Json& cj = tj.at("contour");
            if (cj.is_string()) term.contour = cj.get<std::string>();
            else term.inline_spec = contour_from_json(pair, cj, default_side);
            spec.terms.push_back(term);
        }
    } catch (const Json::exception& e) {
        throw config_error(std::string("malformed identity file: ") + e.what());
    }
    return spec;
}

// ---- disk cache ------------------------------------------------------------

// Values are stored as exact hex scalars, so a cache hit reproduces the
// computed value bit for bit.
class DiskCache {
public:
    DiskCache() = default;
    explicit DiskCache(std::string dir) : dir_(std::move(dir)) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    bool enabled() const { return !dir_.empty(); }

    std::optional<Matrix<Complex>> load_matrix(const std::string& key, unsigned digits) const {
        if (!enabled()) return std::nullopt;
        auto path = file_for(key);
        if (!std::filesystem::exists(path)) return std::nullopt;
        Json j = load_json_file(path);
        if (j.value("key", std::string()) != key) return std::nullopt;
        return matrix_from_hex_json(j.at("matrix"), digits);
    }

    void store_matrix(const std::string& key, const Matrix<Complex>& m) const {
        if (!enabled()) return;
        Json j;
        j["key"] = key;
        j["matrix"] = matrix_to_hex_json(m);
        save_json_file(file_for(key), j);
    }

private:
    std::string file_for(const std::string& key) const {
        std::size_t h = std::hash<std::string>{}(key);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016zx", h);
        return dir_ + "/" + buf + ".json";
    }

    std::string dir_;
};

} // namespace hv
