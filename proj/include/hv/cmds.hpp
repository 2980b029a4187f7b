#pragma once

#include <chrono>
#include <cstdlib>

#include "hv/io.hpp"
#include "hv/version.hpp"

namespace hv {

// Exit codes of the command layer.
enum ExitCode : int {
    exit_ok = 0,
    exit_computation_failed = 1,
    exit_config_error = 2,
    exit_violation = 3,
};

struct RunConfig {
    std::string phi_text = "1/64";
    unsigned digits = 120;
    unsigned order = 400;
    int tolerance_exponent = -40;
    std::string detour = "upper";
    long max_denominator = 4;
    unsigned digits_used = 40;
    std::string out_path;
    std::string cache_dir; // default from HV_CACHE_DIR
    std::string contour_file;
    std::string aesz_file;

    RunConfig() {
        if (const char* env = std::getenv("HV_CACHE_DIR")) cache_dir = env;
    }

    void validate() const {
        if (digits < 20 || digits > 100000) throw config_error("digits out of range");
        if (order < 16 || order > 100000) throw config_error("order out of range");
        if (max_denominator < 1) throw config_error("max denominator must be positive");
        if (detour != "upper" && detour != "lower") throw config_error("detour must be upper or lower");
    }

    int side() const { return detour == "lower" ? -1 : +1; }

    PrecisionContext context() const {
        ScopedPrecision guard(digits + 10);
        return PrecisionContext(digits, order, pow(Real(10), effective_tolerance_exponent()));
    }

    int effective_tolerance_exponent() const {
        return std::max(tolerance_exponent, -static_cast<int>(digits) / 2);
    }

    // spec thresholds at standard precision, floored at the noise level of
    // reduced-precision runs
    Real integrality_tolerance() const {
        return std::max(pow(Real(10), -20), pow(Real(10), -static_cast<int>(digits) + 15));
    }
    Real det_tolerance() const {
        return std::max(pow(Real(10), -30), pow(Real(10), -static_cast<int>(digits) + 15));
    }
    Real identity_tolerance() const {
        return std::max(pow(Real(10), -30), pow(Real(10), effective_tolerance_exponent() + 2));
    }

    Json echo() const {
        Json j;
        j["phi"] = phi_text;
        j["digits"] = digits;
        j["order"] = order;
        j["tolerance"] = "1e" + std::to_string(effective_tolerance_exponent());
        j["detour"] = detour;
        j["max_denominator"] = max_denominator;
        j["digits_used"] = digits_used;
        if (!cache_dir.empty()) j["cache_dir"] = cache_dir;
        if (!contour_file.empty()) j["contour_file"] = contour_file;
        return j;
    }

    FuchsianOperator<Rational> aesz34() const {
        if (!aesz_file.empty()) return load_aesz34(aesz_file);
        return mum_normalized(aesz34_operator_raw());
    }
};

struct CommandResult {
    Json report;
    int exit_code = exit_ok;
};

namespace cmd_detail {

inline Json base_report(const std::string& command, const RunConfig& cfg) {
    Json j;
    j["command"] = command;
    j["version"] = HV_VERSION;
    j["config"] = cfg.echo();
    j["conventions"] = {{"log_branch", "principal"},
                        {"route", cfg.detour + " half-plane"},
                        {"loops", "anticlockwise"},
                        {"composition", "traversal order, germ = product of transitions"}};
    return j;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// preload cached loop monodromies into a transporter; flush new ones back
struct CacheBinding {
    DiskCache cache;
    std::vector<Transporter*> transporters;

    void flush() const {
        if (!cache.enabled()) return;
        for (auto* tr : transporters)
            for (auto& [key, m] : tr->memo_snapshot()) cache.store_matrix(key, m);
    }
};

inline void preload(Transporter& tr, const DiskCache& cache, const RunConfig& cfg,
                    const Complex& basepoint, int orientation, int side) {
    if (!cache.enabled()) return;
    for (std::size_t idx = 0; idx < tr.obstacles().points.size(); ++idx) {
        std::string key = "mono|" + tr.op().id + "|" + std::to_string(idx) + "|" +
                          std::to_string(orientation) + "|" + std::to_string(side) + "|" +
                          real_to_hex(basepoint.real()) + "|" + real_to_hex(basepoint.imag());
        std::string full = key + "|d" + std::to_string(cfg.digits) + "|n" + std::to_string(cfg.order);
        if (auto hit = cache.load_matrix(full, cfg.digits)) tr.memo_store(key, *hit);
    }
}

inline void flush(Transporter& tr, const DiskCache& cache, const RunConfig& cfg) {
    if (!cache.enabled()) return;
    for (auto& [key, m] : tr.memo_snapshot())
        cache.store_matrix(key + "|d" + std::to_string(cfg.digits) + "|n" + std::to_string(cfg.order), m);
}

inline Json quadrature_json(const QuadratureResult& q) {
    Json j;
    j["node_count"] = q.node_count;
    j["error_estimate"] = q.error_estimate.str(6);
    j["digits"] = q.digits;
    return j;
}

} // namespace cmd_detail

// The six monodromy tables of the tensor basis at the configured phi, in
// tensor-factor form, with integrality / determinant diagnostics.
inline CommandResult cmd_monodromy(const RunConfig& cfg) {
    using namespace cmd_detail;
    auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    auto ctx = cfg.context();
    ctx.activate();
    auto [phi, phi_exact] = parse_phi(cfg.phi_text);
    if (phi == Complex(0)) throw config_error("phi must be nonzero");
    Json report = base_report("monodromy", cfg);

    EllipticPair pair(phi, phi_exact, ctx);
    DiskCache cache(cfg.cache_dir);
    preload(pair.transporter_one(), cache, cfg, pair.basepoint(), +1, cfg.side());
    preload(pair.transporter_two(), cache, cfg, pair.basepoint(), +1, cfg.side());

    Real int_tol = cfg.integrality_tolerance();
    Real det_tol = cfg.det_tolerance();
    bool all_ok = true;
    Json entries = Json::array();
    for (std::size_t idx = 0; idx < pair.obstacles().points.size(); ++idx) {
        auto [f1, f2] = pair.factor_monodromies(idx, +1, cfg.side());
        auto e1 = classify_integral("factor1", pair.obstacles().points[idx], f1);
        auto e2 = classify_integral("factor2", pair.obstacles().points[idx], f2);
        Json e;
        e["location"] = complex_to_json(pair.obstacles().points[idx], cfg.digits / 2);
        bool ok = e1.integer_distance < int_tol && e2.integer_distance < int_tol &&
                  e1.det_deviation < det_tol && e2.det_deviation < det_tol;
        e["factor_one"] = matrix_to_json(f1, 30, ok);
        e["factor_two"] = matrix_to_json(f2, 30, ok);
        e["tensor"] = matrix_to_json(kronecker(f1, f2), 30, ok);
        e["integer_distance"] = std::max(e1.integer_distance, e2.integer_distance).str(6);
        e["det_deviation"] = std::max(e1.det_deviation, e2.det_deviation).str(6);
        e["integral"] = ok;
        all_ok = all_ok && ok;
        entries.push_back(e);
    }
    report["results"]["monodromies"] = entries;
    flush(pair.transporter_one(), cache, cfg);
    flush(pair.transporter_two(), cache, cfg);
    report["timings_ms"] = seconds_since(t0) * 1000;
    return {report, all_ok ? exit_ok : exit_violation};
}

// LHS, RHS, residual and certificates of a shipped or file-based identity.
inline CommandResult cmd_identity(const RunConfig& cfg, const std::string& name) {
    using namespace cmd_detail;
    auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    auto ctx = cfg.context();
    ctx.activate();
    auto [phi, phi_exact] = parse_phi(cfg.phi_text);
    if (!phi_exact) throw config_error("identity evaluation requires rational phi");
    Json report = base_report("identity", cfg);

    EllipticPair pair(phi, phi_exact, ctx);
    ThreefoldSystem threefold(cfg.aesz34(), ctx);
    IdentitySpec spec;
    if (name == "vanishing-1-9" || name == "vanishing-1-25" || name == "t3-holomorphic")
        spec = builtin_identity(name, *phi_exact);
    else if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
        spec = identity_from_json(pair, load_json_file(name), cfg.side());
    else
        throw config_error("unknown identity '" + name + "'");
    if (!cfg.contour_file.empty()) {
        auto contour = contour_from_json(pair, load_json_file(cfg.contour_file), cfg.side());
        for (auto& term : spec.terms) term.inline_spec = contour;
    }

    auto rep = verify_identity(pair, threefold, spec, ctx, cfg.side());
    report["results"]["name"] = rep.name;
    report["results"]["lhs"] = complex_to_json(rep.lhs, cfg.digits / 2);
    report["results"]["rhs"] = complex_to_json(rep.rhs, cfg.digits / 2);
    report["results"]["residual"] = rep.residual.str(6);
    report["results"]["invariance"] = rep.invariance;
    report["certificates"]["quadrature"] = quadrature_json(rep.quadrature);
    report["timings_ms"] = seconds_since(t0) * 1000;
    bool ok = rep.invariance && rep.residual < cfg.identity_tolerance();
    return {report, ok ? exit_ok : exit_violation};
}

// Recover gamma by integer-relation search, with the claimed value withheld.
inline CommandResult cmd_gamma(const RunConfig& cfg, const std::string& name) {
    using namespace cmd_detail;
    auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    auto ctx = cfg.context();
    ctx.activate();
    auto [phi, phi_exact] = parse_phi(cfg.phi_text);
    if (!phi_exact) throw config_error("gamma recovery requires rational phi");
    Json report = base_report("gamma", cfg);

    EllipticPair pair(phi, phi_exact, ctx);
    ThreefoldSystem threefold(cfg.aesz34(), ctx);
    auto pi = threefold.pi_vector(make_complex(*phi_exact));

    Complex rhs(0);
    QuadratureResult quad;
    if (name == "control-transcendental") {
        // deliberately transcendental combination: no rational relation exists
        rhs = make_complex(pi_value()) * pi[0];
        report["results"]["control"] = true;
    } else {
        IdentitySpec spec;
        if (name == "vanishing-1-9" || name == "vanishing-1-25" || name == "t3-holomorphic")
            spec = builtin_identity(name, *phi_exact);
        else
            spec = identity_from_json(pair, load_json_file(name), cfg.side());
        if (!cfg.contour_file.empty()) {
            auto contour = contour_from_json(pair, load_json_file(cfg.contour_file), cfg.side());
            for (auto& term : spec.terms) term.inline_spec = contour;
        }
        for (auto& term : spec.terms) {
            ContourSpec contour = term.inline_spec ? *term.inline_spec
                                                   : builtin_contour(pair, term.contour, cfg.side());
            auto r = integrate_paired(pair, contour, term.pairing(), ctx);
            rhs += r.value;
            quad += r;
        }
        report["certificates"]["quadrature"] = quadrature_json(quad);
    }

    auto result = find_gamma(rhs, pi, Integer(cfg.max_denominator), cfg.digits_used);
    Json res;
    res["found"] = result.found;
    res["ambiguous"] = result.ambiguous;
    if (!result.message.empty()) res["message"] = result.message;
    if (result.found) {
        Json g = Json::array();
        for (auto& q : result.gamma) g.push_back(rational_to_string(q));
        res["gamma"] = g;
        res["residual"] = result.residual.str(6);
    }
    if (!result.relation.empty()) {
        Json rel = Json::array();
        for (auto& m : result.relation) rel.push_back(m.str());
        res["lattice_certificate"]["relation"] = rel;
        res["lattice_certificate"]["norm"] = result.relation_norm.str(8);
        res["lattice_certificate"]["next_norm"] = result.next_norm.str(8);
        res["lattice_certificate"]["separation"] = result.separation.str(8);
    }
    report["results"] = res;
    report["timings_ms"] = seconds_since(t0) * 1000;
    return {report, exit_ok};
}

// Integrality / determinant verdicts of the elliptic basis monodromies for a
// list of phi values.
inline CommandResult cmd_conjecture(const RunConfig& cfg, const std::vector<std::string>& phis) {
    using namespace cmd_detail;
    auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    if (phis.empty()) throw config_error("conjecture check requires at least one phi");
    auto ctx = cfg.context();
    ctx.activate();
    Json report = base_report("conjecture", cfg);
    Real int_tol = cfg.integrality_tolerance();
    Real det_tol = cfg.det_tolerance();
    bool all_ok = true;
    Json runs = Json::array();
    for (auto& text : phis) {
        auto [phi, phi_exact] = parse_phi(text);
        if (phi == Complex(0)) throw config_error("phi must be nonzero");
        EllipticRunner runner(EllipticSystem::make(phi, phi_exact), ctx);
        Json entries = Json::array();
        bool run_ok = true;
        for (auto& entry : runner.conjecture_check(cfg.side())) {
            Json e;
            e["name"] = entry.name;
            e["location"] = complex_to_json(entry.location, cfg.digits / 2);
            bool ok = entry.integer_distance < int_tol && entry.det_deviation < det_tol;
            e["mu"] = matrix_to_json(entry.mu, 30, ok);
            e["integer_distance"] = entry.integer_distance.str(6);
            e["det_deviation"] = entry.det_deviation.str(6);
            e["integral"] = ok;
            run_ok = run_ok && ok;
            entries.push_back(e);
        }
        Json run;
        run["phi"] = text;
        run["monodromies"] = entries;
        run["all_integral"] = run_ok;
        runs.push_back(run);
        all_ok = all_ok && run_ok;
    }
    report["results"]["runs"] = runs;
    report["results"]["conjecture_holds"] = all_ok;
    report["timings_ms"] = seconds_since(t0) * 1000;
    return {report, all_ok ? exit_ok : exit_violation};
}

// Precision policy: on a tail-bound or node-budget failure, retry once with
// the truncation order doubled, then fail loudly.
inline CommandResult with_order_retry(RunConfig cfg,
                                      const std::function<CommandResult(const RunConfig&)>& body) {
    try {
        return body(cfg);
    } catch (const precision_error&) {
        cfg.order *= 2;
        return body(cfg);
    }
}

// Maps exceptions onto the documented exit codes and renders the error as a
// structured report.
inline CommandResult run_guarded(const std::function<CommandResult()>& body) {
    try {
        return body();
    } catch (const config_error& e) {
        Json j;
        j["error"] = {{"kind", "configuration"}, {"message", e.what()}};
        return {j, exit_config_error};
    } catch (const precision_error& e) {
        Json j;
        j["error"] = {{"kind", "computation"}, {"message", e.what()}};
        return {j, exit_computation_failed};
    } catch (const error& e) {
        Json j;
        j["error"] = {{"kind", "computation"}, {"message", e.what()}};
        return {j, exit_computation_failed};
    }
}

} // namespace hv
