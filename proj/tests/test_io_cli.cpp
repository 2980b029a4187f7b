#include <catch2/catch.hpp>

#include <filesystem>

#include "hv/cmds.hpp"
#include "test_util.hpp"

using namespace hv;

namespace {

RunConfig small_config() {
    RunConfig cfg;
    cfg.digits = 40;
    cfg.order = 100;
    cfg.cache_dir.clear();
    return cfg;
}

} // namespace

TEST_CASE("phi parsing") {
    ScopedPrecision guard(50);
    auto [p1, q1] = parse_phi("1/64");
    REQUIRE(q1.has_value());
    REQUIRE(*q1 == Rational(1, 64));
    auto [p2, q2] = parse_phi("0.105");
    REQUIRE(*q2 == Rational(21, 200));
    auto [p3, q3] = parse_phi("1/10+1/10i");
    REQUIRE_FALSE(q3.has_value());
    REQUIRE(p3.real() == make_real(Rational(1, 10)));
    REQUIRE(p3.imag() == make_real(Rational(1, 10)));
    auto [p4, q4] = parse_phi("0.1-0.2i");
    REQUIRE(p4.imag() == make_real(Rational(-1, 5)));
    REQUIRE_THROWS_AS(parse_phi("abc"), config_error);
}

TEST_CASE("operator JSON round trip") {
    ScopedPrecision guard(50);
    auto op = elliptic_operator<Rational>(Rational(3, 7));
    auto j = operator_to_json(op);
    auto back = operator_from_json(j);
    REQUIRE(back.order == op.order);
    REQUIRE(back.shift == op.shift);
    for (unsigned i = 0; i <= op.order; ++i) REQUIRE(back.coeffs[i] == op.coeffs[i]);
    Json bad = j;
    bad.erase("coefficients");
    REQUIRE_THROWS_AS(operator_from_json(bad), config_error);
}

TEST_CASE("contour files reproduce the built-in contours") {
    ScopedPrecision guard(60);
    PrecisionContext ctx(50, 120, pow(Real(10), -22));
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    for (std::string name : {"vanishing-1-9", "vanishing-1-25", "t3-holomorphic"}) {
        auto from_file = contour_from_json(pair, builtin_contour_json(name), +1);
        auto direct = builtin_contour(pair, name, +1);
        REQUIRE(from_file.closed == direct.closed);
        REQUIRE(from_file.path.pieces.size() == direct.path.pieces.size());
        REQUIRE(abs(from_file.path.start() - direct.path.start()) < pow(Real(10), -30));
        REQUIRE(abs(from_file.path.end() - direct.path.end()) < pow(Real(10), -30));
        REQUIRE(from_file.start_obstacle == direct.start_obstacle);
        REQUIRE(from_file.end_obstacle == direct.end_obstacle);
    }
    REQUIRE_THROWS_AS(builtin_contour_json("nope"), config_error);
}

TEST_CASE("identity files parse") {
    ScopedPrecision guard(60);
    PrecisionContext ctx(50, 120, pow(Real(10), -22));
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    Json j;
    j["name"] = "vanishing-1-9";
    j["phi"] = "1/64";
    j["gamma"] = {"1/2", "0", "-5/2", "1/2"};
    j["terms"] = Json::array({{{"G", {{"g1", {1, 0}}, {"g2", {1, 1}}}}, {"contour", "vanishing-1-9"}}});
    auto spec = identity_from_json(pair, j, +1);
    REQUIRE(spec.gamma_claimed.has_value());
    REQUIRE((*spec.gamma_claimed)[2] == Rational(-5, 2));
    REQUIRE(spec.terms.size() == 1);
    REQUIRE(spec.terms[0].split.has_value());
    // inline contours and plain-G forms are accepted too
    Json j2 = j;
    j2["terms"] = Json::array({{{"G", {0, 0, -1, 1}}, {"contour", builtin_contour_json("vanishing-1-9")}}});
    auto spec2 = identity_from_json(pair, j2, +1);
    REQUIRE(spec2.terms[0].inline_spec.has_value());
    REQUIRE(spec2.terms[0].g == std::vector<long>{0, 0, -1, 1});
}

TEST_CASE("disk cache round trip is bit-identical") {
    ScopedPrecision guard(80);
    std::string dir = "/tmp/hv_cache_test";
    std::filesystem::remove_all(dir);
    DiskCache cache(dir);
    Matrix<Complex> m(2, 2);
    m(0, 0) = exp(Complex(Real(1) / 3, Real(2) / 7));
    m(0, 1) = -sqrt(Complex(Real(2)));
    m(1, 0) = Complex(0);
    m(1, 1) = pi_value();
    cache.store_matrix("probe-key", m);
    auto back = cache.load_matrix("probe-key", 80);
    REQUIRE(back.has_value());
    for (std::size_t k = 0; k < m.a.size(); ++k) {
        REQUIRE((*back).a[k].real() == m.a[k].real());
        REQUIRE((*back).a[k].imag() == m.a[k].imag());
    }
    REQUIRE_FALSE(cache.load_matrix("other-key", 80).has_value());
}

TEST_CASE("cmd_conjecture: verdicts, reproducibility, and errors") {
    auto cfg = small_config();
    auto r1 = cmd_conjecture(cfg, {"1"});
    REQUIRE(r1.exit_code == exit_ok);
    REQUIRE(r1.report["results"]["conjecture_holds"].get<bool>());
    // bit-identical reports for identical configuration (timings excluded)
    auto r2 = cmd_conjecture(cfg, {"1"});
    Json a = r1.report, b = r2.report;
    a.erase("timings_ms");
    b.erase("timings_ms");
    REQUIRE(a.dump() == b.dump());

    auto bad = run_guarded([&] { return cmd_conjecture(cfg, {}); });
    REQUIRE(bad.exit_code == exit_config_error);
    auto bad2 = run_guarded([&] { return cmd_conjecture(cfg, {"0"}); });
    REQUIRE(bad2.exit_code == exit_config_error);
}

TEST_CASE("cmd_monodromy writes the six tables and uses the cache") {
    auto cfg = small_config();
    std::string dir = "/tmp/hv_cache_cmd";
    std::filesystem::remove_all(dir);
    cfg.cache_dir = dir;
    auto r1 = cmd_monodromy(cfg);
    REQUIRE(r1.exit_code == exit_ok);
    REQUIRE(r1.report["results"]["monodromies"].size() == 7); // six + apparent point
    REQUIRE(std::filesystem::exists(dir));
    std::size_t files = std::distance(std::filesystem::directory_iterator(dir),
                                      std::filesystem::directory_iterator{});
    REQUIRE(files > 0);
    // cached rerun is bit-identical
    auto r2 = cmd_monodromy(cfg);
    Json a = r1.report, b = r2.report;
    a.erase("timings_ms");
    b.erase("timings_ms");
    REQUIRE(a.dump() == b.dump());
}

TEST_CASE("cmd_monodromy handles the degenerate phi=1 configuration") {
    auto cfg = small_config();
    cfg.phi_text = "1";
    auto r = cmd_monodromy(cfg);
    REQUIRE(r.exit_code == exit_ok);
    REQUIRE(r.report["results"]["monodromies"].size() == 3); // {0, 1, 1/9}
}

TEST_CASE("integral period basis tag") {
    ScopedPrecision guard(60);
    PrecisionContext ctx(50, 80, pow(Real(10), -22));
    ctx.activate();
    auto tagged = integral_period_basis(make_complex(Rational(1)), Rational(1), ctx);
    // at phi = 1 the matrix reduces to [[2 pi i, 0], [0, 3]]
    REQUIRE(abs(tagged.tag.change_of_basis(1, 0)) < pow(Real(10), -40));
    REQUIRE(abs(tagged.tag.change_of_basis(1, 1) - Complex(3)) < pow(Real(10), -40));
    REQUIRE(tagged.basis.sols.size() == 2);
}

TEST_CASE("cmd_identity rejects unknown names") {
    auto cfg = small_config();
    auto r = run_guarded([&] { return cmd_identity(cfg, "no-such-identity"); });
    REQUIRE(r.exit_code == exit_config_error);
    REQUIRE(r.report.contains("error"));
}

TEST_CASE("cmd_gamma control experiment reports no relation") {
    auto cfg = small_config();
    cfg.digits = 60;
    cfg.order = 120;
    cfg.digits_used = 30;
    auto r = cmd_gamma(cfg, "control-transcendental");
    REQUIRE(r.exit_code == exit_ok);
    REQUIRE_FALSE(r.report["results"]["found"].get<bool>());
}
