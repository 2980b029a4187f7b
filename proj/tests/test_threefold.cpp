#include <catch2/catch.hpp>

#include "hv/hv_threefold.hpp"
#include "test_util.hpp"

using namespace hv;
using hvtest::close;

namespace {

PrecisionContext tf_ctx(unsigned digits = 60, unsigned order = 160) {
    ScopedPrecision guard(digits + 10);
    return PrecisionContext(digits, order, pow(Real(10), -static_cast<int>(digits) / 2 + 2));
}

std::string asset_path() { return std::string(HV_SOURCE_DIR) + "/data/aesz34.json"; }

} // namespace

TEST_CASE("zeta(3) series value") {
    ScopedPrecision guard(60);
    Real z = TopologicalData::zeta3_value();
    Real known("1.2020569031595942853997381615114499907649862923405");
    REQUIRE(abs(z - known) < hvtest::tol10(-48));
}

TEST_CASE("aesz34 asset loads, validates, and matches the built-in operator") {
    auto ctx = tf_ctx();
    ctx.activate();
    auto from_file = load_aesz34(asset_path());
    auto built = mum_normalized(aesz34_operator_raw());
    REQUIRE(from_file.order == built.order);
    REQUIRE(from_file.shift == built.shift);
    for (unsigned i = 0; i <= 4; ++i) REQUIRE(from_file.coeffs[i] == built.coeffs[i]);
}

TEST_CASE("aesz34 exponent data") {
    auto ctx = tf_ctx();
    ctx.activate();
    auto raw = aesz34_operator_raw();
    REQUIRE(indicial_exponents(raw, Rational(0)) == std::vector<Rational>{0, 0, 0, 0});
    REQUIRE(indicial_exponents_infinity(raw) == std::vector<Rational>{1, 1, 2, 2});
    for (Rational s : {Rational(1, 25), Rational(1, 9), Rational(1)})
        REQUIRE(indicial_exponents(raw, s) == std::vector<Rational>{0, 1, 1, 2});
    auto mum = mum_normalized(raw);
    REQUIRE(indicial_exponents(mum, Rational(0)) == std::vector<Rational>{1, 1, 1, 1});
}

TEST_CASE("loader rejects malformed operators") {
    auto ctx = tf_ctx();
    ctx.activate();
    REQUIRE_THROWS_AS(load_aesz34("/nonexistent/op.json"), config_error);
    // an elliptic operator is not AESZ 34
    auto wrong = operator_to_json(elliptic_operator<Rational>(Rational(1, 64)));
    std::string tmp = "/tmp/hv_wrong_op.json";
    save_json_file(tmp, wrong);
    REQUIRE_THROWS_AS(load_aesz34(tmp), config_error);
}

TEST_CASE("MUM ladder: holomorphic solution and binomial log structure") {
    auto ctx = tf_ctx();
    ctx.activate();
    ThreefoldSystem sys = ThreefoldSystem::standard(ctx);
    const auto& basis = sys.mum_frame()->basis;
    REQUIRE(basis.rho == 1);
    // varpi_0 = phi (1 + 5 phi + 45 phi^2 + 545 phi^3 + ...)
    Real tol = hvtest::tol10(-40);
    REQUIRE(close(basis.sols[0].levels[0].coeff(0), Complex(1), tol));
    REQUIRE(close(basis.sols[0].levels[0].coeff(1), Complex(5), tol));
    REQUIRE(close(basis.sols[0].levels[0].coeff(2), Complex(45), tol));
    REQUIRE(close(basis.sols[0].levels[0].coeff(3), Complex(545), tol));
    // F_j(0) = delta_j0 normalization: deeper solutions vanish at phi -> 0
    for (unsigned j = 1; j < 4; ++j) REQUIRE(close(basis.sols[j].levels[0].coeff(0), Complex(0), tol));
    // binomial ladder: varpi_3 carries 3 F_2 at log^1 and varpi_2 carries F_2 at log^0
    for (unsigned n = 0; n < 24; ++n) {
        REQUIRE(close(basis.sols[3].levels[1].coeff(n), Complex(3) * basis.sols[2].levels[0].coeff(n),
                      tol * (1 + abs(basis.sols[2].levels[0].coeff(n)))));
        REQUIRE(close(basis.sols[2].levels[1].coeff(n), Complex(2) * basis.sols[1].levels[0].coeff(n),
                      tol * (1 + abs(basis.sols[1].levels[0].coeff(n)))));
    }
}

TEST_CASE("Pi vector: normalization and topological entries") {
    auto ctx = tf_ctx();
    ctx.activate();
    ThreefoldSystem sys = ThreefoldSystem::standard(ctx);
    Complex tpi3 = pow(two_pi_i(), 3u);

    // Pi_3 = (2 pi i)^3 varpi_0
    Complex phi = make_complex(Rational(1, 64));
    auto varpi = sys.varpi(phi);
    auto pi = sys.pi_vector(phi);
    Real tol = hvtest::tol10(-40);
    REQUIRE(close(pi[2], tpi3 * varpi[0], tol * abs(tpi3)));

    // leading behavior at small phi: Pi_3 ~ (2 pi i)^3 phi, varpi_1 ~ phi log phi
    Complex small = make_complex(Rational(1, 1000));
    auto vs = sys.varpi(small);
    REQUIRE(abs(vs[0] - small) < Real(1) / 100000);
    Complex logphi = log(small);
    REQUIRE(abs(vs[1] - small * logphi) < Real(1) / 10000);

    // prefactor entries from (H^3, c2 H, chi) = (12, 12, -8):
    // H^3/3! = 2, c2 H/24 = 1/2, -H^3/2! = -6, sigma/2 = 0
    auto k = sys.prefactor();
    Real t40 = hvtest::tol10(-40);
    Complex tpi = two_pi_i();
    REQUIRE(close(k(0, 3), Complex(2) * tpi3 / (tpi * tpi * tpi), t40));
    REQUIRE(close(k(1, 1), Complex(0), t40));
    REQUIRE(close(k(2, 0), tpi3, t40 * abs(tpi3))); // row 3 is (2 pi i)^3 (1,0,0,0)
    REQUIRE(close(k(1, 2), Complex(-6) * tpi3 / (tpi * tpi), t40 * abs(tpi3)));
    REQUIRE(close(k(0, 1), Complex(Real(1) / 2) * tpi3 / tpi, t40 * abs(tpi3)));

    // outside the certified disk is rejected
    REQUIRE_THROWS_AS(sys.varpi(make_complex(Rational(1, 10))), config_error);
}

TEST_CASE("MUM monodromy: transport reproduces the exact log shift") {
    auto ctx = tf_ctx();
    ctx.activate();
    ThreefoldSystem sys = ThreefoldSystem::standard(ctx);
    auto idx = sys.obstacles().locate(Complex(0), pow(Real(10), -20));
    REQUIRE(idx.has_value());
    auto m = monodromy(sys.transporter(), sys.mum_frame(), sys.basepoint(), *idx);
    auto n = sys.mum_monodromy_closed_form();
    Real tol = hvtest::tol10(-30);
    for (unsigned i = 0; i < 4; ++i)
        for (unsigned j = 0; j < 4; ++j)
            REQUIRE(close(m(i, j), n(i, j), tol * (1 + abs(n(i, j)))));

    // in the Pi basis the MUM monodromy is integral and symplectic
    auto mpi = sys.prefactor() * m * sys.prefactor().inverse();
    auto entry = classify_integral("varphi=0", Complex(0), mpi);
    REQUIRE(entry.integer_distance < hvtest::tol10(-20));
    auto s4 = sigma_matrix<Complex>(4);
    auto sym = mpi.transposed() * s4 * mpi - s4;
    REQUIRE(sym.max_abs() < hvtest::tol10(-25));
}

TEST_CASE("vanishing-cycle branch relation at varphi = 1/25") {
    auto ctx = tf_ctx();
    ctx.activate();
    ThreefoldSystem sys = ThreefoldSystem::standard(ctx);
    auto m = sys.published_monodromy(Rational(1, 25));

    // integral symplectic
    auto entry = classify_integral("varphi=1/25", make_complex(Rational(1, 25)), m);
    CAPTURE(entry.integer_distance.str(6));
    REQUIRE(entry.integer_distance < hvtest::tol10(-20));
    REQUIRE(entry.det_deviation < hvtest::tol10(-25));
    auto s4 = sigma_matrix<Complex>(4);
    auto sym = m.transposed() * s4 * m - s4;
    REQUIRE(sym.max_abs() < hvtest::tol10(-25));

    // (1,0,5,1)^T = M_{1/25} (1,0,-5,1)^T
    std::vector<Complex> v{Complex(1), Complex(0), Complex(-5), Complex(1)};
    auto image = times_col(m, v);
    Real tol = hvtest::tol10(-20);
    REQUIRE(close(image[0], Complex(1), tol));
    REQUIRE(close(image[1], Complex(0), tol));
    REQUIRE(close(image[2], Complex(5), tol));
    REQUIRE(close(image[3], Complex(1), tol));
}

TEST_CASE("holomorphic period oracle ties the two sides together") {
    auto ctx = tf_ctx(50, 140);
    ctx.activate();
    ThreefoldSystem sys = ThreefoldSystem::standard(ctx);
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    auto oracle = holomorphic_period_oracle(pair, ctx);
    // the oracle recovers Pi_3 = (2 pi i)^3 varpi_0; signs fixed by
    // (-1,0,0,0) Sigma4 = (0,0,-1,0)
    auto pi = sys.pi_vector(make_complex(Rational(1, 64)));
    REQUIRE(abs(oracle.value - pi[2]) < pow(Real(10), -20));
    // node-doubling certificate
    REQUIRE(oracle.error_estimate < ctx.target_tolerance * (1 + abs(oracle.value)));
    // leading behavior at small phi: oracle ~ (2 pi i)^3 phi
    PrecisionContext small_ctx(40, 120, pow(Real(10), -16));
    EllipticPair small_pair(make_complex(Rational(1, 1000)), Rational(1, 1000), small_ctx);
    auto tiny = holomorphic_period_oracle(small_pair, small_ctx);
    Complex lead = pow(two_pi_i(), 3u) * make_complex(Rational(1, 1000));
    REQUIRE(abs(tiny.value - lead) < abs(lead) / 100);
}

TEST_CASE("all finite threefold monodromies are integral symplectic") {
    auto ctx = tf_ctx();
    ctx.activate();
    ThreefoldSystem sys = ThreefoldSystem::standard(ctx);
    auto s4 = sigma_matrix<Complex>(4);
    for (Rational s : {Rational(1, 25), Rational(1, 9), Rational(1)}) {
        auto m = sys.monodromy_pi(s);
        auto minv = sys.published_monodromy(s);
        auto prod = m * minv;
        REQUIRE((prod - Matrix<Complex>::identity(4)).max_abs() < hvtest::tol10(-25));
        auto entry = classify_integral("", make_complex(s), m);
        INFO("varphi = " << rational_to_string(s));
        REQUIRE(entry.integer_distance < hvtest::tol10(-20));
        auto sym = m.transposed() * s4 * m - s4;
        REQUIRE(sym.max_abs() < hvtest::tol10(-25));
    }
}
