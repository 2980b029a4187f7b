#include <catch2/catch.hpp>

#include "hv/hv_threefold.hpp"
#include "test_util.hpp"

using namespace hv;
using hvtest::close;

namespace {

PrecisionContext c_ctx(unsigned digits = 50, unsigned order = 140) {
    ScopedPrecision guard(digits + 10);
    return PrecisionContext(digits, order, pow(Real(10), -static_cast<int>(digits) / 2 + 3));
}

} // namespace

TEST_CASE("pairing rows") {
    ScopedPrecision guard(60);
    // (0,1)(x)(0,1) pairs onto the single-valued-at-0 tensor component
    auto row = pairing_row({0, 1}, {0, 1});
    REQUIRE(row[0] == Complex(1));
    REQUIRE(row[1] == Complex(0));
    REQUIRE(row[2] == Complex(0));
    REQUIRE(row[3] == Complex(0));
    // zero class gives the zero integrand
    auto zero = pairing_row({0, 0, 0, 0});
    for (auto& v : zero) REQUIRE(v == Complex(0));
    // 4-vector and split forms agree on decomposable classes: (1,0)(x)(1,1)
    auto a = pairing_row({1, 0}, {1, 1});
    auto b = pairing_row({1, 1, 0, 0}); // (1,0)(x)(1,1) = (1,1,0,0) in the tensor order
    for (int k = 0; k < 4; ++k) REQUIRE(a[k] == b[k]);
}

TEST_CASE("built-in contours resolve against the singular set") {
    auto ctx = c_ctx();
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    auto v9 = make_vanishing_1_9(pair);
    REQUIRE_FALSE(v9.closed);
    REQUIRE(close(v9.path.start(), make_complex(Rational(1, 64)), pow(Real(10), -30)));
    REQUIRE(close(v9.path.end(), make_complex(Rational(1, 9)), pow(Real(10), -30)));
    REQUIRE(v9.path.pieces.size() == 3); // segment, upper detour arc at 1/36, segment

    auto v25 = make_vanishing_1_25(pair);
    REQUIRE(close(v25.path.start(), make_complex(Rational(1, 36)), pow(Real(10), -30)));
    REQUIRE(v25.path.pieces.size() == 1); // clean segment

    auto t3 = make_t3_contour(pair);
    REQUIRE(t3.closed);
    int loops = 0;
    for (auto& p : t3.path.pieces)
        if (std::get_if<Loop>(&p)) ++loops;
    REQUIRE(loops == 4);
    REQUIRE_THROWS_AS(builtin_contour(pair, "no-such-contour"), config_error);
}

TEST_CASE("invariance check distinguishes admissible pairings") {
    auto ctx = c_ctx();
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    auto t3 = make_t3_contour(pair);
    REQUIRE(invariance_check(pair, t3, pairing_row({0, 1}, {0, 1}), ctx));

    // a single loop around lambda=0 does not fix the (1,0)(x)(1,0) pairing
    ContourSpec only0;
    only0.name = "loop-0";
    only0.closed = true;
    only0.path = standard_loop(pair.basepoint(), resolve_obstacle(pair, "lambda=0"),
                               pair.obstacles(), +1, +1);
    REQUIRE_FALSE(invariance_check(pair, only0, pairing_row({1, 0}, {1, 0}), ctx));
    // any pairing is invariant along a null-homotopic contour
    ContourSpec apparent;
    apparent.name = "loop-apparent";
    apparent.closed = true;
    apparent.path = standard_loop(pair.basepoint(),
                                  resolve_obstacle(pair, "lambda=3varphi/(4varphi-1)"),
                                  pair.obstacles(), +1, +1);
    REQUIRE(invariance_check(pair, apparent, pairing_row({1, 0}, {1, 0}), ctx));
}

TEST_CASE("closed loop around the apparent point integrates to zero") {
    auto ctx = c_ctx();
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    ContourSpec spec;
    spec.name = "loop-apparent";
    spec.closed = true;
    spec.path = standard_loop(pair.basepoint(),
                              resolve_obstacle(pair, "lambda=3varphi/(4varphi-1)"),
                              pair.obstacles(), +1, +1);
    auto r = integrate_paired(pair, spec, pairing_row({1, 0}, {1, 1}), ctx);
    REQUIRE(abs(r.value) < pow(Real(10), -20));
}

TEST_CASE("reversing a contour negates the integral") {
    auto ctx = c_ctx();
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    // a short regular segment in safe territory east of all small singularities
    ContourSpec fwd;
    fwd.name = "probe";
    fwd.closed = false;
    fwd.path.pieces.push_back(Segment{Complex(Real(5) / 100), Complex(Real(8) / 100)});
    ContourSpec bwd = fwd;
    bwd.path = fwd.path.reversed();
    auto pairing = pairing_row({1, 0}, {1, 1});
    auto a = integrate_paired(pair, fwd, pairing, ctx);
    auto b = integrate_paired(pair, bwd, pairing, ctx);
    REQUIRE(close(a.value, -b.value, pow(Real(10), -18) * (1 + abs(a.value))));
    REQUIRE(a.error_estimate < ctx.target_tolerance * 10);
}

TEST_CASE("zero-length chain integrates to zero") {
    auto ctx = c_ctx(40, 100);
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    ContourSpec spec;
    spec.name = "null";
    spec.closed = false;
    Complex p(Real(5) / 100);
    spec.path.pieces.push_back(Segment{p, p});
    auto r = integrate_paired(pair, spec, pairing_row({1, 0}, {1, 1}), ctx);
    REQUIRE(abs(r.value) < pow(Real(10), -30));
}

TEST_CASE("deformation within the homotopy class preserves the integral") {
    auto ctx = c_ctx();
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    auto pairing = pairing_row({1, 0}, {1, 1});
    auto base = make_vanishing_1_9(pair);
    auto a = integrate_paired(pair, base, pairing, ctx);

    // raise the interior waypoints of the first segment into the upper half
    // plane (staying clear of all exclusion zones)
    ContourSpec deformed = base;
    deformed.path.pieces.clear();
    auto& first = std::get<Segment>(base.path.pieces.front());
    Complex mid = (first.start + first.end) / Complex(2) + Complex(Real(0), Real(1) / 500);
    deformed.path.pieces.push_back(Segment{first.start, mid});
    deformed.path.pieces.push_back(Segment{mid, first.end});
    for (std::size_t k = 1; k < base.path.pieces.size(); ++k)
        deformed.path.pieces.push_back(base.path.pieces[k]);
    auto b = integrate_paired(pair, deformed, pairing, ctx);
    REQUIRE(close(a.value, b.value, ctx.target_tolerance * 100 * (1 + abs(a.value))));
}

TEST_CASE("quadrature node-doubling certificate is honored") {
    auto ctx = c_ctx();
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    auto r = integrate_paired(pair, make_vanishing_1_25(pair), pairing_row({1, 0}, {1, 2}), ctx);
    REQUIRE(r.node_count > 0);
    REQUIRE(r.error_estimate < ctx.target_tolerance * (1 + abs(r.value)));
}

TEST_CASE("the vanishing contour integral shrinks as phi approaches 1/9") {
    auto ctx = c_ctx(40, 100);
    ctx.activate();
    Real prev(-1);
    for (std::string phi_text : {"0.10", "0.105", "0.11"}) {
        Rational phi = parse_rational(phi_text);
        EllipticPair pair(make_complex(phi), phi, ctx);
        auto spec = make_vanishing_1_9(pair);
        auto r = integrate_paired(pair, spec, pairing_row({1, 0}, {1, 1}), ctx);
        Real mag = abs(r.value);
        if (prev >= 0) REQUIRE(mag < prev);
        prev = mag;
    }
    REQUIRE(prev < Real(1) / 2);
}

TEST_CASE("closed-contour value is independent of the starting loop") {
    auto ctx = c_ctx();
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    auto pairing = pairing_row({0, 1}, {0, 1});
    auto base = make_t3_contour(pair);
    auto a = integrate_paired(pair, base, pairing, ctx);

    // cyclic rotation: start with the second loop instead of the first
    std::vector<std::string> order{"lambda=varphi/(1+2sqrt(varphi))^2", "lambda=varphi",
                                   "lambda=varphi/(1-2sqrt(varphi))^2", "lambda=0"};
    std::vector<PlanePath> loops;
    for (auto& nm : order)
        loops.push_back(standard_loop(pair.basepoint(), resolve_obstacle(pair, nm),
                                      pair.obstacles(), +1, +1));
    ContourSpec rotated;
    rotated.name = "t3-rotated";
    rotated.closed = true;
    rotated.path = compose(loops, pow(Real(10), -20));
    REQUIRE(invariance_check(pair, rotated, pairing, ctx));
    auto b = integrate_paired(pair, rotated, pairing, ctx);
    REQUIRE(abs(a.value - b.value) < ctx.target_tolerance * 100 * (1 + abs(a.value)));
}

TEST_CASE("non-invariant pairing on a closed contour is rejected") {
    auto ctx = c_ctx(40, 100);
    ctx.activate();
    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    ContourSpec spec;
    spec.name = "loop-0-bad";
    spec.closed = true;
    spec.path = standard_loop(pair.basepoint(), resolve_obstacle(pair, "lambda=0"),
                              pair.obstacles(), +1, +1);
    REQUIRE_THROWS_AS(integrate_paired(pair, spec, pairing_row({1, 0}, {1, 0}), ctx), math_error);
}
