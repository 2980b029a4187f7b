// Acceptance suite: every shipped claim is re-verified here at the standard
// configuration (120 decimal digits, truncation order 400, tolerance 1e-40),
// one pass/fail line per criterion.

#include <chrono>
#include <iostream>
#include <vector>

#include "hv/cmds.hpp"

using namespace hv;

namespace {

int failures = 0;
std::chrono::steady_clock::time_point t_start;

double elapsed() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
}

void report(int number, const std::string& label, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion-" << number << "  " << label;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << "  (t=" << static_cast<long>(elapsed()) << "s)" << std::endl;
    if (!ok) ++failures;
}

Matrix<Rational> m2(long a, long b, long c, long d) {
    Matrix<Rational> m(2, 2);
    m(0, 0) = a; m(0, 1) = b; m(1, 0) = c; m(1, 1) = d;
    return m;
}

Real entry_distance(const Matrix<Complex>& got, const Matrix<Rational>& want) {
    Real worst(0);
    for (std::size_t k = 0; k < got.a.size(); ++k)
        worst = std::max(worst, Real(abs(got.a[k] - make_complex(want.a[k]))));
    return worst;
}

std::string digits_str(const Real& x) { return x.str(3); }

} // namespace

int main() {
    t_start = std::chrono::steady_clock::now();
    ScopedPrecision guard(130);
    PrecisionContext ctx(120, 400, pow(Real(10), -40));
    ctx.activate();
    std::cout << "acceptance suite: phi = 1/64, digits = 120, order = 400, tolerance = 1e-40"
              << std::endl;

    EllipticPair pair(make_complex(Rational(1, 64)), Rational(1, 64), ctx);
    ThreefoldSystem threefold = ThreefoldSystem::standard(ctx);
    auto pi = threefold.pi_vector(make_complex(Rational(1, 64)));

    // ---- criterion 1: the six monodromy tables ------------------------------
    try {
        struct Row {
            Rational loc;
            Matrix<Rational> first, second;
        };
        std::vector<Row> table{
            {Rational(0), m2(1, 0, 3, 1), m2(1, 0, 3, 1)},
            {Rational(1, 100), m2(1, 0, 0, 1), m2(1, -2, 0, 1)},
            {Rational(1, 64), m2(1, 0, 0, 1), m2(5, -4, 4, -3)},
            {Rational(1, 36), m2(1, 0, 0, 1), m2(5, -2, 8, -3)},
            {Rational(1, 9), m2(1, -2, 0, 1), m2(1, 0, 0, 1)},
            {Rational(1), m2(7, -6, 6, -5), m2(1, 0, 0, 1)},
        };
        Real worst_entry(0), worst_det(0);
        for (auto& row : table) {
            auto idx = pair.obstacles().locate(make_complex(row.loc), pow(Real(10), -40));
            auto [f1, f2] = pair.factor_monodromies(*idx);
            worst_entry = std::max({worst_entry, entry_distance(f1, row.first),
                                    entry_distance(f2, row.second)});
            worst_det = std::max({worst_det, Real(abs(f1.det() - Complex(1))),
                                  Real(abs(f2.det() - Complex(1)))});
        }
        bool ok = worst_entry < pow(Real(10), -20) && worst_det < pow(Real(10), -30);
        report(1, "monodromy table reproduction at phi=1/64", ok,
               "max entry distance " + digits_str(worst_entry) + ", max |det-1| " +
                   digits_str(worst_det));
    } catch (const std::exception& e) {
        report(1, "monodromy table reproduction at phi=1/64", false, e.what());
    }

    // ---- criteria 2-4: the three period identities --------------------------
    Complex rhs_v9(0), rhs_v25(0), rhs_t3(0);
    try {
        auto r = integrate_paired(pair, make_vanishing_1_9(pair), pairing_row({1, 0}, {1, 1}), ctx);
        rhs_v9 = r.value;
        Complex lhs = identity_lhs({Rational(1, 2), Rational(0), Rational(-5, 2), Rational(1, 2)}, pi);
        Real residual = abs(lhs - rhs_v9) / abs(lhs);
        report(2, "identity over [varphi, 1/9] with pairing (1,0)x(1,1)",
               residual < pow(Real(10), -30), "residual " + digits_str(residual));
    } catch (const std::exception& e) {
        report(2, "identity over [varphi, 1/9] with pairing (1,0)x(1,1)", false, e.what());
    }
    try {
        auto r = integrate_paired(pair, make_vanishing_1_25(pair), pairing_row({1, 0}, {1, 2}), ctx);
        rhs_v25 = r.value;
        Complex lhs = identity_lhs({Rational(0), Rational(0), Rational(-5, 2), Rational(0)}, pi);
        Real residual = abs(lhs - rhs_v25) / abs(lhs);
        report(3, "identity over [varphi/(1-2sqrt(varphi))^2, 1/9] with pairing (1,0)x(1,2)",
               residual < pow(Real(10), -30), "residual " + digits_str(residual));
    } catch (const std::exception& e) {
        report(3, "identity over [varphi/(1-2sqrt(varphi))^2, 1/9]", false, e.what());
    }
    try {
        auto spec = make_t3_contour(pair);
        bool invariant = invariance_check(pair, spec, pairing_row({0, 1}, {0, 1}), ctx);
        auto r = integrate_paired(pair, spec, pairing_row({0, 1}, {0, 1}), ctx);
        rhs_t3 = r.value;
        Complex lhs = identity_lhs({Rational(-1), Rational(0), Rational(0), Rational(0)}, pi);
        Real residual = abs(lhs - rhs_t3) / abs(lhs);
        report(4, "closed composite contour with pairing (0,1)x(0,1)",
               invariant && residual < pow(Real(10), -30),
               std::string("invariance ") + (invariant ? "true" : "false") + ", residual " +
                   digits_str(residual));
    } catch (const std::exception& e) {
        report(4, "closed composite contour with pairing (0,1)x(0,1)", false, e.what());
    }

    // ---- criterion 5: gamma recovery with the claim withheld ----------------
    try {
        struct Case {
            const char* name;
            Complex rhs;
            std::vector<Rational> expect;
        };
        std::vector<Case> cases{
            {"vanishing-1-9", rhs_v9, {Rational(1, 2), Rational(0), Rational(-5, 2), Rational(1, 2)}},
            {"vanishing-1-25", rhs_v25, {Rational(0), Rational(0), Rational(-5, 2), Rational(0)}},
            {"t3-holomorphic", rhs_t3, {Rational(-1), Rational(0), Rational(0), Rational(0)}},
        };
        bool ok = true;
        Real worst_sep(-1);
        for (auto& c : cases) {
            for (unsigned digits_used : {30u, 40u, 50u}) {
                auto g = find_gamma(c.rhs, pi, Integer(4), digits_used);
                bool this_ok = g.found && !g.ambiguous && g.gamma == c.expect &&
                               g.separation >= pow(Real(10), 10);
                ok = ok && this_ok;
                if (worst_sep < 0 || g.separation < worst_sep) worst_sep = g.separation;
            }
        }
        report(5, "LLL recovery of the three cycle vectors", ok,
               "min separation " + digits_str(worst_sep));
    } catch (const std::exception& e) {
        report(5, "LLL recovery of the three cycle vectors", false, e.what());
    }

    // ---- criterion 6: vanishing-cycle branch relation at varphi=1/25 --------
    try {
        auto m = threefold.published_monodromy(Rational(1, 25));
        auto entry = classify_integral("varphi=1/25", make_complex(Rational(1, 25)), m);
        auto s4 = sigma_matrix<Complex>(4);
        Real sym = (m.transposed() * s4 * m - s4).max_abs();
        std::vector<Rational> g1{Rational(1), Rational(0), Rational(-5), Rational(1)};
        std::vector<Rational> g2{Rational(1), Rational(0), Rational(5), Rational(1)};
        bool relation = vanishing_cycle_branch_relation(g1, g2, m, pow(Real(10), -30));
        bool ok = relation && entry.integer_distance < pow(Real(10), -20) &&
                  sym < pow(Real(10), -30);
        report(6, "M_{1/25} branch relation, integrality and symplectic check", ok,
               "integer distance " + digits_str(entry.integer_distance) + ", symplectic deviation " +
                   digits_str(sym));
    } catch (const std::exception& e) {
        report(6, "M_{1/25} branch relation", false, e.what());
    }

    // ---- criterion 7: oracle equivalence -------------------------------------
    try {
        bool ok = true;
        for (Rational phi : {Rational(1), Rational(1, 64), Rational(3, 7)}) {
            auto coeffs = f0_coefficients(phi, 13);
            for (unsigned n = 0; n <= 12; ++n)
                ok = ok && constant_term_oracle(phi, n) == coeffs[n];
        }
        auto at1 = f0_coefficients(Rational(1), 4);
        ok = ok && at1 == std::vector<Rational>{Rational(1), Rational(3), Rational(15), Rational(93)};
        report(7, "constant-term oracle equals the binomial sum for n <= 12", ok, "exact");
    } catch (const std::exception& e) {
        report(7, "constant-term oracle equality", false, e.what());
    }

    // ---- criterion 8: exact annihilation in rational mode --------------------
    try {
        PrecisionContext rational_ctx(60, 52, pow(Real(10), -25));
        bool ok = true;
        for (Rational phi : {Rational(1), Rational(1, 64)}) {
            auto op = elliptic_operator<Rational>(phi);
            auto basis = frobenius_basis(op, Rational(0), rational_ctx);
            for (auto& sol : basis.sols) {
                auto residual = apply_operator(basis.local, sol);
                for (auto& level : residual.levels)
                    for (auto& c : level.c) ok = ok && c == 0;
            }
        }
        report(8, "exact annihilation of the f0 ladder through order 50", ok, "rational mode");
    } catch (const std::exception& e) {
        report(8, "exact annihilation of the f0 ladder", false, e.what());
    }

    // ---- criterion 9: conjecture suite ---------------------------------------
    try {
        bool ok = true;
        Real worst(0);
        for (std::string phi_text : {"1/64", "1", "2", "1/10+1/10i"}) {
            auto [phi, phi_exact] = parse_phi(phi_text);
            EllipticRunner runner(EllipticSystem::make(phi, phi_exact), ctx);
            for (auto& entry : runner.conjecture_check()) {
                worst = std::max({worst, entry.integer_distance, entry.det_deviation});
                ok = ok && entry.integer_distance < pow(Real(10), -20) &&
                     entry.det_deviation < pow(Real(10), -30);
            }
        }
        report(9, "integrality of elliptic monodromies at four phi values", ok,
               "worst deviation " + digits_str(worst));
    } catch (const std::exception& e) {
        report(9, "integrality of elliptic monodromies", false, e.what());
    }

    // ---- criterion 10: property basket ---------------------------------------
    try {
        bool ok = true;
        std::string note;
        auto& tr2 = pair.transporter_two();
        auto frame0 = pair.frame_two();
        Complex b = pair.basepoint();

        // homotopy invariance: refined route agrees with the original
        {
            auto route = route_avoiding(b, Complex(Real(1) / 20), Real(1) / 1000, pair.obstacles(),
                                        std::nullopt, +1);
            PlanePath refined;
            for (auto& piece : route.pieces) {
                if (auto* seg = std::get_if<Segment>(&piece)) {
                    Complex mid = (seg->start + seg->end) / Complex(2);
                    refined.pieces.push_back(Segment{seg->start, mid});
                    refined.pieces.push_back(Segment{mid, seg->end});
                } else {
                    refined.pieces.push_back(piece);
                }
            }
            if (!homotopy_check(tr2, frame0, route, refined, pow(Real(10), -35))) {
                ok = false;
                note += "homotopy;";
            }
            // path reversal inverts the transition
            PlanePath closed = compose({route, route.reversed()}, tr2.tiny());
            auto m = monodromy_along(tr2, frame0, closed);
            if ((m - Matrix<Complex>::identity(2)).max_abs() > pow(Real(10), -35)) {
                ok = false;
                note += "reversal;";
            }
        }
        // ordinary-point loop is trivial
        {
            auto sys = EllipticSystem::make(make_complex(Rational(1, 64)), Rational(1, 64));
            auto pts = sys.opc.own_singular;
            pts.push_back(Complex(Real(1) / 2));
            Obstacles obs = Obstacles::from_points(pts);
            Transporter tr(sys.opc, obs, ctx);
            auto m = monodromy(tr, tr.frame_at(Complex(0)), standard_basepoint(sys.opc.own_singular),
                               pts.size() - 1);
            if ((m - Matrix<Complex>::identity(2)).max_abs() > pow(Real(10), -35)) {
                ok = false;
                note += "ordinary-loop;";
            }
        }
        // quadrature node-doubling convergence certificate
        {
            auto r = integrate_paired(pair, make_vanishing_1_25(pair), pairing_row({1, 0}, {1, 2}), ctx);
            if (!(r.error_estimate < ctx.target_tolerance * (1 + abs(r.value)))) {
                ok = false;
                note += "node-doubling;";
            }
        }
        // sigma-matrix identities
        {
            for (std::size_t n : {2u, 4u}) {
                auto s = sigma_matrix<Rational>(n);
                if (!(s.transposed() == s * Rational(-1)) ||
                    !(s * s == Matrix<Rational>::identity(n) * Rational(-1))) {
                    ok = false;
                    note += "sigma;";
                }
            }
            auto s2 = sigma_matrix<Rational>(2);
            auto s22 = kronecker(s2, s2);
            if (!(s22(0, 3) == 1 && s22(1, 2) == -1 && s22(2, 1) == -1 && s22(3, 0) == 1)) {
                ok = false;
                note += "sigma22;";
            }
        }
        // contour-shrink limit as phi -> 1/9
        {
            PrecisionContext shrink_ctx(60, 160, pow(Real(10), -25));
            Real prev(-1);
            bool monotone = true;
            for (std::string phi_text : {"0.10", "0.105", "0.11"}) {
                Rational phi = parse_rational(phi_text);
                EllipticPair p2(make_complex(phi), phi, shrink_ctx);
                auto r = integrate_paired(p2, make_vanishing_1_9(p2), pairing_row({1, 0}, {1, 1}),
                                          shrink_ctx);
                Real mag = abs(r.value);
                if (prev >= 0 && !(mag < prev)) monotone = false;
                prev = mag;
            }
            if (!(monotone && prev < Real(1) / 2)) {
                ok = false;
                note += "shrink-limit;";
            }
        }
        report(10, "property suite", ok, note.empty() ? "all properties hold" : note);
    } catch (const std::exception& e) {
        report(10, "property suite", false, e.what());
    }

    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed"
                                : "ACCEPTANCE: " + std::to_string(failures) + " criteria failed")
              << " (total " << static_cast<long>(elapsed()) << "s)" << std::endl;
    return failures == 0 ? 0 : 1;
}
