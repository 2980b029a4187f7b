#pragma once

#include "hv/hv_threefold.hpp"
#include "hv/lll.hpp"

namespace hv {

// Pairing matrices, identity evaluation, and recovery of the rational cycle
// vector by integer-relation search.

// One term of an identity: an integer class paired against a contour.
struct IdentityTerm {
    std::vector<long> g; // 4-vector, or assembled from a split below
    std::optional<std::pair<std::vector<long>, std::vector<long>>> split;
    std::string contour;                      // built-in name, or
    std::optional<ContourSpec> inline_spec;   // a prepared contour

    std::vector<Complex> pairing() const {
        if (split) return pairing_row(split->first, split->second);
        return pairing_row(g);
    }
};

struct IdentitySpec {
    std::string name;
    std::optional<std::vector<Rational>> gamma_claimed;
    Rational phi;
    std::vector<IdentityTerm> terms;
};

// The three identities shipped with the artifact.
inline IdentitySpec builtin_identity(const std::string& name, const Rational& phi) {
    IdentitySpec spec;
    spec.name = name;
    spec.phi = phi;
    if (name == "vanishing-1-9") {
        spec.gamma_claimed = {{Rational(1, 2), Rational(0), Rational(-5, 2), Rational(1, 2)}};
        IdentityTerm t;
        t.split = {{1, 0}, {1, 1}};
        t.contour = "vanishing-1-9";
        spec.terms.push_back(t);
        return spec;
    }
    if (name == "vanishing-1-25") {
        spec.gamma_claimed = {{Rational(0), Rational(0), Rational(-5, 2), Rational(0)}};
        IdentityTerm t;
        t.split = {{1, 0}, {1, 2}};
        t.contour = "vanishing-1-25";
        spec.terms.push_back(t);
        return spec;
    }
    if (name == "t3-holomorphic") {
        spec.gamma_claimed = {{Rational(-1), Rational(0), Rational(0), Rational(0)}};
        IdentityTerm t;
        t.split = {{0, 1}, {0, 1}};
        t.contour = "t3-holomorphic";
        spec.terms.push_back(t);
        return spec;
    }
    throw config_error("unknown identity '" + name + "'");
}

inline Complex identity_lhs(const std::vector<Rational>& gamma, const std::vector<Complex>& pi) {
    if (gamma.size() != 4 || pi.size() != 4) throw config_error("identity_lhs expects 4-vectors");
    std::vector<Complex> g;
    for (auto& q : gamma) g.push_back(make_complex(q));
    auto row = row_times(g, sigma_matrix<Complex>(4));
    Complex acc(0);
    for (int i = 0; i < 4; ++i) acc += row[i] * pi[i];
    return acc;
}

struct IdentityReport {
    std::string name;
    Complex lhs{0}, rhs{0};
    Real residual{0}; // |lhs-rhs| / max(|lhs|,|rhs|)
    QuadratureResult quadrature;
    bool invariance = true; // for closed contours
};

inline IdentityReport verify_identity(EllipticPair& pair, ThreefoldSystem& threefold,
                                      const IdentitySpec& spec, const PrecisionContext& ctx,
                                      int side = +1) {
    if (!spec.gamma_claimed) throw config_error("verify_identity requires a claimed gamma");
    IdentityReport rep;
    rep.name = spec.name;
    auto pi = threefold.pi_vector(make_complex(spec.phi));
    rep.lhs = identity_lhs(*spec.gamma_claimed, pi);
    for (auto& term : spec.terms) {
        ContourSpec contour = term.inline_spec ? *term.inline_spec
                                               : builtin_contour(pair, term.contour, side);
        auto pairing = term.pairing();
        if (contour.closed && !invariance_check(pair, contour, pairing, ctx))
            rep.invariance = false;
        auto r = integrate_paired(pair, contour, pairing, ctx);
        rep.rhs += r.value;
        rep.quadrature += r;
    }
    Real scale = std::max(Real(abs(rep.lhs)), Real(abs(rep.rhs)));
    if (scale == 0) scale = Real(1);
    rep.residual = abs(rep.lhs - rep.rhs) / scale;
    return rep;
}

// Result of the integer-relation search for gamma.
struct GammaResult {
    bool found = false;
    bool ambiguous = false;
    std::vector<Rational> gamma;
    std::vector<Integer> relation; // (m1..m4, m5): sum m_i (Sigma4 Pi)_i + m5 rhs = 0
    Real relation_norm{0};
    Real next_norm{0};
    Real separation{0};
    Real residual{0}; // relative residual of gamma^T Sigma4 Pi = rhs
    std::string message;
};

// LLL search on the lattice spanned by the digits-scaled real and imaginary
// parts of ((Sigma4 Pi)_1..4, rhs).
inline GammaResult find_gamma(const Complex& rhs, const std::vector<Complex>& pi,
                              const Integer& max_den, unsigned digits_used) {
    if (pi.size() != 4) throw config_error("find_gamma expects the 4-vector Pi");
    if (Real::default_precision() < digits_used + 20)
        throw config_error("find_gamma requires at least digits_used + 20 working digits");
    // v_i = (Sigma4 Pi)_i, so that gamma . v = gamma^T Sigma4 Pi
    auto s4 = sigma_matrix<Complex>(4);
    std::vector<Complex> v = times_col(s4, pi);
    v.push_back(rhs);
    Real scale = pow(Real(10), static_cast<int>(digits_used));
    std::vector<std::vector<Integer>> lattice(5, std::vector<Integer>(7, Integer(0)));
    for (int i = 0; i < 5; ++i) {
        lattice[i][i] = 1;
        lattice[i][5] = nearest_integer(scale * v[i].real());
        lattice[i][6] = nearest_integer(scale * v[i].imag());
    }
    lll_reduce(lattice);

    auto row_norm = [&](const std::vector<Integer>& row) {
        Real s(0);
        for (auto& x : row) s += make_real(Rational(x)) * make_real(Rational(x));
        return sqrt(s);
    };
    std::vector<std::pair<Real, std::size_t>> order;
    for (std::size_t i = 0; i < 5; ++i) order.emplace_back(row_norm(lattice[i]), i);
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    GammaResult out;
    Real accept = pow(Real(10), -static_cast<int>(digits_used) + 6);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& row = lattice[order[k].second];
        Integer m5 = row[4];
        if (m5 == 0) continue;
        // exact residual of the candidate relation at full precision
        Complex err(0);
        Real vmax(0);
        for (int i = 0; i < 5; ++i) {
            err += make_complex(Rational(row[i])) * v[i];
            vmax = std::max(vmax, Real(abs(v[i])));
        }
        if (abs(err) > accept * vmax) continue;
        out.relation.assign(row.begin(), row.begin() + 5);
        out.relation_norm = order[k].first;
        out.next_norm = k + 1 < order.size() ? order[k + 1].first : Real(0);
        out.separation = out.relation_norm > 0 ? out.next_norm / out.relation_norm : Real(0);
        if (abs(m5) > max_den) {
            out.message = "relation found but denominator exceeds the bound";
            return out;
        }
        out.gamma.clear();
        for (int i = 0; i < 4; ++i) out.gamma.push_back(Rational(-row[i], m5));
        out.found = true;
        Complex lhs = identity_lhs(out.gamma, pi);
        Real s = std::max(Real(abs(lhs)), Real(abs(rhs)));
        out.residual = s > 0 ? abs(lhs - rhs) / s : Real(0);
        if (out.separation < pow(Real(10), 10)) {
            out.ambiguous = true;
            out.message = "relation separation below the acceptance threshold";
        }
        return out;
    }
    out.message = "no integer relation below the norm threshold";
    return out;
}

// Primitive integer generator of ker(mu - 1) for a unipotent 2x2 matrix,
// sign-normalized so the first nonzero entry is positive.
inline std::vector<Integer> invariant_vector(const Matrix<Rational>& mu) {
    if (mu.rows != 2 || mu.cols != 2) throw config_error("invariant_vector expects a 2x2 matrix");
    Rational a = mu(0, 0) - 1, b = mu(0, 1);
    Rational c = mu(1, 0), d = mu(1, 1) - 1;
    if (mu.det() != 1 || mu(0, 0) + mu(1, 1) != 2)
        throw math_error("invariant_vector requires a unipotent matrix");
    if (a == 0 && b == 0 && c == 0 && d == 0)
        throw math_error("invariant_vector: kernel of mu - 1 is not one-dimensional");
    Rational x, y;
    if (!(a == 0) || !(b == 0)) { x = b; y = -a; }
    else { x = d; y = -c; }
    // clear denominators, divide by gcd
    Integer den = lcm(denominator(x), denominator(y));
    Integer ix = numerator(x) * (den / denominator(x));
    Integer iy = numerator(y) * (den / denominator(y));
    Integer g = gcd(abs(ix), abs(iy));
    if (g != 0) { ix /= g; iy /= g; }
    if (ix < 0 || (ix == 0 && iy < 0)) { ix = -ix; iy = -iy; }
    return {ix, iy};
}

// True iff gamma2 = M gamma1 exactly after rational reconstruction of M.
inline bool vanishing_cycle_branch_relation(const std::vector<Rational>& gamma1,
                                            const std::vector<Rational>& gamma2,
                                            const Matrix<Complex>& m, const Real& tol) {
    if (gamma1.size() != m.cols || gamma2.size() != m.rows)
        throw config_error("vanishing_cycle_branch_relation shape mismatch");
    Matrix<Rational> mr(m.rows, m.cols);
    for (std::size_t k = 0; k < m.a.size(); ++k)
        mr.a[k] = rational_reconstruct(m.a[k], Integer(1000), tol);
    for (std::size_t i = 0; i < m.rows; ++i) {
        Rational acc(0);
        for (std::size_t j = 0; j < m.cols; ++j) acc += mr(i, j) * gamma1[j];
        if (acc != gamma2[i]) return false;
    }
    return true;
}

} // namespace hv
