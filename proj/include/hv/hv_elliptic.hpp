#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hv/fuchsian.hpp"

namespace hv {

// Data of the Hulek-Verrill elliptic family E_{1,1,1/phi}: the second-order
// Picard-Fuchs operator in lambda, its singular locus, the holomorphic
// solution f0, and the change of basis onto the conjecturally integral
// period pair.

namespace elliptic_detail {

// R-polynomial coefficients written over u = 1/phi.
template <class T>
std::array<Poly<T>, 3> r_polynomials(const T& u) {
    Poly<T> lam = Poly<T>::x();
    Poly<T> one(T(1));
    Poly<T> r2 = (Poly<T>(T(3)) + lam * (u - T(4)))
               * (one - lam * u)
               * (one - lam * (T(2) * (u + T(4))) + lam * lam * ((u - T(4)) * (u - T(4))));
    Poly<T> r1 = Poly<T>(T(-6))
               + lam * (T(6) * (u + T(6)))
               + lam * lam * (T(2) * (u - T(4)) * (T(3) * u + T(8)))
               - lam * lam * lam * (T(2) * (u - T(4)) * (T(8) - T(6) * u + T(3) * u * u));
    Poly<T> r0 = Poly<T>(T(3))
               - lam * (u + T(14))
               - lam * lam * ((u + T(2)) * (T(3) * u - T(10)))
               + lam * lam * lam * ((u - T(4)) * (T(4) - T(2) * u + u * u));
    return {r0, r1, r2};
}

} // namespace elliptic_detail

// Order-2 operator R2 (theta+1)^2 + R1 (theta+1) + R0 at the given phi != 0.
template <class T>
FuchsianOperator<T> elliptic_operator(const T& phi) {
    if (phi == T(0)) throw config_error("elliptic operator requires phi != 0");
    T u = T(1) / phi;
    auto [r0, r1, r2] = elliptic_detail::r_polynomials(u);
    FuchsianOperator<T> op;
    op.name = "hv-elliptic";
    op.variable = "lambda";
    op.order = 2;
    op.shift = Rational(1);
    op.coeffs = {r0, r1, r2};
    op.validate();
    return op;
}

// Coefficients of f0(lambda, phi): sum_k C(n,k)^2 C(2k,k) phi^(k-n), n < N.
template <class T>
std::vector<T> f0_coefficients(const T& phi, unsigned N) {
    if (phi == T(0)) throw config_error("f0 requires phi != 0");
    std::vector<T> out;
    out.reserve(N);
    T inv = T(1) / phi;
    for (unsigned n = 0; n < N; ++n) {
        // accumulate over k with exact integer binomials
        T acc(0);
        Integer cnk(1); // C(n,k)
        for (unsigned k = 0; k <= n; ++k) {
            Integer c2k = 1; // C(2k,k)
            for (unsigned j = 1; j <= k; ++j) c2k = c2k * (k + j) / j;
            T term = T(cnk) * T(cnk) * T(c2k);
            // phi^(k-n) = inv^(n-k)
            T p(1);
            for (unsigned j = 0; j < n - k; ++j) p *= inv;
            acc += term * p;
            cnk = cnk * (n - k) / (k + 1);
        }
        out.push_back(acc);
    }
    return out;
}

// Constant term of [(X+Y+1)(1/X+1/Y+1/phi)]^n by direct sparse Laurent
// expansion; independent oracle for the f0 coefficients.
template <class T>
T constant_term_oracle(const T& phi, unsigned n) {
    if (phi == T(0)) throw config_error("constant-term oracle requires phi != 0");
    if (n > 12) throw config_error("constant-term oracle limited to n <= 12");
    using Key = std::pair<int, int>;
    std::map<Key, T> base, acc;
    base[{1, 0}] = T(1);
    base[{0, 1}] = T(1);
    base[{0, 0}] = T(1);
    std::map<Key, T> dual;
    dual[{-1, 0}] = T(1);
    dual[{0, -1}] = T(1);
    dual[{0, 0}] = T(1) / phi;
    auto mul = [](const std::map<Key, T>& a, const std::map<Key, T>& b) {
        std::map<Key, T> r;
        for (auto& [ka, va] : a)
            for (auto& [kb, vb] : b)
                r[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
        return r;
    };
    std::map<Key, T> factor = mul(base, dual);
    acc[{0, 0}] = T(1);
    for (unsigned i = 0; i < n; ++i) acc = mul(acc, factor);
    auto it = acc.find({0, 0});
    return it == acc.end() ? T(0) : it->second;
}

// f0 as a truncated series at lambda = 0.
template <class T>
Series<T> f0_series(const T& phi, unsigned order) {
    Series<T> s(T(0), order);
    s.c = f0_coefficients(phi, order);
    return s;
}

struct EllipticPoint {
    std::string name;
    Complex location;
    std::optional<Rational> exact;
    std::vector<Rational> exponents;
    bool apparent_candidate = false;
};

// The finite singular locus {0, 3phi/(4phi-1), phi, phi/(1±2 sqrt(phi))^2}
// at the run's phi, with sqrt on the principal branch. Collisions (phi = 1)
// are merged.
inline std::vector<EllipticPoint> elliptic_singular_points(const Complex& phi,
                                                           const std::optional<Rational>& phi_exact) {
    if (phi == Complex(0)) throw config_error("phi must be nonzero");
    std::vector<EllipticPoint> pts;
    auto push = [&](std::string name, Complex loc, std::optional<Rational> exact,
                    std::vector<Rational> expo, bool apparent) {
        for (auto& p : pts) {
            bool same;
            if (exact && p.exact) same = *exact == *p.exact;
            else same = abs(p.location - loc) <= pow(Real(10), -static_cast<int>(Real::default_precision() / 2));
            if (same) return; // merged (degenerate phi)
        }
        pts.push_back({std::move(name), std::move(loc), std::move(exact), std::move(expo), apparent});
    };
    push("lambda=0", Complex(0), Rational(0), {Rational(0), Rational(0)}, false);
    // 3phi/(4phi-1), exponents (0,2): candidate apparent point
    if (!(4 * phi == Complex(1))) {
        Complex loc = 3 * phi / (4 * phi - 1);
        std::optional<Rational> exact;
        if (phi_exact) exact = 3 * *phi_exact / (4 * *phi_exact - 1);
        push("lambda=3varphi/(4varphi-1)", loc, exact, {Rational(0), Rational(2)}, true);
    }
    std::optional<Rational> sqrt_exact;
    if (phi_exact && *phi_exact > 0) {
        Integer n = numerator(*phi_exact), d = denominator(*phi_exact);
        Integer sn = sqrt(n), sd = sqrt(d);
        if (sn * sn == n && sd * sd == d) sqrt_exact = Rational(sn, sd);
    }
    Complex sq = sqrt(phi);
    {
        Complex den = (Complex(1) + 2 * sq);
        Complex loc = phi / (den * den);
        std::optional<Rational> exact;
        if (sqrt_exact) {
            Rational e = 1 + 2 * *sqrt_exact;
            exact = *phi_exact / (e * e);
        }
        push("lambda=varphi/(1+2sqrt(varphi))^2", loc, exact, {Rational(0), Rational(0)}, false);
    }
    push("lambda=varphi", phi, phi_exact, {Rational(0), Rational(0)}, false);
    {
        Complex den = (Complex(1) - 2 * sq);
        if (!(den == Complex(0))) {
            Complex loc = phi / (den * den);
            std::optional<Rational> exact;
            if (sqrt_exact && *sqrt_exact != Rational(1, 2)) {
                Rational e = 1 - 2 * *sqrt_exact;
                exact = *phi_exact / (e * e);
            }
            push("lambda=varphi/(1-2sqrt(varphi))^2", loc, exact, {Rational(0), Rational(0)}, false);
        }
    }
    return pts;
}

// Change of basis from (f0, f0 log lambda + f1) onto the conjecturally
// integral pair: omega = U . (f0, f0 log + f1),  U = [[2 pi i, 0], [-log phi, 3]].
inline Matrix<Complex> integral_basis_change(const Complex& phi) {
    Matrix<Complex> u(2, 2);
    u(0, 0) = two_pi_i();
    u(0, 1) = Complex(0);
    u(1, 0) = -log(phi); // principal branch of log phi
    u(1, 1) = Complex(3);
    return u;
}

} // namespace hv
