#pragma once

#include <algorithm>
#include <vector>

#include "hv/scalar.hpp"

namespace hv {

// Dense polynomial over an exact or floating coefficient ring.
// The trailing coefficient is kept nonzero (exact rings only); the zero
// polynomial has an empty coefficient list.
template <class T>
struct Poly {
    std::vector<T> c; // c[j] is the coefficient of x^j

    Poly() = default;
    explicit Poly(T constant) : c{std::move(constant)} { trim(); }
    explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }

    static Poly x() { return Poly(std::vector<T>{T(0), T(1)}); }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }

    T coeff(std::size_t j) const { return j < c.size() ? c[j] : T(0); }

    void trim() {
        if constexpr (std::is_same_v<T, Rational>) {
            while (!c.empty() && c.back() == 0) c.pop_back();
        } else {
            while (!c.empty() && c.back() == T(0)) c.pop_back();
        }
    }

    Poly& operator+=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t j = 0; j < o.c.size(); ++j) c[j] += o.c[j];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t j = 0; j < o.c.size(); ++j) c[j] -= o.c[j];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
    friend Poly operator-(const Poly& a) {
        Poly r = a;
        for (auto& v : r.c) v = -v;
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j)
                r[i + j] += a.c[i] * b.c[j];
        Poly p;
        p.c = std::move(r);
        p.trim();
        return p;
    }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
    Poly& operator*=(const T& s) {
        for (auto& v : c) v *= s;
        trim();
        return *this;
    }
    friend Poly operator*(Poly a, const T& s) { a *= s; return a; }
    friend Poly operator*(const T& s, Poly a) { a *= s; return a; }

    // Horner evaluation; the scalar type may differ from the coefficient ring.
    template <class S>
    S eval(const S& x) const {
        S r(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + S(*it);
        return r;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly();
        std::vector<T> r(c.size() - 1);
        for (std::size_t j = 1; j < c.size(); ++j) r[j - 1] = c[j] * T(static_cast<long>(j));
        Poly p;
        p.c = std::move(r);
        p.trim();
        return p;
    }

    // p(x + a), exact Taylor shift.
    Poly shifted(const T& a) const {
        Poly r;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            // r = r*(x+a) + coeff
            Poly next;
            next.c.assign(r.c.size() + 1, T(0));
            for (std::size_t j = 0; j < r.c.size(); ++j) {
                next.c[j + 1] += r.c[j];
                next.c[j] += r.c[j] * a;
            }
            next += Poly(*it);
            r = std::move(next);
        }
        return r;
    }

    // x^n p(1/x) with n >= degree.
    Poly reversed(std::size_t n) const {
        std::vector<T> r(n + 1, T(0));
        for (std::size_t j = 0; j < c.size(); ++j) r[n - j] = c[j];
        Poly p;
        p.c = std::move(r);
        p.trim();
        return p;
    }

    bool operator==(const Poly& o) const { return c == o.c; }
};

using RationalPoly = Poly<Rational>;

template <class T, class S>
S poly_eval(const Poly<T>& p, const S& x) {
    if constexpr (std::is_same_v<S, Complex>) {
        if (!is_finite(x)) throw math_error("poly_eval: non-finite point");
    }
    return p.template eval<S>(x);
}

// gcd over an exact field, monic result.
inline RationalPoly poly_gcd(RationalPoly a, RationalPoly b) {
    auto make_monic = [](RationalPoly& p) {
        if (!p.is_zero()) {
            Rational lead = p.c.back();
            for (auto& v : p.c) v /= lead;
        }
    };
    while (!b.is_zero()) {
        // remainder of a by b
        RationalPoly r = a;
        while (!r.is_zero() && r.degree() >= b.degree()) {
            Rational f = r.c.back() / b.c.back();
            std::size_t shift = r.c.size() - b.c.size();
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[j + shift] -= f * b.c[j];
            r.trim();
        }
        a = b;
        b = r;
    }
    make_monic(a);
    return a;
}

inline RationalPoly poly_divide_exact(const RationalPoly& a, const RationalPoly& b) {
    if (b.is_zero()) throw math_error("poly_divide_exact: division by zero polynomial");
    RationalPoly r = a, q;
    q.c.assign(a.c.size(), Rational(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        Rational f = r.c.back() / b.c.back();
        std::size_t shift = r.c.size() - b.c.size();
        q.c[shift] = f;
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[j + shift] -= f * b.c[j];
        r.trim();
    }
    if (!r.is_zero()) throw math_error("poly_divide_exact: nonzero remainder");
    q.trim();
    return q;
}

// Simultaneous Aberth iteration for all roots of a square-free polynomial.
inline std::vector<Complex> poly_roots(const Poly<Complex>& p, const Real& tol) {
    int n = p.degree();
    if (n <= 0) return {};
    Poly<Complex> d = p.derivative();
    Real bound(1);
    Real lead = abs(p.c.back());
    for (int j = 0; j < n; ++j) bound = std::max(bound, Real(abs(p.c[j]) / lead));
    bound = 1 + bound;
    std::vector<Complex> z(n);
    Real theta0 = pi_value() / (2 * n) + Real(1) / 5; // avoid symmetry locking
    for (int k = 0; k < n; ++k) {
        Real th = theta0 + 2 * pi_value() * k / n;
        z[k] = Complex(bound * cos(th) / 2, bound * sin(th) / 2);
    }
    for (int iter = 0; iter < 2000; ++iter) {
        Real worst(0);
        for (int k = 0; k < n; ++k) {
            Complex pv = p.eval(z[k]);
            Complex dv = d.eval(z[k]);
            if (dv == Complex(0)) { z[k] += Complex(tol, tol); continue; }
            Complex newton = pv / dv;
            Complex sum(0);
            for (int j = 0; j < n; ++j)
                if (j != k) sum += Complex(1) / (z[k] - z[j]);
            Complex denom = Complex(1) - newton * sum;
            Complex step = (denom == Complex(0)) ? newton : newton / denom;
            z[k] -= step;
            worst = std::max(worst, Real(abs(step)));
        }
        if (worst < tol) break;
    }
    return z;
}

} // namespace hv
