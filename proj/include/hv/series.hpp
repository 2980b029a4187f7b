#pragma once

#include <vector>

#include "hv/poly.hpp"

namespace hv {

// Power series truncated at a fixed order, attached to an expansion point.
// Arithmetic requires matching expansion points and orders; all coefficients
// beyond truncation are dropped (never renormalized).
template <class T>
struct Series {
    T center{};
    unsigned order = 0;     // number of retained coefficients
    std::vector<T> c;       // c[n] multiplies (x - center)^n, size <= order

    Series() = default;
    Series(T center_, unsigned order_) : center(std::move(center_)), order(order_) {}
    Series(T center_, unsigned order_, std::vector<T> coeffs)
        : center(std::move(center_)), order(order_), c(std::move(coeffs)) {
        if (c.size() > order) c.resize(order);
    }

    static Series constant(T center_, unsigned order_, T value) {
        Series s(std::move(center_), order_);
        s.c.assign(1, std::move(value));
        return s;
    }

    T coeff(std::size_t n) const { return n < c.size() ? c[n] : T(0); }
    void set_coeff(std::size_t n, T v) {
        if (n >= order) return;
        if (n >= c.size()) c.resize(n + 1, T(0));
        c[n] = std::move(v);
    }

    bool is_zero() const {
        for (auto& v : c)
            if (!(v == T(0))) return false;
        return true;
    }

    void check_compatible(const Series& o) const {
        if (!(center == o.center) || order != o.order)
            throw math_error("series arithmetic requires equal expansion points and orders");
    }

    Series& operator+=(const Series& o) {
        check_compatible(o);
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t n = 0; n < o.c.size(); ++n) c[n] += o.c[n];
        return *this;
    }
    Series& operator-=(const Series& o) {
        check_compatible(o);
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t n = 0; n < o.c.size(); ++n) c[n] -= o.c[n];
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { a += b; return a; }
    friend Series operator-(Series a, const Series& b) { a -= b; return a; }
    friend Series operator-(const Series& a) {
        Series r = a;
        for (auto& v : r.c) v = -v;
        return r;
    }
    Series& operator*=(const T& s) {
        for (auto& v : c) v *= s;
        return *this;
    }
    friend Series operator*(Series a, const T& s) { a *= s; return a; }
    friend Series operator*(const T& s, Series a) { a *= s; return a; }

    // Cauchy product truncated to the common order.
    friend Series operator*(const Series& a, const Series& b) {
        a.check_compatible(b);
        Series r(a.center, a.order);
        if (a.c.empty() || b.c.empty()) return r;
        std::size_t len = std::min<std::size_t>(a.order, a.c.size() + b.c.size() - 1);
        r.c.assign(len, T(0));
        for (std::size_t i = 0; i < a.c.size() && i < len; ++i) {
            if (a.c[i] == T(0)) continue;
            std::size_t jmax = std::min(b.c.size(), len - i);
            for (std::size_t j = 0; j < jmax; ++j) r.c[i + j] += a.c[i] * b.c[j];
        }
        return r;
    }
    Series& operator*=(const Series& o) { *this = *this * o; return *this; }

    // Division requires an invertible constant term.
    friend Series operator/(const Series& a, const Series& b) {
        a.check_compatible(b);
        if (b.c.empty() || b.c[0] == T(0))
            throw math_error("series division requires invertible constant term");
        Series r(a.center, a.order);
        r.c.assign(a.order, T(0));
        for (std::size_t n = 0; n < a.order; ++n) {
            T acc = n < a.c.size() ? a.c[n] : T(0);
            std::size_t jmax = std::min<std::size_t>(n, b.c.size() - 1);
            for (std::size_t j = 1; j <= jmax; ++j) acc -= b.c[j] * r.c[n - j];
            r.c[n] = acc / b.c[0];
        }
        return r;
    }

    // theta = t d/dt in the local coordinate t = x - center.
    Series theta() const {
        Series r(center, order);
        r.c.assign(c.size(), T(0));
        for (std::size_t n = 1; n < c.size(); ++n) r.c[n] = c[n] * T(static_cast<long>(n));
        return r;
    }

    Series multiplied_by_poly(const Poly<T>& p) const {
        Series r(center, order);
        if (p.is_zero() || c.empty()) return r;
        std::size_t len = std::min<std::size_t>(order, c.size() + p.c.size() - 1);
        r.c.assign(len, T(0));
        for (std::size_t d = 0; d < p.c.size(); ++d) {
            if (p.c[d] == T(0)) continue;
            std::size_t imax = std::min(c.size(), len > d ? len - d : 0);
            for (std::size_t i = 0; i < imax; ++i) r.c[i + d] += p.c[d] * c[i];
        }
        return r;
    }

    // Horner evaluation at local coordinate t (not at the global point).
    template <class S>
    S eval_local(const S& t) const {
        S r(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * t + S(*it);
        return r;
    }

    // Crude tail estimate: magnitude of the last retained terms at |t|.
    Real tail_estimate(const Real& t_abs) const {
        Real best(0);
        std::size_t tail = c.size() > 8 ? 8 : c.size();
        for (std::size_t k = 0; k < tail; ++k) {
            std::size_t n = c.size() - 1 - k;
            Real mag;
            if constexpr (std::is_same_v<T, Complex>) mag = abs(c[n]);
            else mag = abs(make_real(c[n]));
            best = std::max(best, mag * pow(t_abs, static_cast<unsigned>(n)));
        }
        return 2 * best;
    }
};

template <class T>
Series<T> series_multiply(const Series<T>& a, const Series<T>& b) { return a * b; }

inline Series<Complex> to_complex(const Series<Rational>& s) {
    Series<Complex> r(make_complex(s.center), s.order);
    r.c.reserve(s.c.size());
    for (auto& v : s.c) r.c.push_back(make_complex(v));
    return r;
}

inline Poly<Complex> to_complex(const Poly<Rational>& p) {
    Poly<Complex> r;
    r.c.reserve(p.c.size());
    for (auto& v : p.c) r.c.push_back(make_complex(v));
    return r;
}

} // namespace hv
