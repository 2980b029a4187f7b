#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/complex_adaptor.hpp>

#include <optional>
#include <string>
#include <vector>

#include "hv/error.hpp"

namespace hv {

namespace mp = boost::multiprecision;

using Integer  = mp::mpz_int;
using Rational = mp::mpq_rational;

// Arbitrary-precision real/complex scalars. Precision is dynamic (decimal
// digits), set per run through PrecisionContext below.
using Real    = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;
using Complex = mp::number<mp::complex_adaptor<mp::mpfr_float_backend<0>>, mp::et_off>;

inline int digits_of_tolerance(const Real& tol) {
    if (tol <= 0)
        throw config_error("target tolerance must be positive");
    Real d = -log10(tol);
    return static_cast<int>(ceil(d).convert_to<long>());
}

// Working precision, series truncation order and target tolerance for a run.
// Every derived object records the digits/order it was computed under.
struct PrecisionContext {
    unsigned working_digits;
    unsigned truncation_order;
    Real target_tolerance;

    PrecisionContext(unsigned digits, unsigned order, const Real& tol)
        : working_digits(digits), truncation_order(order), target_tolerance(tol) {
        if (digits == 0 || order == 0)
            throw config_error("working_digits and truncation_order must be positive");
        int need = digits_of_tolerance(tol);
        if (static_cast<int>(digits) < 2 * need)
            throw config_error("working_digits must be at least twice the digits of target_tolerance");
    }

    static PrecisionContext standard() {
        Real::default_precision(130);
        return PrecisionContext(120, 400, pow(Real(10), -40));
    }

    // Make this context's precision the thread default for new scalars.
    void activate() const {
        Real::default_precision(working_digits);
    }
};

// RAII activation; restores nothing on purpose (a run owns its thread).
struct ScopedPrecision {
    explicit ScopedPrecision(const PrecisionContext& ctx) { ctx.activate(); }
    explicit ScopedPrecision(unsigned digits) {
        Real::default_precision(digits);
    }
};

inline Real make_real(const Rational& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
    return r;
}
inline Complex make_complex(const Rational& q) { return Complex(make_real(q), Real(0)); }
inline Complex make_complex(const Real& re, const Real& im = Real(0)) { return Complex(re, im); }

inline Real pi_value() {
    Real p;
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

inline Complex imag_unit() { return Complex(Real(0), Real(1)); }
inline Complex two_pi_i() { return Complex(Real(0), 2 * pi_value()); }

inline bool is_finite(const Real& x) { return mpfr_number_p(x.backend().data()) != 0; }
inline bool is_finite(const Complex& z) { return is_finite(z.real()) && is_finite(z.imag()); }

inline Real abs2(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }

inline Integer nearest_integer(const Real& x) {
    Real r = round(x);
    return r.convert_to<Integer>();
}

// Distance from z to the nearest Gaussian integer on the real axis.
inline Real integer_distance(const Complex& z) {
    Real d = abs(z.real() - Real(nearest_integer(z.real())));
    return d + abs(z.imag());
}

// Exact dyadic value of an mpfr real as a rational.
inline Rational exact_rational(const Real& x) {
    if (!is_finite(x)) throw math_error("exact_rational: non-finite input");
    if (x == 0) return Rational(0);
    mpz_t num;
    mpz_init(num);
    mpfr_exp_t e = mpfr_get_z_2exp(num, x.backend().data());
    Integer n(num);
    mpz_clear(num);
    Rational q(n);
    if (e >= 0) {
        Integer p(1);
        p <<= static_cast<unsigned>(e);
        q *= Rational(p);
    } else {
        Integer p(1);
        p <<= static_cast<unsigned>(-e);
        q /= Rational(p);
    }
    return q;
}

// Best rational approximation of q with denominator <= max_den
// (continued-fraction convergents and semiconvergents).
inline Rational best_rational_below(const Rational& x, const Integer& max_den) {
    Integer p0(0), q0(1), p1(1), q1(0);
    Rational rest = x;
    while (true) {
        Integer a = numerator(rest) / denominator(rest); // floor for positive; fix sign below
        if (rest < 0 && Rational(a) != rest) a -= 1;
        Integer p2 = a * p1 + p0;
        Integer q2 = a * q1 + q0;
        if (q2 > max_den) {
            // largest admissible semiconvergent
            Integer k = (max_den - q0) / q1;
            Integer ps = k * p1 + p0, qs = k * q1 + q0;
            Rational cand1(p1, q1);
            if (qs > 0) {
                Rational cand2(ps, qs);
                return abs(x - cand2) < abs(x - cand1) ? cand2 : cand1;
            }
            return cand1;
        }
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        Rational frac = rest - Rational(a);
        if (frac == 0) return Rational(p1, q1);
        rest = Rational(1) / frac;
    }
}

// The unique rational within tol of re(x) with denominator <= max_den, if any.
// Requires |im(x)| < tol.
inline Rational rational_reconstruct(const Complex& x, const Integer& max_den, const Real& tol) {
    if (!is_finite(x)) throw math_error("rational_reconstruct: non-finite input");
    if (abs(x.imag()) >= tol)
        throw no_candidate_error("rational_reconstruct: imaginary part exceeds tolerance");
    Rational target = exact_rational(x.real());
    Rational best = best_rational_below(target, max_den);
    if (abs(make_real(best) - x.real()) >= tol)
        throw no_candidate_error("rational_reconstruct: no rational within tolerance for denominator bound");
    return best;
}

inline std::string rational_to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

inline Integer parse_integer(const std::string& text) {
    // strip leading zeros so GMP does not read the literal as octal
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    std::size_t k = 0;
    while (k + 1 < s.size() && s[k] == '0') ++k;
    s = s.substr(k);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw config_error("bad integer literal '" + text + "'");
    Integer n(s);
    return neg ? -n : n;
}

inline Rational parse_rational(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw config_error("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Integer n = parse_integer(s.substr(0, slash));
        Integer d = parse_integer(s.substr(slash + 1));
        if (d == 0) throw config_error("zero denominator in '" + text + "'");
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(parse_integer(s));
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    if (tail.find_first_not_of("0123456789") != std::string::npos || tail.empty())
        throw config_error("bad decimal literal '" + text + "'");
    Integer n = parse_integer(head + tail);
    Integer d = pow(Integer(10), static_cast<unsigned>(tail.size()));
    return Rational(n, d);
}

// Exact round-trippable serialization of a Real (hex mantissa & exponent).
inline std::string real_to_hex(const Real& x) {
    if (x == 0) return "0";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 16, 0, x.backend().data(), MPFR_RNDN);
    std::string out(s);
    mpfr_free_str(s);
    return out + "@" + std::to_string(static_cast<long>(e));
}

inline Real real_from_hex(const std::string& text, unsigned digits) {
    Real x(0, digits);
    if (text == "0") return x;
    auto at = text.find('@');
    if (at == std::string::npos) throw config_error("bad hex real '" + text + "'");
    std::string mant = text.substr(0, at);
    long e = std::stol(text.substr(at + 1));
    std::string full = (mant[0] == '-' ? "-0." + mant.substr(1) : "0." + mant) + "@" + std::to_string(e);
    if (mpfr_set_str(x.backend().data(), full.c_str(), 16, MPFR_RNDN) != 0)
        throw config_error("cannot parse hex real '" + text + "'");
    return x;
}

} // namespace hv
