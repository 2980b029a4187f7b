#pragma once

#include <catch2/catch.hpp>

#include "hv/scalar.hpp"

namespace hvtest {

using namespace hv;

inline PrecisionContext small_ctx(unsigned digits = 48, unsigned order = 80) {
    ScopedPrecision guard(digits + 10);
    return PrecisionContext(digits, order, pow(Real(10), -static_cast<int>(digits) / 2));
}

inline bool close(const Real& a, const Real& b, const Real& tol) { return abs(a - b) <= tol; }
inline bool close(const Complex& a, const Complex& b, const Real& tol) { return abs(a - b) <= tol; }
inline Real tol10(int k) { return pow(Real(10), k); }

} // namespace hvtest
