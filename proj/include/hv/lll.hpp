#pragma once

#include <vector>

#include "hv/scalar.hpp"

namespace hv {

// Exact-arithmetic LLL reduction (delta = 99/100) for the small integer
// lattices used in relation detection. Rows of `b` are the basis vectors.
inline void lll_reduce(std::vector<std::vector<Integer>>& b) {
    const Rational delta(99, 100);
    std::size_t n = b.size();
    if (n == 0) return;
    std::size_t m = b[0].size();

    // rational Gram-Schmidt data
    std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n, Rational(0)));
    std::vector<Rational> B(n, Rational(0));
    auto recompute = [&]() {
        std::vector<std::vector<Rational>> star(n, std::vector<Rational>(m, Rational(0)));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < m; ++k) star[i][k] = Rational(b[i][k]);
            for (std::size_t j = 0; j < i; ++j) {
                Rational num(0);
                for (std::size_t k = 0; k < m; ++k) num += Rational(b[i][k]) * star[j][k];
                mu[i][j] = B[j] == 0 ? Rational(0) : num / B[j];
                for (std::size_t k = 0; k < m; ++k) star[i][k] -= mu[i][j] * star[j][k];
            }
            Rational norm(0);
            for (std::size_t k = 0; k < m; ++k) norm += star[i][k] * star[i][k];
            B[i] = norm;
        }
    };
    recompute();

    auto size_reduce = [&](std::size_t i, std::size_t j) {
        Rational q = mu[i][j];
        Integer r = numerator(q) >= 0 ? (2 * numerator(q) + denominator(q)) / (2 * denominator(q))
                                      : -((-2 * numerator(q) + denominator(q)) / (2 * denominator(q)));
        if (r == 0) return;
        for (std::size_t k = 0; k < m; ++k) b[i][k] -= r * b[j][k];
        for (std::size_t k = 0; k <= j; ++k) mu[i][k] -= Rational(r) * (k == j ? Rational(1) : mu[j][k]);
    };

    std::size_t k = 1;
    long guard = 0;
    while (k < n) {
        if (++guard > 100000) throw precision_error("LLL failed to terminate");
        for (std::size_t j = k; j-- > 0;) size_reduce(k, j);
        if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            recompute();
            if (k > 1) --k;
        }
    }
}

} // namespace hv
