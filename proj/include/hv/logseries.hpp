#pragma once

#include <vector>

#include "hv/series.hpp"

namespace hv {

// Local solution of a Fuchsian operator at a regular singular point:
//   y(t) = t^rho * sum_k  w_k(t) * log(t)^k,   t = x - center.
// Series levels share the expansion point and truncation order.
template <class T>
struct LogSeries {
    T center{};
    Rational rho{0};
    std::vector<Series<T>> levels; // levels[k] multiplies log^k

    LogSeries() = default;
    LogSeries(T center_, Rational rho_, unsigned depth, unsigned order)
        : center(std::move(center_)), rho(std::move(rho_)) {
        levels.assign(depth, Series<T>(center, order));
    }

    unsigned depth() const { return static_cast<unsigned>(levels.size()); }
    unsigned order() const { return levels.empty() ? 0u : levels.front().order; }

    bool is_zero() const {
        for (auto& s : levels)
            if (!s.is_zero()) return false;
        return true;
    }

    void trim_depth() {
        while (!levels.empty() && levels.back().is_zero()) levels.pop_back();
    }

    LogSeries& operator+=(const LogSeries& o) {
        if (!(center == o.center) || rho != o.rho)
            throw math_error("log-series sum requires matching center and exponent");
        if (o.levels.size() > levels.size())
            levels.resize(o.levels.size(), Series<T>(center, o.order()));
        for (std::size_t k = 0; k < o.levels.size(); ++k) levels[k] += o.levels[k];
        return *this;
    }
    LogSeries& operator*=(const T& s) {
        for (auto& w : levels) w *= s;
        return *this;
    }
    friend LogSeries operator*(LogSeries a, const T& s) { a *= s; return a; }

    // theta = t d/dt acting on the full local solution.
    LogSeries theta() const {
        LogSeries r(center, rho, depth(), order());
        T rho_val;
        if constexpr (std::is_same_v<T, Rational>) rho_val = rho;
        else rho_val = make_complex(rho);
        for (std::size_t k = 0; k < levels.size(); ++k) {
            r.levels[k] = levels[k].theta() + levels[k] * rho_val;
            if (k + 1 < levels.size()) r.levels[k] += levels[k + 1] * T(static_cast<long>(k + 1));
        }
        return r;
    }
};

inline LogSeries<Complex> to_complex(const LogSeries<Rational>& s) {
    LogSeries<Complex> r;
    r.center = make_complex(s.center);
    r.rho = s.rho;
    r.levels.reserve(s.levels.size());
    for (auto& w : s.levels) r.levels.push_back(to_complex(w));
    return r;
}

// Value of a log-series at local coordinate t, on the branch where
// arg(t) = branch_arg (so log t = log|t| + i*branch_arg).
inline Complex eval_logseries(const LogSeries<Complex>& y, const Complex& t, const Real& branch_arg) {
    Complex lt(log(abs(t)), branch_arg);
    Complex acc(0);
    Complex lpow(1);
    for (std::size_t k = 0; k < y.levels.size(); ++k) {
        if (k > 0) lpow *= lt;
        acc += y.levels[k].eval_local(t) * lpow;
    }
    if (y.rho != 0) acc *= exp(make_complex(y.rho) * lt);
    return acc;
}

// Signed Stirling numbers of the first kind, s(j,k): t^j y^(j) = sum_k s(j,k) theta^k y.
inline std::vector<std::vector<long long>> stirling_first(unsigned n) {
    std::vector<std::vector<long long>> s(n + 1, std::vector<long long>(n + 1, 0));
    s[0][0] = 1;
    for (unsigned j = 1; j <= n; ++j)
        for (unsigned k = 0; k <= j; ++k)
            s[j][k] = (k ? s[j - 1][k - 1] : 0) - static_cast<long long>(j - 1) * s[j - 1][k];
    return s;
}

} // namespace hv
