#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hv/linalg.hpp"
#include "hv/logseries.hpp"

namespace hv {

// Fuchsian operator  L = sum_i  p_i(x) (theta + shift)^i,  theta = x d/dx.
// The same carrier holds the elliptic operator (in lambda, shift 1) and the
// threefold operator (in varphi, shift 0 raw / -1 after MUM normalization).
template <class T>
struct FuchsianOperator {
    std::string name;
    std::string variable = "lambda";
    unsigned order = 0;
    Rational shift{0};
    std::vector<Poly<T>> coeffs; // coeffs[i] multiplies (theta+shift)^i

    const Poly<T>& leading() const { return coeffs.back(); }

    void validate() const {
        if (coeffs.size() != order + 1)
            throw math_error("operator '" + name + "': coefficient count must be order+1");
        if (leading().is_zero())
            throw math_error("operator '" + name + "': leading coefficient identically zero");
    }
};

inline FuchsianOperator<Complex> to_complex(const FuchsianOperator<Rational>& op) {
    FuchsianOperator<Complex> r;
    r.name = op.name;
    r.variable = op.variable;
    r.order = op.order;
    r.shift = op.shift;
    r.coeffs.reserve(op.coeffs.size());
    for (auto& p : op.coeffs) r.coeffs.push_back(to_complex(p));
    return r;
}

// Local theta-form at a point:  t^sigma * L = sum_d t^d chi_d(theta),
// t the local coordinate. chi[0] is the indicial polynomial.
template <class T>
struct LocalOperator {
    T center{};
    bool at_infinity = false;
    unsigned order = 0;
    std::vector<Poly<T>> chi;                 // chi[d](theta)
    std::vector<std::vector<Poly<T>>> dchi;   // dchi[i][d] = d^i/dtheta^i chi_d

    void build_derivatives() {
        dchi.assign(order + 1, {});
        dchi[0] = chi;
        for (unsigned i = 1; i <= order; ++i) {
            dchi[i].reserve(chi.size());
            for (auto& p : dchi[i - 1]) dchi[i].push_back(p.derivative());
        }
    }
};

namespace detail {

template <class T>
bool poly_negligible(const Poly<T>& p, const Real& floor) {
    if constexpr (std::is_same_v<T, Rational>) {
        (void)floor;
        return p.is_zero();
    } else {
        for (auto& v : p.c)
            if (abs(v) > floor) return false;
        return true;
    }
}

template <class T>
void strip_and_check(LocalOperator<T>& loc, const std::string& what) {
    Real scale(0);
    for (auto& p : loc.chi)
        for (auto& v : p.c) {
            if constexpr (std::is_same_v<T, Rational>) scale = std::max(scale, Real(abs(make_real(v))));
            else scale = std::max(scale, Real(abs(v)));
        }
    if (scale == 0) throw math_error(what + ": zero operator");
    Real floor = scale * pow(Real(10), -static_cast<int>(Real::default_precision() * 2 / 3));
    while (!loc.chi.empty() && poly_negligible(loc.chi.front(), floor))
        loc.chi.erase(loc.chi.begin());
    if (loc.chi.empty() || loc.chi.front().degree() != static_cast<int>(loc.order))
        throw math_error(what + ": not a regular (or ordinary) point of the operator");
    if constexpr (!std::is_same_v<T, Rational>) {
        // snap below-noise coefficients to zero
        for (auto& p : loc.chi) {
            for (auto& v : p.c)
                if (abs(v) <= floor) v = T(0);
            p.trim();
        }
    }
    loc.build_derivatives();
}

} // namespace detail

// theta-form of L at a finite point c.
template <class T>
LocalOperator<T> localize(const FuchsianOperator<T>& op, const T& c) {
    op.validate();
    unsigned r = op.order;
    // (x d/dx + shift)^i expanded over d/dx^j with polynomial coefficients
    T shift_val;
    if constexpr (std::is_same_v<T, Rational>) shift_val = op.shift;
    else shift_val = make_complex(op.shift);
    std::vector<std::vector<Poly<T>>> pow_i(r + 1);
    pow_i[0] = {Poly<T>(T(1))};
    Poly<T> x = Poly<T>::x();
    for (unsigned i = 0; i < r; ++i) {
        auto& cur = pow_i[i];
        std::vector<Poly<T>> nxt(cur.size() + 1);
        for (std::size_t j = 0; j < cur.size(); ++j) {
            nxt[j] += x * cur[j].derivative() + cur[j] * shift_val;
            nxt[j + 1] += x * cur[j];
        }
        pow_i[i + 1] = std::move(nxt);
    }
    std::vector<Poly<T>> q(r + 1); // d/dx^j coefficients
    for (unsigned i = 0; i <= r; ++i)
        for (std::size_t j = 0; j < pow_i[i].size(); ++j) q[j] += op.coeffs[i] * pow_i[i][j];
    // shift to t = x - c, then t^r L = sum_j q_j(t) t^{r-j} (t^j d/dt^j)
    auto s1 = stirling_first(r);
    LocalOperator<T> loc;
    loc.center = c;
    loc.order = r;
    for (unsigned j = 0; j <= r; ++j) {
        Poly<T> qs = q[j].shifted(c);
        if (qs.is_zero()) continue;
        Poly<T> theta_fall; // theta^(falling j) as polynomial in theta
        {
            std::vector<T> tc(j + 1, T(0));
            for (unsigned k = 0; k <= j; ++k) tc[k] = T(static_cast<long>(s1[j][k]));
            theta_fall = Poly<T>(std::move(tc));
        }
        for (std::size_t d = 0; d < qs.c.size(); ++d) {
            if (qs.c[d] == T(0)) continue;
            std::size_t slot = d + (r - j);
            if (loc.chi.size() <= slot) loc.chi.resize(slot + 1);
            loc.chi[slot] += theta_fall * qs.c[d];
        }
    }
    detail::strip_and_check(loc, "localize(" + op.name + ")");
    return loc;
}

// theta-form of L at infinity, t = 1/x (theta_x = -theta_t).
template <class T>
LocalOperator<T> localize_infinity(const FuchsianOperator<T>& op) {
    op.validate();
    unsigned r = op.order;
    std::size_t maxdeg = 0;
    for (auto& p : op.coeffs) maxdeg = std::max(maxdeg, static_cast<std::size_t>(std::max(p.degree(), 0)));
    T shift_val;
    if constexpr (std::is_same_v<T, Rational>) shift_val = op.shift;
    else shift_val = make_complex(op.shift);
    Poly<T> base(std::vector<T>{shift_val, T(-1)}); // -theta + shift
    LocalOperator<T> loc;
    loc.at_infinity = true;
    loc.order = r;
    Poly<T> theta_pow(T(1));
    for (unsigned i = 0; i <= r; ++i) {
        Poly<T> rev = op.coeffs[i].reversed(maxdeg);
        for (std::size_t d = 0; d < rev.c.size(); ++d) {
            if (rev.c[d] == T(0)) continue;
            if (loc.chi.size() <= d) loc.chi.resize(d + 1);
            loc.chi[d] += theta_pow * rev.c[d];
        }
        theta_pow *= base;
    }
    detail::strip_and_check(loc, "localize_infinity(" + op.name + ")");
    return loc;
}

namespace detail {

inline std::vector<std::pair<Rational, unsigned>>
rational_roots_with_multiplicity(const Poly<Rational>& chi0) {
    std::vector<std::pair<Rational, unsigned>> out;
    Poly<Rational> f = chi0;
    Poly<Rational> sq = poly_divide_exact(f, poly_gcd(f, f.derivative()));
    // numeric roots of the square-free part, then exact recognition
    ScopedPrecision guard(std::max<unsigned>(Real::default_precision(), 60));
    Real tol = pow(Real(10), -30);
    auto roots = poly_roots(to_complex(sq), tol);
    for (auto& z : roots) {
        Rational r;
        try {
            r = rational_reconstruct(z, Integer(1000000), pow(Real(10), -15));
        } catch (const no_candidate_error&) {
            throw math_error("non-rational indicial exponent encountered");
        }
        if (!(sq.eval(r) == Rational(0)))
            throw math_error("indicial exponent failed exact verification");
        unsigned mult = 0;
        Poly<Rational> g = f;
        while (!g.is_zero() && g.eval(r) == Rational(0)) {
            ++mult;
            g = g.derivative();
        }
        out.emplace_back(r, mult);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<std::pair<Rational, unsigned>>
complex_roots_with_multiplicity(const Poly<Complex>& chi0, unsigned order) {
    // Exponents in scope are rational with integer spacing. A root of
    // multiplicity m is resolved by Aberth only to the 1/m-th power of the
    // working accuracy, so recognition uses a deliberately loose tolerance.
    unsigned digits = Real::default_precision();
    Real iter_tol = pow(Real(10), -static_cast<int>(digits) + 5);
    Real rec_tol = pow(Real(10), -static_cast<int>(digits / 5));
    auto roots = poly_roots(chi0, iter_tol);
    std::vector<std::pair<Rational, unsigned>> out;
    for (auto& z : roots) {
        Rational r;
        try {
            r = rational_reconstruct(z, Integer(1000000), rec_tol);
        } catch (const no_candidate_error&) {
            throw math_error("non-rational indicial exponent encountered");
        }
        bool found = false;
        for (auto& e : out)
            if (e.first == r) { ++e.second; found = true; }
        if (!found) out.emplace_back(r, 1);
    }
    unsigned total = 0;
    for (auto& e : out) total += e.second;
    if (total != order) throw math_error("indicial root multiplicities inconsistent");
    // verify each recognized root annihilates chi0 to the accuracy its
    // multiplicity allows
    Real scale(0);
    for (auto& c : chi0.c) scale = std::max(scale, Real(abs(c)));
    for (auto& [root, mult] : out) {
        Real residual = abs(chi0.template eval<Complex>(make_complex(root)));
        Real allowed = scale * pow(rec_tol, mult) * pow(Real(10), static_cast<int>(digits / 10));
        if (residual > allowed)
            throw math_error("indicial exponent failed verification");
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

// Indicial exponents (with multiplicity, ascending) of the local operator.
template <class T>
std::vector<Rational> indicial_exponents_local(const LocalOperator<T>& loc) {
    std::vector<std::pair<Rational, unsigned>> rm;
    if constexpr (std::is_same_v<T, Rational>)
        rm = detail::rational_roots_with_multiplicity(loc.chi[0]);
    else
        rm = detail::complex_roots_with_multiplicity(loc.chi[0], loc.order);
    std::vector<Rational> out;
    for (auto& [root, mult] : rm)
        for (unsigned k = 0; k < mult; ++k) out.push_back(root);
    if (out.size() != loc.order)
        throw math_error("indicial polynomial has wrong root count");
    return out;
}

template <class T>
std::vector<Rational> indicial_exponents(const FuchsianOperator<T>& op, const T& point) {
    return indicial_exponents_local(localize(op, point));
}

template <class T>
std::vector<Rational> indicial_exponents_infinity(const FuchsianOperator<T>& op) {
    return indicial_exponents_local(localize_infinity(op));
}

// Frobenius local basis: solutions ordered by ascending log depth, then by
// ascending leading exponent; the leading analytic solution has unit leading
// coefficient and deeper solutions vanish at the lower solutions' pivots.
template <class T>
struct FrobeniusBasis {
    T center{};
    bool at_infinity = false;
    Rational rho{0};                           // minimal exponent
    std::vector<unsigned> offsets;             // exponent offsets (with multiplicity)
    std::vector<LogSeries<T>> sols;
    std::vector<std::pair<unsigned, unsigned>> pivots; // (log level, offset) per solution
    unsigned digits = 0;
    unsigned order = 0;
    LocalOperator<T> local;

    unsigned size() const { return static_cast<unsigned>(sols.size()); }
};

namespace detail {

// One consistent head: coefficient table c[k][n], k log level, n offset.
template <class T>
struct Head {
    std::vector<std::vector<T>> w;

    static Real mag(const T& v) {
        if constexpr (std::is_same_v<T, Rational>) return abs(make_real(v));
        else return abs(v);
    }
    Real scale() const {
        Real s(0);
        for (auto& row : w)
            for (auto& v : row) s = std::max(s, mag(v));
        return s;
    }
    bool negligible(const T& v, const Real& floor) const {
        if constexpr (std::is_same_v<T, Rational>) { (void)floor; return v == 0; }
        else return abs(v) <= floor;
    }
    int top_level(const Real& floor) const {
        for (int k = static_cast<int>(w.size()) - 1; k >= 0; --k)
            for (auto& v : w[k])
                if (!negligible(v, floor)) return k;
        return -1;
    }
    int leading_offset(int level, const Real& floor) const {
        for (std::size_t n = 0; n < w[level].size(); ++n)
            if (!negligible(w[level][n], floor)) return static_cast<int>(n);
        return -1;
    }
    void axpy(const T& f, const Head& o) {
        for (std::size_t k = 0; k < w.size(); ++k)
            for (std::size_t n = 0; n < w[k].size(); ++n) w[k][n] -= f * o.w[k][n];
    }
    void scale_by(const T& f) {
        for (auto& row : w)
            for (auto& v : row) v *= f;
    }
};

} // namespace detail

// Construct the Frobenius basis of `loc` to `ctx.truncation_order` terms.
template <class T>
FrobeniusBasis<T> frobenius_from_local(const LocalOperator<T>& loc, const PrecisionContext& ctx) {
    unsigned r = loc.order;
    auto exponents = indicial_exponents_local(loc);
    Rational rho = exponents.front();
    std::vector<unsigned> offsets;
    for (auto& e : exponents) {
        Rational diff = e - rho;
        if (denominator(diff) != 1)
            throw math_error("frobenius basis requires integer exponent differences");
        Integer d = numerator(diff);
        if (d < 0 || d > 64) throw math_error("exponent offset out of range");
        offsets.push_back(d.convert_to<unsigned>());
    }
    unsigned nhead = *std::max_element(offsets.begin(), offsets.end());
    unsigned width = nhead + 1;
    if (ctx.truncation_order <= nhead + 2)
        throw math_error("truncation order too small to resolve exponent differences");

    auto chi_eval = [&](unsigned i, unsigned d, long n_minus_d) -> T {
        // dchi[i][d] evaluated at rho + (n-d)
        if (d >= loc.dchi[i].size()) return T(0);
        if constexpr (std::is_same_v<T, Rational>)
            return loc.dchi[i][d].eval(Rational(rho + n_minus_d));
        else
            return loc.dchi[i][d].template eval<Complex>(make_complex(Rational(rho + n_minus_d)));
    };
    auto binom = [](unsigned n, unsigned k) -> long {
        long b = 1;
        for (unsigned j = 1; j <= k; ++j) b = b * (n - k + j) / j;
        return b;
    };

    // Head system: equations (m,N) over unknowns (k,n) flattened as k*width+n.
    Matrix<T> sys(r * width, r * width);
    for (unsigned m = 0; m < r; ++m)
        for (unsigned N = 0; N <= nhead; ++N) {
            std::size_t row = m * width + N;
            for (unsigned i = 0; m + i < r; ++i)
                for (unsigned d = 0; d <= N && d < loc.chi.size(); ++d) {
                    T v = chi_eval(i, d, static_cast<long>(N) - d);
                    if (v == T(0)) continue;
                    sys(row, (m + i) * width + (N - d)) += T(binom(m + i, i)) * v;
                }
        }
    Real drop = pow(Real(10), -static_cast<int>(2 * ctx.working_digits / 3));
    auto kernel = null_space(sys, drop);
    if (kernel.size() != r)
        throw math_error("frobenius head system has wrong solution count");

    // canonicalize: echelon adapted to the log filtration
    std::vector<detail::Head<T>> pool;
    for (auto& vec : kernel) {
        detail::Head<T> h;
        h.w.assign(r, std::vector<T>(width, T(0)));
        for (unsigned k = 0; k < r; ++k)
            for (unsigned n = 0; n < width; ++n) h.w[k][n] = vec[k * width + n];
        pool.push_back(std::move(h));
    }
    Real pool_scale(0);
    for (auto& h : pool) pool_scale = std::max(pool_scale, h.scale());
    Real floor = pool_scale * drop;

    std::vector<detail::Head<T>> canon;
    std::vector<std::pair<unsigned, unsigned>> pivots;
    while (!pool.empty()) {
        std::size_t best = pool.size();
        int bk = -1, bn = -1;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            int k = pool[i].top_level(floor);
            if (k < 0) { pool.erase(pool.begin() + i); --i; continue; }
            int n = pool[i].leading_offset(k, floor);
            if (best == pool.size() || k < bk || (k == bk && n < bn)) { best = i; bk = k; bn = n; }
        }
        if (best == pool.size()) break;
        detail::Head<T> h = pool[best];
        pool.erase(pool.begin() + best);
        T lead = h.w[bk][bn];
        h.scale_by(T(1) / lead);
        for (auto& g : pool) g.axpy(g.w[bk][bn], h);
        canon.push_back(std::move(h));
        pivots.emplace_back(static_cast<unsigned>(bk), static_cast<unsigned>(bn));
    }
    if (canon.size() != r)
        throw math_error("frobenius basis is degenerate");
    // cross-reduce so each solution vanishes at all other pivots
    for (std::size_t i = 0; i < canon.size(); ++i)
        for (std::size_t j = 0; j < canon.size(); ++j) {
            if (i == j) continue;
            auto [pk, pn] = pivots[j];
            T f = canon[i].w[pk][pn];
            if (!(f == T(0))) canon[i].axpy(f, canon[j]);
        }
    // order: log depth ascending, then leading offset ascending
    std::vector<std::size_t> idx(canon.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return pivots[a] < pivots[b];
    });

    // tails by direct recursion, levels processed top-down
    FrobeniusBasis<T> basis;
    basis.center = loc.center;
    basis.at_infinity = loc.at_infinity;
    basis.rho = rho;
    basis.offsets = offsets;
    basis.digits = ctx.working_digits;
    basis.order = ctx.truncation_order;
    basis.local = loc;
    unsigned len = ctx.truncation_order;
    unsigned dmax = static_cast<unsigned>(loc.chi.size()) - 1;
    // chi values cache per N: vals[i][d]
    for (std::size_t which : idx) {
        auto& h = canon[which];
        int top = h.top_level(floor);
        unsigned depth = static_cast<unsigned>(top) + 1;
        LogSeries<T> sol(loc.center, rho, depth, len);
        for (unsigned k = 0; k < depth; ++k) {
            sol.levels[k].c.assign(len, T(0));
            for (unsigned n = 0; n < width; ++n) sol.levels[k].c[n] = h.w[k][n];
        }
        for (unsigned N = width; N < len; ++N) {
            std::vector<std::vector<T>> vals(r + 1);
            unsigned dcap = std::min(dmax, N);
            for (unsigned i = 0; i <= r; ++i) {
                vals[i].assign(dcap + 1, T(0));
                for (unsigned d = 0; d <= dcap; ++d) vals[i][d] = chi_eval(i, d, static_cast<long>(N) - d);
            }
            for (int k = static_cast<int>(depth) - 1; k >= 0; --k) {
                T acc(0);
                for (unsigned d = 1; d <= dcap; ++d) {
                    const T& prev = sol.levels[k].c[N - d];
                    if (!(prev == T(0))) acc += vals[0][d] * prev;
                }
                for (unsigned i = 1; static_cast<unsigned>(k) + i < depth; ++i) {
                    long b = binom(k + i, i);
                    for (unsigned d = 0; d <= dcap; ++d) {
                        const T& up = sol.levels[k + i].c[N - d];
                        if (!(up == T(0))) acc += T(b) * vals[i][d] * up;
                    }
                }
                sol.levels[k].c[N] = -acc / vals[0][0];
            }
        }
        basis.sols.push_back(std::move(sol));
        basis.pivots.push_back(pivots[which]);
    }
    return basis;
}

template <class T>
FrobeniusBasis<T> frobenius_basis(const FuchsianOperator<T>& op, const T& point,
                                  const PrecisionContext& ctx) {
    return frobenius_from_local(localize(op, point), ctx);
}

// Image of a local log-series under the (stripped) local operator; the
// residual oracle: a true solution maps to zero through the computed range.
template <class T>
LogSeries<T> apply_operator(const LocalOperator<T>& loc, const LogSeries<T>& y) {
    unsigned len = y.order();
    unsigned depth = y.depth();
    LogSeries<T> out(y.center, y.rho, depth, len);
    auto binom = [](unsigned n, unsigned k) -> long {
        long b = 1;
        for (unsigned j = 1; j <= k; ++j) b = b * (n - k + j) / j;
        return b;
    };
    unsigned dmax = static_cast<unsigned>(loc.chi.size()) - 1;
    for (unsigned m = 0; m < depth; ++m) {
        out.levels[m].c.assign(len, T(0));
        for (unsigned N = 0; N < len; ++N) {
            T acc(0);
            for (unsigned i = 0; m + i < depth; ++i) {
                long b = binom(m + i, i);
                unsigned dcap = std::min(dmax, N);
                for (unsigned d = 0; d <= dcap; ++d) {
                    if (d >= loc.dchi[i].size()) continue;
                    if (y.levels[m + i].c.size() <= N - d) continue;
                    const T& c = y.levels[m + i].c[N - d];
                    if (c == T(0)) continue;
                    T v;
                    if constexpr (std::is_same_v<T, Rational>)
                        v = loc.dchi[i][d].eval(Rational(y.rho + (static_cast<long>(N) - d)));
                    else
                        v = loc.dchi[i][d].template eval<Complex>(make_complex(Rational(y.rho + (static_cast<long>(N) - d))));
                    acc += T(b) * v * c;
                }
            }
            out.levels[m].c[N] = acc;
        }
    }
    return out;
}

template <class T>
LogSeries<T> apply_operator(const FuchsianOperator<T>& op, const LogSeries<T>& y) {
    return apply_operator(localize(op, y.center), y);
}

// Anticlockwise (orientation +1) continuation once around the basis center,
// expressed exactly in the basis itself: log t -> log t + 2*pi*i*orientation.
inline Matrix<Complex> local_monodromy(const FrobeniusBasis<Complex>& basis, int orientation) {
    unsigned r = basis.size();
    unsigned width = *std::max_element(basis.offsets.begin(), basis.offsets.end()) + 1;
    Complex twist = two_pi_i() * Real(orientation);
    Complex expfac = exp(make_complex(basis.rho) * twist);
    auto binom = [](unsigned n, unsigned k) -> long {
        long b = 1;
        for (unsigned j = 1; j <= k; ++j) b = b * (n - k + j) / j;
        return b;
    };
    Matrix<Complex> m(r, r);
    for (unsigned i = 0; i < r; ++i) {
        // transformed head of solution i
        std::vector<std::vector<Complex>> w(r, std::vector<Complex>(width, Complex(0)));
        const auto& sol = basis.sols[i];
        for (unsigned k = 0; k < sol.depth(); ++k) {
            for (unsigned j = 0; j <= k; ++j) {
                // contribution of level k to level j: C(k,j) twist^(k-j)
                Complex f = Complex(binom(k, k - j)) * pow(twist, static_cast<unsigned>(k - j)) * expfac;
                for (unsigned n = 0; n < width && n < sol.levels[k].c.size(); ++n)
                    w[j][n] += f * sol.levels[k].c[n];
            }
        }
        for (unsigned j = 0; j < r; ++j) {
            auto [pk, pn] = basis.pivots[j];
            m(i, j) = w[pk][pn];
        }
    }
    return m;
}

// Jet matrix: J(i,j) = (d/dx)^j y_i at the given point, on the given branch.
struct BasisJets {
    // theta-power images of every solution, built once per basis
    std::vector<std::vector<LogSeries<Complex>>> theta_jets; // [power][solution]

    BasisJets() = default;
    explicit BasisJets(const FrobeniusBasis<Complex>& basis) {
        unsigned r = basis.size();
        theta_jets.assign(r, {});
        theta_jets[0] = basis.sols;
        for (unsigned i = 1; i < r; ++i) {
            theta_jets[i].reserve(r);
            for (auto& s : theta_jets[i - 1]) theta_jets[i].push_back(s.theta());
        }
    }
};

// Evaluate the full jet matrix of a basis at x (local coordinate t = x-center),
// with log-branch arg(t) = branch_arg.
inline Matrix<Complex> evaluate_jets(const FrobeniusBasis<Complex>& basis, const BasisJets& jets,
                                     const Complex& x, const Real& branch_arg,
                                     const Real* tail_tol = nullptr) {
    unsigned r = basis.size();
    Complex t = x - basis.center;
    Real t_abs = abs(t);
    if (t_abs == 0 && basis.rho != 0)
        throw math_error("evaluate_jets: evaluation at the expansion point of a singular basis");
    auto s1 = stirling_first(r);
    Matrix<Complex> theta_vals(r, r);
    for (unsigned i = 0; i < r; ++i)
        for (unsigned p = 0; p < r; ++p)
            theta_vals(i, p) = eval_logseries(jets.theta_jets[p][i], t, branch_arg);
    if (tail_tol != nullptr) {
        Real worst(0);
        for (auto& s : basis.sols)
            for (auto& lvl : s.levels) worst = std::max(worst, lvl.tail_estimate(t_abs));
        if (worst > *tail_tol)
            throw precision_error("evaluate_jets: truncation tail estimate above tolerance");
    }
    Matrix<Complex> out(r, r);
    Complex tp(1);
    for (unsigned j = 0; j < r; ++j) {
        if (j > 0) tp *= t;
        for (unsigned i = 0; i < r; ++i) {
            Complex acc(0);
            for (unsigned k = 0; k <= j; ++k)
                if (s1[j][k] != 0) acc += Complex(static_cast<long>(s1[j][k])) * theta_vals(i, k);
            out(i, j) = acc / tp;
        }
    }
    return out;
}

// Value row (no derivatives) of all basis solutions at x.
inline std::vector<Complex> evaluate_values(const FrobeniusBasis<Complex>& basis,
                                            const Complex& x, const Real& branch_arg) {
    std::vector<Complex> out;
    out.reserve(basis.size());
    Complex t = x - basis.center;
    for (auto& s : basis.sols) out.push_back(eval_logseries(s, t, branch_arg));
    return out;
}

} // namespace hv
