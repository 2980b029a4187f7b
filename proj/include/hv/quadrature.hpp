#pragma once

#include <functional>
#include <optional>

#include "hv/scalar.hpp"

namespace hv {

struct QuadratureResult {
    Complex value{0};
    long node_count = 0;
    Real error_estimate{0};
    unsigned digits = 0;

    QuadratureResult& operator+=(const QuadratureResult& o) {
        value += o.value;
        node_count += o.node_count;
        error_estimate += o.error_estimate;
        digits = std::max(digits, o.digits);
        return *this;
    }
};

// Double-exponential (tanh-sinh) quadrature over t in (0,1). The integrand
// callback may decline a node (hard cutoff near singular endpoints); nodes
// are visited in ascending t so callers may advance stateful evaluators.
// Node counts double per level until the level-to-level difference falls
// below the tolerance.
class TanhSinh {
public:
    using Integrand = std::function<std::optional<Complex>(const Real& t)>;

    static QuadratureResult integrate(const Integrand& f, const PrecisionContext& ctx,
                                      long max_nodes = 4096) {
        Real tol = ctx.target_tolerance;
        Real u_max = find_umax(ctx.working_digits);
        Complex prev(0);
        bool have_prev = false;
        QuadratureResult out;
        out.digits = ctx.working_digits;
        int growth_streak = 0;
        Real prev_mag(0);
        for (int level = 2;; ++level) {
            Real h = pow(Real(2), -level);
            long jmax = (u_max / h).convert_to<long>() + 1;
            if (2 * jmax + 1 > max_nodes) {
                if (have_prev && out.error_estimate < tol * 1000000) break; // accept, tail already tiny
                throw precision_error("quadrature: tolerance not reached within the node budget");
            }
            Complex acc(0);
            long used = 0;
            Real half_pi = pi_value() / 2;
            Real quarter_pi = pi_value() / 4;
            for (long j = -jmax; j <= jmax; ++j) {
                Real u = h * j;
                Real g = half_pi * sinh(u);
                Real ch = cosh(g);
                // d/du of t = (1 + tanh(g))/2 on the unit interval
                Real w = quarter_pi * cosh(u) / (ch * ch);
                if (w < pow(Real(10), -static_cast<int>(ctx.working_digits) - 15)) continue;
                Real t = (1 + tanh(g)) / 2;
                if (t <= 0 || t >= 1) continue;
                auto v = f(t);
                if (!v) continue;
                acc += *v * Complex(w);
                ++used;
            }
            acc *= Complex(h);
            out.node_count = used;
            if (have_prev) {
                out.error_estimate = abs(acc - prev);
                Real scale = std::max(Real(1), Real(abs(acc)));
                if (out.error_estimate <= tol * scale) {
                    out.value = acc;
                    return out;
                }
                if (abs(acc) > 2 * prev_mag && prev_mag > 0) {
                    if (++growth_streak >= 3)
                        throw math_error("quadrature: integrand appears non-integrable at an endpoint");
                } else {
                    growth_streak = 0;
                }
            }
            prev = acc;
            prev_mag = abs(acc);
            have_prev = true;
            out.value = acc;
        }
        return out;
    }

private:
    static Real find_umax(unsigned digits) {
        // sech^2((pi/2) sinh u) cosh(u) below the noise floor
        Real target = Real(digits + 20) * log(Real(10)) / 2;
        Real lo(1), hi(10);
        for (int it = 0; it < 80; ++it) {
            Real mid = (lo + hi) / 2;
            if (pi_value() / 2 * sinh(mid) > target) hi = mid;
            else lo = mid;
        }
        return hi;
    }
};

} // namespace hv
