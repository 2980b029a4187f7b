#pragma once

#include "hv/periods.hpp"
#include "hv/quadrature.hpp"

namespace hv {

// A realized integration contour in the lambda plane. Open chains may start
// or end at singular points (vanishing-cycle contours); closed contours are
// compositions of standard based loops.
struct ContourSpec {
    std::string name;
    bool closed = false;
    PlanePath path;
    std::optional<std::size_t> start_obstacle;
    std::optional<std::size_t> end_obstacle;
};

// Pairing row for a decomposable class G = g1 (x) g2:  (g1^T S2) (x) (g2^T S2).
inline std::vector<Complex> pairing_row(const std::vector<long>& g1, const std::vector<long>& g2) {
    if (g1.size() != 2 || g2.size() != 2) throw config_error("pairing_row expects integer 2-vectors");
    auto s2 = sigma_matrix<Complex>(2);
    std::vector<Complex> a = row_times(std::vector<Complex>{Complex(g1[0]), Complex(g1[1])}, s2);
    std::vector<Complex> b = row_times(std::vector<Complex>{Complex(g2[0]), Complex(g2[1])}, s2);
    std::vector<Complex> out(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[2 * i + j] = a[i] * b[j];
    return out;
}

inline std::vector<Complex> pairing_row(const std::vector<long>& g) {
    if (g.size() != 4) throw config_error("pairing_row expects a 4-vector");
    std::vector<Complex> gv{Complex(g[0]), Complex(g[1]), Complex(g[2]), Complex(g[3])};
    auto s2 = sigma_matrix<Complex>(2);
    return row_times(gv, kronecker(s2, s2));
}

// Resolve the pair-level singularity names used by contour files.
inline std::size_t resolve_obstacle(const EllipticPair& pair, const std::string& name) {
    const Real tol = pow(Real(10), -static_cast<int>(Real::default_precision() / 2));
    auto find_location = [&](const Complex& loc) {
        auto idx = pair.obstacles().locate(loc, tol);
        if (!idx) throw config_error("singularity '" + name + "' is not an obstacle of this run");
        return *idx;
    };
    for (auto& p : pair.system_two().singular)
        if (p.name == name) return find_location(p.location);
    const std::string prefix = "lambda=";
    if (name.rfind(prefix, 0) == 0) {
        std::string val = name.substr(prefix.size());
        try {
            return find_location(make_complex(parse_rational(val)));
        } catch (const config_error&) {
            // fall through to the error below
        }
    }
    throw config_error("unknown singularity name '" + name + "'");
}

// Open chain between two singular locations, detouring interior blockers.
inline ContourSpec vanishing_contour(const EllipticPair& pair, const std::string& name,
                                     std::size_t from_obstacle, std::size_t to_obstacle, int side) {
    const auto& obs = pair.obstacles();
    ContourSpec spec;
    spec.name = name;
    spec.closed = false;
    spec.start_obstacle = from_obstacle;
    spec.end_obstacle = to_obstacle;
    const Complex& a = obs.points[from_obstacle];
    const Complex& b = obs.points[to_obstacle];
    Obstacles blockers = obs;
    // endpoints may be touched; exclude them from blocking
    blockers.exclusion[from_obstacle] = Real(0);
    blockers.exclusion[to_obstacle] = Real(0);
    spec.path = route_avoiding(a, b, Real(0), blockers, to_obstacle, side);
    return spec;
}

inline ContourSpec make_vanishing_1_9(const EllipticPair& pair, int side = +1) {
    return vanishing_contour(pair, "vanishing-1-9", resolve_obstacle(pair, "lambda=varphi"),
                             resolve_obstacle(pair, "lambda=1/9"), side);
}

inline ContourSpec make_vanishing_1_25(const EllipticPair& pair, int side = +1) {
    return vanishing_contour(pair, "vanishing-1-25",
                             resolve_obstacle(pair, "lambda=varphi/(1-2sqrt(varphi))^2"),
                             resolve_obstacle(pair, "lambda=1/9"), side);
}

// The closed composite contour: anticlockwise loops around 0, then
// varphi/(1+2 sqrt varphi)^2, then varphi, then varphi/(1-2 sqrt varphi)^2.
inline ContourSpec make_t3_contour(const EllipticPair& pair, int side = +1) {
    ContourSpec spec;
    spec.name = "t3-holomorphic";
    spec.closed = true;
    std::vector<std::string> order{"lambda=0", "lambda=varphi/(1+2sqrt(varphi))^2", "lambda=varphi",
                                   "lambda=varphi/(1-2sqrt(varphi))^2"};
    std::vector<PlanePath> loops;
    for (auto& nm : order)
        loops.push_back(standard_loop(pair.basepoint(), resolve_obstacle(pair, nm),
                                      pair.obstacles(), +1, side));
    spec.path = compose(loops, pow(Real(10), -static_cast<int>(Real::default_precision() / 2)));
    return spec;
}

inline ContourSpec builtin_contour(const EllipticPair& pair, const std::string& name, int side = +1) {
    if (name == "vanishing-1-9") return make_vanishing_1_9(pair, side);
    if (name == "vanishing-1-25") return make_vanishing_1_25(pair, side);
    if (name == "t3-holomorphic") return make_t3_contour(pair, side);
    throw config_error("unknown built-in contour '" + name + "'");
}

// Product of two local solutions as a log-series (levels add, exponents add).
inline std::vector<Series<Complex>> logseries_product(const LogSeries<Complex>& a,
                                                      const LogSeries<Complex>& b) {
    std::vector<Series<Complex>> out(a.depth() + b.depth() - 1,
                                     Series<Complex>(a.center, a.order()));
    for (unsigned i = 0; i < a.depth(); ++i)
        for (unsigned j = 0; j < b.depth(); ++j) {
            if (a.levels[i].is_zero() || b.levels[j].is_zero()) continue;
            out[i + j] += a.levels[i] * b.levels[j];
        }
    return out;
}

// Evaluates and integrates the paired tensor germ
//   h(lambda) = row . (omega(lambda,1) (x) omega(lambda,phi))
// along contours; the row argument is already folded with the
// integral-basis changes.
class TensorField {
public:
    TensorField(EllipticPair& pair, std::vector<Complex> folded_row, const PrecisionContext& ctx)
        : pair_(pair), row_(std::move(folded_row)), ctx_(ctx),
          w1_(pair.transporter_one()), w2_(pair.transporter_two()) {}

    static std::vector<Complex> fold(const EllipticPair& pair, const std::vector<Complex>& pairing) {
        return row_times(pairing, kronecker(pair.system_one().basis_change,
                                            pair.system_two().basis_change));
    }

    // germ value at the walkers' current position
    Complex value_here() const {
        auto v1 = germ_values(w1_);
        auto v2 = germ_values(w2_);
        return contract(v1, v2);
    }

    QuadratureResult integrate(const ContourSpec& spec) {
        seed(spec);
        QuadratureResult total;
        total.digits = ctx_.working_digits;
        for (std::size_t k = 0; k < spec.path.pieces.size(); ++k) {
            const auto& piece = spec.path.pieces[k];
            bool first = k == 0, last = k + 1 == spec.path.pieces.size();
            if (std::holds_alternative<Loop>(piece)) {
                total += integrate_circle(std::get<Loop>(piece));
                w1_.walk(piece);
                w2_.walk(piece);
            } else {
                total += integrate_open_piece(piece,
                                              first ? spec.start_obstacle : std::nullopt,
                                              last ? spec.end_obstacle : std::nullopt);
            }
        }
        if (spec.closed) {
            Real drift = row_deviation_from_start();
            if (drift > sqrt(ctx_.target_tolerance))
                throw math_error("closed contour is not branch-consistent for this pairing");
        }
        return total;
    }

    // true iff the pairing row is invariant under the contour's total monodromy
    bool invariance_check(const ContourSpec& spec) {
        if (!spec.closed) throw config_error("invariance_check requires a closed contour");
        TensorField probe(pair_, row_, ctx_);
        probe.seed_closed();
        for (auto& piece : spec.path.pieces) {
            probe.w1_.walk(piece);
            probe.w2_.walk(piece);
        }
        return probe.row_deviation_from_start() <= sqrt(ctx_.target_tolerance);
    }

private:
    void seed_closed() {
        w1_.start(pair_.frame_one(), pair_.basepoint());
        w2_.start(pair_.frame_two(), pair_.basepoint());
    }

    void seed(const ContourSpec& spec) {
        seed_closed();
        if (spec.closed) {
            if (abs(spec.path.start() - pair_.basepoint()) > pair_.transporter_one().tiny())
                throw path_error("closed contours must be based at the standard basepoint");
            cursor_ = Real(0);
            return;
        }
        if (!spec.start_obstacle) {
            // regular start: transport to the first point of the chain
            if (abs(spec.path.start() - pair_.basepoint()) > pair_.transporter_one().tiny()) {
                auto route = route_avoiding(pair_.basepoint(), spec.path.start(), Real(0),
                                            pair_.obstacles(), std::nullopt, +1);
                w1_.walk(route);
                w2_.walk(route);
            }
            cursor_ = Real(0);
            return;
        }
        // singular start: transport to a point on the first piece at a safe
        // distance from the endpoint, then adopt the local frames there
        std::size_t s0 = *spec.start_obstacle;
        const Complex& s = pair_.obstacles().points[s0];
        const auto& first = spec.path.pieces.front();
        Real excl = pair_.obstacles().exclusion[s0];
        Real t1 = param_at_distance(first, s, excl * Real(5) / 2);
        Complex x1 = piece_point(first, t1);
        auto route = route_avoiding(pair_.basepoint(), x1, Real(0), pair_.obstacles(), std::nullopt, +1);
        w1_.walk(route);
        w2_.walk(route);
        w1_.enter_center_frame(s);
        w2_.enter_center_frame(s);
        cursor_ = t1;
    }

    // smallest parameter with |piece(t) - s| >= d (piece leaves the endpoint)
    static Real param_at_distance(const PathPiece& piece, const Complex& s, const Real& d) {
        Real lo(0), hi(1);
        if (abs(piece_point(piece, hi) - s) <= d)
            throw path_error("contour piece too short for its endpoint clearance");
        for (int it = 0; it < 200; ++it) {
            Real mid = (lo + hi) / 2;
            if (abs(piece_point(piece, mid) - s) < d) lo = mid;
            else hi = mid;
        }
        return hi;
    }

    std::vector<Complex> germ_values(const Walker& w) const {
        const Frame& f = *w.frame();
        Real branch(0);
        if (f.obstacle) branch = w.arg_at(*f.obstacle);
        auto vals = evaluate_values(f.basis, w.position(), branch);
        return row_times_matrix_left(vals, w.accumulated());
    }

    // A * F as a value vector: (A * vals)
    static std::vector<Complex> row_times_matrix_left(const std::vector<Complex>& vals,
                                                      const Matrix<Complex>& A) {
        return times_col(A, vals);
    }

    Complex contract(const std::vector<Complex>& v1, const std::vector<Complex>& v2) const {
        Complex acc(0);
        for (std::size_t i = 0; i < v1.size(); ++i)
            for (std::size_t j = 0; j < v2.size(); ++j)
                acc += row_[i * v2.size() + j] * v1[i] * v2[j];
        return acc;
    }

    static PathPiece sub_for_args(const PathPiece& piece, const Real& t0, const Real& t1) {
        if (auto* a = std::get_if<Arc>(&piece))
            return Arc{a->center, a->radius, a->start_angle + t0 * a->sweep, (t1 - t0) * a->sweep};
        return Segment{piece_point(piece, t0), piece_point(piece, t1)};
    }

    // in-place germ value behind the snapshot cursor, inside the start frames
    Complex value_behind(const PathPiece& piece, const Real& t,
                         const Walker& s1, const Walker& s2, const Real& snap_t) const {
        PathPiece back = sub_for_args(piece, snap_t, t);
        Complex x = piece_point(piece, t);
        auto eval_one = [&](const Walker& w) {
            const Frame& f = *w.frame();
            Real branch(0);
            if (f.obstacle)
                branch = w.arg_at(*f.obstacle) + piece_delta_arg(back, f.basis.center);
            auto vals = evaluate_values(f.basis, x, branch);
            return times_col(w.accumulated(), vals);
        };
        auto v1 = eval_one(s1);
        auto v2 = eval_one(s2);
        return contract(v1, v2);
    }

    QuadratureResult integrate_open_piece(const PathPiece& piece,
                                          std::optional<std::size_t> start_obs,
                                          std::optional<std::size_t> end_obs) {
        const auto& obs = pair_.obstacles();
        Real cutoff = pow(Real(10), -static_cast<int>(ctx_.working_digits / 2));
        if (!start_obs) cursor_ = Real(0);
        // snapshots anchor every quadrature level at the piece start
        Walker snap1 = w1_, snap2 = w2_;
        Real snap_t = cursor_;
        auto f = [&](const Real& t) -> std::optional<Complex> {
            Complex x = piece_point(piece, t);
            if (start_obs && abs(x - obs.points[*start_obs]) < cutoff) return std::nullopt;
            if (end_obs && abs(x - obs.points[*end_obs]) < cutoff) return std::nullopt;
            if (t < snap_t)
                return value_behind(piece, t, snap1, snap2, snap_t) * piece_velocity(piece, t);
            if (t < cursor_) {
                // a new quadrature level restarted from small t
                w1_ = snap1;
                w2_ = snap2;
                cursor_ = snap_t;
            }
            if (t > cursor_) {
                PathPiece sub = sub_for_args(piece, cursor_, t);
                w1_.walk(sub);
                w2_.walk(sub);
                cursor_ = t;
            }
            if (end_obs) {
                const Complex& s1 = obs.points[*end_obs];
                if (abs(x - s1) < 2 * obs.exclusion[*end_obs] &&
                    abs(w1_.frame()->basis.center - s1) > pair_.transporter_one().tiny()) {
                    w1_.enter_center_frame(s1);
                    w2_.enter_center_frame(s1);
                }
            }
            return value_here() * piece_velocity(piece, t);
        };
        auto result = TanhSinh::integrate(f, ctx_);
        // leave the walkers positioned for the next piece
        if (end_obs) {
            w1_ = snap1;
            w2_ = snap2;
        } else if (cursor_ < 1) {
            PathPiece sub = sub_for_args(piece, cursor_, Real(1));
            w1_.walk(sub);
            w2_.walk(sub);
        }
        cursor_ = Real(0);
        return result;
    }

    QuadratureResult integrate_circle(const Loop& loop) {
        w1_.enter_center_frame(loop.center);
        w2_.enter_center_frame(loop.center);
        std::size_t obstacle = pair_.obstacles().nearest(loop.center);
        Real alpha0 = w1_.arg_at(obstacle);
        const auto& f1 = w1_.frame()->basis;
        const auto& f2 = w2_.frame()->basis;
        std::vector<Complex> w_eff =
            row_times(row_, kronecker(w1_.accumulated(), w2_.accumulated()));
        unsigned r1 = f1.size(), r2 = f2.size();
        // combined log-series: H_K(t) with exponent offset rho1 + rho2
        Rational rho_sum = f1.rho + f2.rho;
        unsigned len = ctx_.truncation_order;
        std::vector<Series<Complex>> H;
        for (unsigned i = 0; i < r1; ++i)
            for (unsigned j = 0; j < r2; ++j) {
                const Complex& c = w_eff[i * r2 + j];
                if (c == Complex(0)) continue;
                auto prod = logseries_product(f1.sols[i], f2.sols[j]);
                if (H.size() < prod.size()) H.resize(prod.size(), Series<Complex>(f1.center, len));
                for (std::size_t k = 0; k < prod.size(); ++k) H[k] += prod[k] * c;
            }
        // term integrals: integral of t^(rho_sum + n) log^K t dt over the circle
        Real rho = loop.radius;
        Real logr = log(rho);
        int sigma = loop.orientation;
        Complex beta0(logr, alpha0);
        Complex beta1(logr, alpha0 + 2 * pi_value() * sigma);
        if (denominator(rho_sum) != 1 || rho_sum < 0)
            throw math_error("circle integration requires nonnegative integer exponents");
        long m0 = numerator(rho_sum).convert_to<long>();
        QuadratureResult out;
        out.digits = ctx_.working_digits;
        Complex total(0);
        Real tail(0);
        for (std::size_t K = 0; K < H.size(); ++K) {
            if (K == 0) continue; // full-period integral of single-valued terms vanishes
            Complex rho_pow = pow(Complex(rho), static_cast<unsigned>(m0 + 1));
            for (std::size_t n = 0; n < H[K].c.size(); ++n) {
                const Complex& coeff = H[K].c[n];
                long c = m0 + static_cast<long>(n) + 1;
                if (!(coeff == Complex(0))) {
                    // J(c,K) built upward: J_k = e^(i c a0) (beta1^k - beta0^k)/(i c) - (k/c) J_{k-1}
                    Complex J(0);
                    Complex e_fac = exp(Complex(Real(0), Real(c) * alpha0));
                    Complex b0k(1), b1k(1);
                    for (unsigned k = 1; k <= K; ++k) {
                        b0k *= beta0;
                        b1k *= beta1;
                        J = e_fac * (b1k - b0k) / Complex(Real(0), Real(c)) -
                            (Complex(Real(k)) / Complex(Real(c))) * J;
                    }
                    total += coeff * Complex(Real(0), Real(1)) * rho_pow * J;
                }
                rho_pow *= Complex(rho);
            }
            tail += H[K].tail_estimate(rho) * pow(abs(beta1) + 1, static_cast<unsigned>(K));
        }
        out.value = total;
        out.node_count = static_cast<long>(len);
        out.error_estimate = tail * 2 * pi_value() * rho;
        return out;
    }

    Real row_deviation_from_start() {
        Matrix<Complex> m1 = w1_.express_in(*pair_.frame_one(), pair_.basepoint(),
                                            arg(pair_.basepoint() - pair_.frame_one()->basis.center));
        Matrix<Complex> m2 = w2_.express_in(*pair_.frame_two(), pair_.basepoint(),
                                            arg(pair_.basepoint() - pair_.frame_two()->basis.center));
        auto w_end = row_times(row_, kronecker(m1, m2));
        Real worst(0), scale(0);
        for (std::size_t k = 0; k < row_.size(); ++k) {
            worst = std::max(worst, Real(abs(w_end[k] - row_[k])));
            scale = std::max(scale, Real(abs(row_[k])));
        }
        return scale > 0 ? worst / scale : worst;
    }

    EllipticPair& pair_;
    std::vector<Complex> row_;
    PrecisionContext ctx_;
    Walker w1_, w2_;
    Real cursor_{0};
};

// Convenience: integrate a named or prepared contour against a pairing row
// (not yet folded with the basis changes).
inline QuadratureResult integrate_paired(EllipticPair& pair, const ContourSpec& spec,
                                         const std::vector<Complex>& pairing,
                                         const PrecisionContext& ctx) {
    TensorField field(pair, TensorField::fold(pair, pairing), ctx);
    return field.integrate(spec);
}

inline bool invariance_check(EllipticPair& pair, const ContourSpec& spec,
                             const std::vector<Complex>& pairing, const PrecisionContext& ctx) {
    TensorField field(pair, TensorField::fold(pair, pairing), ctx);
    return field.invariance_check(spec);
}

} // namespace hv
