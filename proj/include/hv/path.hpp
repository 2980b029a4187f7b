#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "hv/scalar.hpp"

namespace hv {

// Pieces of a path in a complex parameter plane. Loops are full circles
// traversed once from their landing angle; orientation +1 is anticlockwise.
struct Segment {
    Complex start, end;
};
struct Arc {
    Complex center;
    Real radius;
    Real start_angle;
    Real sweep; // signed; end angle = start_angle + sweep
};
struct Loop {
    Complex center;
    Real radius;
    Real base_angle;
    int orientation = +1;
};

using PathPiece = std::variant<Segment, Arc, Loop>;

inline Complex piece_start(const PathPiece& p) {
    if (auto* s = std::get_if<Segment>(&p)) return s->start;
    if (auto* a = std::get_if<Arc>(&p))
        return a->center + Complex(a->radius * cos(a->start_angle), a->radius * sin(a->start_angle));
    auto& l = std::get<Loop>(p);
    return l.center + Complex(l.radius * cos(l.base_angle), l.radius * sin(l.base_angle));
}

inline Complex piece_end(const PathPiece& p) {
    if (auto* s = std::get_if<Segment>(&p)) return s->end;
    if (auto* a = std::get_if<Arc>(&p)) {
        Real th = a->start_angle + a->sweep;
        return a->center + Complex(a->radius * cos(th), a->radius * sin(th));
    }
    return piece_start(p); // loops close
}

inline Complex piece_point(const PathPiece& p, const Real& t) {
    if (auto* s = std::get_if<Segment>(&p)) return s->start + (s->end - s->start) * Complex(t);
    if (auto* a = std::get_if<Arc>(&p)) {
        Real th = a->start_angle + t * a->sweep;
        return a->center + Complex(a->radius * cos(th), a->radius * sin(th));
    }
    auto& l = std::get<Loop>(p);
    Real th = l.base_angle + t * 2 * pi_value() * l.orientation;
    return l.center + Complex(l.radius * cos(th), l.radius * sin(th));
}

// d(point)/dt, for quadrature substitution.
inline Complex piece_velocity(const PathPiece& p, const Real& t) {
    if (auto* s = std::get_if<Segment>(&p)) return s->end - s->start;
    if (auto* a = std::get_if<Arc>(&p)) {
        Real th = a->start_angle + t * a->sweep;
        return Complex(0, 1) * Complex(a->sweep) * Complex(a->radius * cos(th), a->radius * sin(th));
    }
    auto& l = std::get<Loop>(p);
    Real sweep = 2 * pi_value() * l.orientation;
    Real th = l.base_angle + t * sweep;
    return Complex(0, 1) * Complex(sweep) * Complex(l.radius * cos(th), l.radius * sin(th));
}

inline PathPiece piece_reversed(const PathPiece& p) {
    if (auto* s = std::get_if<Segment>(&p)) return Segment{s->end, s->start};
    if (auto* a = std::get_if<Arc>(&p)) return Arc{a->center, a->radius, a->start_angle + a->sweep, -a->sweep};
    auto& l = std::get<Loop>(p);
    return Loop{l.center, l.radius, l.base_angle, -l.orientation};
}

// Continuous change of arg(point - s) along a piece. Pieces are assumed not
// to pass through s; arcs are processed in small sweeps so every chord turn
// stays below pi.
inline Real piece_delta_arg(const PathPiece& p, const Complex& s) {
    auto chord_turn = [&](const Complex& a, const Complex& b) { return arg((b - s) / (a - s)); };
    if (auto* seg = std::get_if<Segment>(&p)) return chord_turn(seg->start, seg->end);
    Real total(0);
    Complex center;
    Real sweep;
    if (auto* a = std::get_if<Arc>(&p)) {
        center = a->center;
        sweep = a->sweep;
        if (center == s) return sweep;
    } else {
        auto& l = std::get<Loop>(p);
        center = l.center;
        sweep = 2 * pi_value() * l.orientation;
        if (center == s) return sweep;
        return Real(0); // full circle around a point outside it
    }
    int chunks = 1 + static_cast<int>((abs(sweep) / (pi_value() / 8)).convert_to<long>());
    Complex prev = piece_point(p, Real(0));
    for (int k = 1; k <= chunks; ++k) {
        Complex cur = piece_point(p, Real(k) / chunks);
        total += chord_turn(prev, cur);
        prev = cur;
    }
    return total;
}

// Minimum distance from a piece to a point (sampled; construction guarantees
// clearance, this is the enforcement check).
inline Real piece_distance(const PathPiece& p, const Complex& s, int samples = 96) {
    if (auto* seg = std::get_if<Segment>(&p)) {
        // exact point-segment distance
        Complex d = seg->end - seg->start;
        Real len2 = abs2(d);
        if (len2 == 0) return abs(seg->start - s);
        Real t = ((s - seg->start).real() * d.real() + (s - seg->start).imag() * d.imag()) / len2;
        if (t < 0) t = Real(0);
        if (t > 1) t = Real(1);
        return abs(seg->start + d * Complex(t) - s);
    }
    Complex center;
    Real radius;
    if (auto* a = std::get_if<Arc>(&p)) { center = a->center; radius = a->radius; }
    else { auto& l = std::get<Loop>(p); center = l.center; radius = l.radius; }
    Real dc = abs(s - center);
    if (std::get_if<Loop>(&p)) return abs(dc - radius); // full circle
    Real best(-1);
    for (int k = 0; k <= samples; ++k) {
        Real d = abs(piece_point(p, Real(k) / samples) - s);
        if (best < 0 || d < best) best = d;
    }
    return best;
}

// Piecewise path with endpoint chaining.
struct PlanePath {
    std::vector<PathPiece> pieces;

    bool empty() const { return pieces.empty(); }
    Complex start() const {
        if (empty()) throw path_error("empty path has no start");
        return piece_start(pieces.front());
    }
    Complex end() const {
        if (empty()) throw path_error("empty path has no end");
        return piece_end(pieces.back());
    }

    void check_chained(const Real& tol) const {
        for (std::size_t k = 0; k + 1 < pieces.size(); ++k)
            if (abs(piece_end(pieces[k]) - piece_start(pieces[k + 1])) > tol)
                throw path_error("consecutive path pieces do not share endpoints");
    }

    PlanePath reversed() const {
        PlanePath r;
        for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) r.pieces.push_back(piece_reversed(*it));
        return r;
    }
};

inline PlanePath compose(const std::vector<PlanePath>& paths, const Real& tol) {
    PlanePath out;
    for (auto& p : paths) {
        if (p.empty()) continue;
        if (!out.empty() && abs(out.end() - p.start()) > tol)
            throw path_error("compose: endpoint mismatch between consecutive paths");
        out.pieces.insert(out.pieces.end(), p.pieces.begin(), p.pieces.end());
    }
    return out;
}

// Obstacle geometry shared by every operator participating in a run: all
// singular locations with their exclusion radii (1/8 of the nearest gap).
struct Obstacles {
    std::vector<Complex> points;
    std::vector<Real> exclusion;

    static Obstacles from_points(const std::vector<Complex>& pts) {
        Obstacles g;
        g.points = pts;
        g.exclusion.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Real gap(-1);
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if (i == j) continue;
                Real d = abs(pts[i] - pts[j]);
                if (gap < 0 || d < gap) gap = d;
            }
            if (gap < 0) gap = Real(1);
            g.exclusion[i] = gap / 8;
        }
        return g;
    }

    std::size_t nearest(const Complex& x) const {
        std::size_t best = 0;
        Real bd = abs(x - points[0]);
        for (std::size_t i = 1; i < points.size(); ++i) {
            Real d = abs(x - points[i]);
            if (d < bd) { bd = d; best = i; }
        }
        return best;
    }

    std::optional<std::size_t> locate(const Complex& x, const Real& tol) const {
        for (std::size_t i = 0; i < points.size(); ++i)
            if (abs(x - points[i]) <= tol) return i;
        return std::nullopt;
    }

    // Enforce exclusion radii; a loop may sit exactly on its own circle.
    void check_path(const PlanePath& path) const {
        Real slack = Real(1) - pow(Real(10), -9);
        for (auto& piece : path.pieces) {
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (auto* l = std::get_if<Loop>(&piece)) {
                    if (abs(l->center - points[i]) <= exclusion[i] / 2) continue; // its own center
                }
                Real d = piece_distance(piece, points[i]);
                if (d < exclusion[i] * slack)
                    throw path_error("path passes within the exclusion radius of a singular point");
            }
        }
    }
};

// Straight route from `from` toward `to`, stopping at distance stop_radius
// before `to`, detouring around blocking obstacles on circular arcs.
// side: +1 detours through the upper half plane (for the real configurations
// in scope), -1 through the lower; 0 picks the side with more clearance.
inline PlanePath route_avoiding(const Complex& from, const Complex& to, const Real& stop_radius,
                                const Obstacles& obs, std::optional<std::size_t> target_idx,
                                int side) {
    PlanePath path;
    Complex dir = to - from;
    Real len = abs(dir);
    if (len == 0) throw path_error("route with coincident endpoints");
    Complex u = dir / Complex(len);
    Complex stop = to - u * Complex(stop_radius);
    Real span = abs(stop - from);
    if (span == 0) return path;

    struct Block {
        Real t_in, t_out;
        std::size_t idx;
        Real radius;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < obs.points.size(); ++i) {
        if (target_idx && *target_idx == i) continue;
        const Complex& q = obs.points[i];
        Real detour_r = 2 * obs.exclusion[i];
        // perpendicular distance of q from the infinite line
        Complex rel = (q - from) / u;
        Real along = rel.real(), perp = abs(rel.imag());
        if (perp >= detour_r) continue;
        if (along <= -detour_r || along >= span + detour_r) continue;
        Real half = sqrt(detour_r * detour_r - rel.imag() * rel.imag());
        Real t_in = along - half, t_out = along + half;
        if (t_out <= 0 || t_in >= span) continue;
        if (t_in < 0 || t_out > span)
            throw path_error("route endpoint lies inside a detour disk");
        blocks.push_back({t_in, t_out, i, detour_r});
    }
    std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.t_in < b.t_in; });
    for (std::size_t k = 0; k + 1 < blocks.size(); ++k)
        if (blocks[k].t_out > blocks[k + 1].t_in)
            throw path_error("overlapping detour arcs; configuration too degenerate to route");

    Real cursor(0);
    for (auto& b : blocks) {
        Complex e1 = from + u * Complex(b.t_in);
        Complex e2 = from + u * Complex(b.t_out);
        if (b.t_in > cursor) path.pieces.push_back(Segment{from + u * Complex(cursor), e1});
        const Complex& q = obs.points[b.idx];
        Real a1 = arg(e1 - q), a2 = arg(e2 - q);
        Real two_pi = 2 * pi_value();
        Real ccw = a2 - a1; // normalize to (0, 2 pi)
        while (ccw <= 0) ccw += two_pi;
        while (ccw > two_pi) ccw -= two_pi;
        Real cw = ccw - two_pi;
        auto arc_for = [&](const Real& sweep) { return Arc{q, b.radius, a1, sweep}; };
        Real chosen = ccw;
        if (side > 0 || side < 0) {
            // midpoint of the candidate arc decides the half plane
            auto mid_im = [&](const Real& sweep) {
                Real th = a1 + sweep / 2;
                return (q + Complex(b.radius * cos(th), b.radius * sin(th))).imag();
            };
            bool ccw_upper = mid_im(ccw) >= q.imag();
            chosen = (side > 0) == ccw_upper ? ccw : cw;
        } else {
            // pick the sweep whose arc keeps more distance from other obstacles
            auto clearance = [&](const Real& sweep) {
                Arc a = arc_for(sweep);
                Real best(-1);
                for (std::size_t i = 0; i < obs.points.size(); ++i) {
                    if (i == b.idx) continue;
                    Real d = piece_distance(PathPiece(a), obs.points[i], 32) / obs.exclusion[i];
                    if (best < 0 || d < best) best = d;
                }
                return best;
            };
            chosen = clearance(ccw) >= clearance(cw) ? ccw : cw;
        }
        path.pieces.push_back(arc_for(chosen));
        cursor = b.t_out;
    }
    if (cursor < span) path.pieces.push_back(Segment{from + u * Complex(cursor), stop});
    return path;
}

// Standard based loop: route from the basepoint to the target's circle,
// traverse it once, return along the reversed route.
inline PlanePath standard_loop(const Complex& basepoint, std::size_t target,
                               const Obstacles& obs, int orientation, int side) {
    const Complex& s = obs.points[target];
    Real rho = obs.exclusion[target];
    PlanePath approach = route_avoiding(basepoint, s, rho, obs, target, side);
    Complex landing = approach.empty() ? basepoint : approach.end();
    Real base_angle = arg(landing - s);
    PlanePath path = approach;
    path.pieces.push_back(Loop{s, rho, base_angle, orientation});
    PlanePath back = approach.reversed();
    path.pieces.insert(path.pieces.end(), back.pieces.begin(), back.pieces.end());
    path.check_chained(pow(Real(10), -static_cast<int>(Real::default_precision() / 2)));
    return path;
}

} // namespace hv
