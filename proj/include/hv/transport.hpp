#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "hv/fuchsian.hpp"
#include "hv/path.hpp"

namespace hv {

// One operator participating in a transport run: complex-coefficient view
// plus its own finite singular locations (a subset of the run's obstacles).
struct OperatorContext {
    FuchsianOperator<Complex> op;
    std::vector<Complex> own_singular;
    std::string id;
};

// A local solution frame: Frobenius basis at a center plus evaluation jets.
struct Frame {
    FrobeniusBasis<Complex> basis;
    BasisJets jets;
    bool singular_center = false;
    Real radius;                        // distance to the nearest own singularity
    std::optional<std::size_t> obstacle; // obstacle index of the center, if any

    bool has_logs() const {
        for (auto& s : basis.sols)
            if (s.depth() > 1) return true;
        return basis.rho != 0;
    }
};

using FramePtr = std::shared_ptr<const Frame>;

// Builds and caches frames of one operator over a shared obstacle set, and
// memoizes loop monodromies. Reads are concurrent; updates are locked.
class Transporter {
public:
    Transporter(OperatorContext opc, Obstacles obs, PrecisionContext ctx)
        : opc_(std::move(opc)), obs_(std::move(obs)), ctx_(std::move(ctx)) {}

    const Obstacles& obstacles() const { return obs_; }
    const OperatorContext& op() const { return opc_; }
    const PrecisionContext& context() const { return ctx_; }

    Real own_distance(const Complex& x) const {
        Real best(-1);
        for (auto& s : opc_.own_singular) {
            Real d = abs(x - s);
            if (best < 0 || d < best) best = d;
        }
        if (best < 0) throw math_error("operator without singular points");
        return best;
    }

    bool is_own_singular(const Complex& x, Real* dist_out = nullptr) const {
        Real tol = tiny();
        for (auto& s : opc_.own_singular)
            if (abs(x - s) <= tol) {
                if (dist_out) *dist_out = other_distance(s);
                return true;
            }
        return false;
    }

    FramePtr frame_at(const Complex& center) {
        std::string key = real_to_hex(center.real()) + "|" + real_to_hex(center.imag());
        {
            std::shared_lock lock(mutex_);
            auto it = frames_.find(key);
            if (it != frames_.end()) return it->second;
        }
        auto frame = std::make_shared<Frame>();
        Real dist;
        if (is_own_singular(center, &dist)) {
            frame->singular_center = true;
            frame->radius = dist;
        } else {
            frame->radius = own_distance(center);
        }
        frame->basis = frobenius_basis(opc_.op, center, ctx_);
        frame->jets = BasisJets(frame->basis);
        frame->obstacle = obs_.locate(center, tiny());
        std::unique_lock lock(mutex_);
        auto [it, inserted] = frames_.emplace(key, std::move(frame));
        return it->second;
    }

    // Memoized monodromy matrices keyed by an arbitrary path descriptor.
    std::optional<Matrix<Complex>> memo_lookup(const std::string& key) const {
        std::shared_lock lock(mutex_);
        auto it = memo_.find(key);
        if (it == memo_.end()) return std::nullopt;
        return it->second;
    }
    void memo_store(const std::string& key, const Matrix<Complex>& m) {
        std::unique_lock lock(mutex_);
        memo_.emplace(key, m);
    }
    std::map<std::string, Matrix<Complex>> memo_snapshot() const {
        std::shared_lock lock(mutex_);
        return memo_;
    }

    Real tiny() const { return pow(Real(10), -static_cast<int>(ctx_.working_digits / 2)); }

private:
    Real other_distance(const Complex& s) const {
        Real best(-1);
        Real tol = tiny();
        for (auto& t : opc_.own_singular) {
            Real d = abs(s - t);
            if (d <= tol) continue;
            if (best < 0 || d < best) best = d;
        }
        if (best < 0) best = Real(1);
        return best;
    }

    OperatorContext opc_;
    Obstacles obs_;
    PrecisionContext ctx_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, FramePtr> frames_;
    std::map<std::string, Matrix<Complex>> memo_;
};

// Germ-transporting walk along a path. Maintains germ_start = A * frame,
// the current position, and the continuously tracked arg of (pos - s) for
// every obstacle s (log branches).
class Walker {
public:
    Walker(Transporter& tr) : tr_(&tr) {}

    void start(FramePtr frame, const Complex& pos) {
        frame_ = std::move(frame);
        pos_ = pos;
        unsigned r = tr_->op().op.order;
        A_ = Matrix<Complex>::identity(r);
        args_.clear();
        for (auto& s : tr_->obstacles().points) args_.push_back(arg(pos - s));
        check_coverage(pos_);
    }

    const Matrix<Complex>& accumulated() const { return A_; }
    const FramePtr& frame() const { return frame_; }
    const Complex& position() const { return pos_; }
    Real arg_at(std::size_t obstacle) const { return args_[obstacle]; }

    // Jet of the current germ row at x: rows of (A * frame) evaluated with
    // all derivatives.
    Matrix<Complex> germ_jets(const Complex& x) const {
        return A_ * frame_jets(*frame_, x, frame_arg(x));
    }

    void walk(const PathPiece& piece) {
        if (abs(piece_start(piece) - pos_) > chain_tol())
            throw path_error("walk: piece does not start at the current position");
        if (std::holds_alternative<Loop>(piece)) {
            auto& loop = std::get<Loop>(piece);
            enter_center_frame(loop.center);
            apply_loop(loop.orientation);
            return;
        }
        walk_open(piece);
    }

    void walk(const PlanePath& path) {
        for (auto& piece : path.pieces) walk(piece);
    }

    // Express the transported germ in a target frame: germ_start = M * target.
    Matrix<Complex> express_in(const Frame& target, const Complex& x, const Real& target_arg) const {
        Matrix<Complex> here = germ_jets(x);
        Matrix<Complex> there = frame_jets(target, x, target_arg);
        return here * there.inverse();
    }

    // Switch the walker frame to the frame centered at `center` (the frame
    // construction decides Frobenius vs Taylor), matching at the current
    // position.
    void enter_center_frame(const Complex& center) {
        FramePtr target = tr_->frame_at(center);
        if (same_frame(*target)) return;
        Real target_arg(0);
        if (target->obstacle) target_arg = args_[*target->obstacle];
        Matrix<Complex> here = frame_jets(*frame_, pos_, frame_arg(pos_));
        Matrix<Complex> there = frame_jets(*target, pos_, target_arg);
        A_ = A_ * (here * there.inverse());
        frame_ = std::move(target);
    }

    // Apply one full circle around the current (center) frame. Continuation
    // is carried entirely by the branch arg: evaluating the frame on the
    // shifted branch is the exact local monodromy.
    void apply_loop(int orientation) {
        if (!frame_->obstacle)
            throw path_error("loop around a point that is not a tracked obstacle");
        args_[*frame_->obstacle] += 2 * pi_value() * orientation;
    }

private:
    bool same_frame(const Frame& f) const {
        return frame_ && abs(frame_->basis.center - f.basis.center) <= tr_->tiny();
    }

    Real chain_tol() const { return tr_->tiny(); }

    Real frame_arg(const Complex& x) const {
        if (!frame_->obstacle) return Real(0);
        // args_ tracks pos_; x is expected to equal pos_ at call sites
        (void)x;
        return args_[*frame_->obstacle];
    }

    Matrix<Complex> frame_jets(const Frame& f, const Complex& x, const Real& branch_arg) const {
        unsigned r = f.basis.size();
        Complex t = x - f.basis.center;
        if (!f.has_logs() && abs(t) == 0) {
            Matrix<Complex> d(r, r);
            Real fact(1);
            for (unsigned i = 0; i < r; ++i) {
                if (i > 0) fact *= i;
                d(i, i) = Complex(fact);
            }
            return d;
        }
        Real tail_tol = tr_->context().target_tolerance;
        try {
            return evaluate_jets(f.basis, f.jets, x, branch_arg, &tail_tol);
        } catch (const precision_error&) {
            throw precision_error("transport: truncation tail above tolerance near " +
                                  f.basis.center.str(8) + "; increase the series order");
        }
    }

    void check_coverage(const Complex& x) const {
        if (abs(x - frame_->basis.center) > frame_->radius / 2 * (1 + pow(Real(10), -9)))
            throw path_error("walker position outside the certified disk of its frame");
    }

    void advance_args(const PathPiece& sub) {
        for (std::size_t i = 0; i < args_.size(); ++i)
            args_[i] += piece_delta_arg(sub, tr_->obstacles().points[i]);
    }

    void hop_to(const Complex& center) {
        enter_center_frame(center);
    }

    void walk_open(const PathPiece& piece) {
        Real t(0);
        bool just_hopped = false;
        while (t < 1) {
            Real r_eff = frame_->radius / 2;
            Real t_next = advance_param(piece, t, r_eff);
            if (t_next <= t) {
                // stuck at the coverage boundary: recenter here and retry
                if (just_hopped)
                    throw path_error("walker cannot advance; path too close to a singular point");
                hop_to(piece_point(piece, t));
                just_hopped = true;
                continue;
            }
            just_hopped = false;
            Complex nxt = piece_point(piece, t_next);
            PathPiece sub = sub_piece(piece, t, t_next);
            advance_args(sub);
            pos_ = nxt;
            if (t_next < 1) hop_to(nxt);
            t = t_next;
        }
    }

    // furthest parameter in [t, 1] such that the traversed chunk stays within
    // r_eff of the current frame center; returns t when no progress is possible
    Real advance_param(const PathPiece& piece, const Real& t, const Real& r_eff) const {
        const Complex& c = frame_->basis.center;
        if (auto* seg = std::get_if<Segment>(&piece)) {
            Complex d = seg->end - seg->start;
            if (abs(d) == 0) return Real(1);
            // |p(u) - c|^2 <= r_eff^2 is an interval in u; find its upper end
            Complex rel = seg->start - c;
            Real a = abs2(d);
            Real b = 2 * (rel.real() * d.real() + rel.imag() * d.imag());
            Real cc = abs2(rel) - r_eff * r_eff;
            Real disc = b * b - 4 * a * cc;
            if (disc <= 0) return t;
            Real hi = (-b + sqrt(disc)) / (2 * a);
            if (hi <= t) return t;
            return hi >= 1 ? Real(1) : hi;
        }
        // arcs: advance by small chords
        Real sweep;
        Real radius;
        if (auto* a = std::get_if<Arc>(&piece)) { sweep = abs(a->sweep); radius = a->radius; }
        else { sweep = 2 * pi_value(); radius = std::get<Loop>(piece).radius; }
        Real arc_len = radius * sweep;
        if (arc_len == 0) return Real(1);
        Real dt_cap = (r_eff / 5) / arc_len;
        if (dt_cap > Real(1) / 16) dt_cap = Real(1) / 16;
        Real u = t;
        while (u < 1) {
            Real v = u + dt_cap;
            if (v > 1) v = Real(1);
            if (abs(piece_point(piece, v) - c) > r_eff) return u;
            u = v;
        }
        return Real(1);
    }

    static PathPiece sub_piece(const PathPiece& piece, const Real& t0, const Real& t1) {
        if (std::holds_alternative<Segment>(piece))
            return Segment{piece_point(piece, t0), piece_point(piece, t1)};
        if (auto* a = std::get_if<Arc>(&piece))
            return Arc{a->center, a->radius, a->start_angle + t0 * a->sweep, (t1 - t0) * a->sweep};
        auto& l = std::get<Loop>(piece);
        Real sweep = 2 * pi_value() * l.orientation;
        return Arc{l.center, l.radius, l.base_angle + t0 * sweep, (t1 - t0) * sweep};
    }

    Transporter* tr_;
    FramePtr frame_;
    Complex pos_;
    Matrix<Complex> A_;
    std::vector<Real> args_;

    friend class FieldWalker;
};

// Transition matrix record: germ_start = matrix * (basis at the target).
struct TransitionMatrix {
    Matrix<Complex> matrix;
    std::string from_basis;
    std::string to_basis;
    PlanePath path;
    unsigned digits = 0;
    unsigned order = 0;
};

// Transport of a basis frame along a path; the result expresses the
// continued start germs in the frame at the path end.
inline TransitionMatrix transport(Transporter& tr, FramePtr start_frame, const PlanePath& path) {
    tr.obstacles().check_path(path);
    path.check_chained(tr.tiny());
    Walker w(tr);
    w.start(start_frame, path.start());
    w.walk(path);
    FramePtr end_frame = tr.frame_at(path.end());
    Real target_arg(0);
    if (end_frame->obstacle) target_arg = w.arg_at(*end_frame->obstacle);
    TransitionMatrix out;
    out.matrix = w.express_in(*end_frame, path.end(), target_arg);
    out.from_basis = "frame@" + start_frame->basis.center.str(8);
    out.to_basis = "frame@" + end_frame->basis.center.str(8);
    out.path = path;
    out.digits = tr.context().working_digits;
    out.order = tr.context().truncation_order;
    return out;
}

// Monodromy along a closed path, expressed in the start frame on its
// original branch: continued germs = matrix * original germs.
inline Matrix<Complex> monodromy_along(Transporter& tr, FramePtr start_frame, const PlanePath& path) {
    tr.obstacles().check_path(path);
    path.check_chained(tr.tiny());
    if (abs(path.start() - path.end()) > tr.tiny())
        throw path_error("monodromy requires a closed path");
    Walker w(tr);
    w.start(start_frame, path.start());
    Real initial_arg(0);
    if (start_frame->obstacle) initial_arg = w.arg_at(*start_frame->obstacle);
    w.walk(path);
    return w.express_in(*start_frame, path.end(), initial_arg);
}

// Standard anticlockwise monodromy around one singular obstacle.
inline Matrix<Complex> monodromy(Transporter& tr, FramePtr basis_frame, const Complex& basepoint,
                                 std::size_t target_obstacle, int orientation = +1, int side = +1) {
    std::string key = "mono|" + tr.op().id + "|" + std::to_string(target_obstacle) + "|" +
                      std::to_string(orientation) + "|" + std::to_string(side) + "|" +
                      real_to_hex(basepoint.real()) + "|" + real_to_hex(basepoint.imag());
    if (auto hit = tr.memo_lookup(key)) return *hit;
    PlanePath loop = standard_loop(basepoint, target_obstacle, tr.obstacles(), orientation, side);
    Matrix<Complex> m = monodromy_along(tr, basis_frame, loop);
    tr.memo_store(key, m);
    return m;
}

// True iff transporting along the two paths (same endpoints) agrees to tol.
inline bool homotopy_check(Transporter& tr, FramePtr start_frame,
                           const PlanePath& p1, const PlanePath& p2, const Real& tol) {
    if (abs(p1.start() - p2.start()) > tr.tiny() || abs(p1.end() - p2.end()) > tr.tiny())
        throw path_error("homotopy_check requires equal endpoints");
    auto t1 = transport(tr, start_frame, p1);
    auto t2 = transport(tr, start_frame, p2);
    Real worst(0);
    for (std::size_t k = 0; k < t1.matrix.a.size(); ++k)
        worst = std::max(worst, Real(abs(t1.matrix.a[k] - t2.matrix.a[k])));
    return worst <= tol;
}

} // namespace hv
