#pragma once

#include <memory>

#include "hv/hv_elliptic.hpp"
#include "hv/transport.hpp"

namespace hv {

// One elliptic period system: operator at a fixed phi, its singular locus,
// the lambda=0 Frobenius ladder (f0, f0 log + f1) and the change of basis
// onto the conjecturally integral pair omega = U . ladder.
struct EllipticSystem {
    Complex phi;
    std::optional<Rational> phi_exact;
    std::vector<EllipticPoint> singular;
    OperatorContext opc;
    Matrix<Complex> basis_change; // U

    static EllipticSystem make(const Complex& phi, const std::optional<Rational>& phi_exact) {
        EllipticSystem s;
        s.phi = phi;
        s.phi_exact = phi_exact;
        if (phi_exact)
            s.opc.op = to_complex(elliptic_operator<Rational>(*phi_exact));
        else
            s.opc.op = elliptic_operator<Complex>(phi);
        s.singular = elliptic_singular_points(phi, phi_exact);
        for (auto& p : s.singular) s.opc.own_singular.push_back(p.location);
        s.opc.id = "hv-elliptic@" + (phi_exact ? rational_to_string(*phi_exact) : phi.str(24));
        s.basis_change = integral_basis_change(phi);
        return s;
    }
};

// Basepoint convention: real positive, half the distance from 0 to the
// nearest other singular location.
inline Complex standard_basepoint(const std::vector<Complex>& singular) {
    Real best(-1);
    for (auto& s : singular) {
        if (s == Complex(0)) continue;
        Real d = abs(s);
        if (best < 0 || d < best) best = d;
    }
    if (best < 0) throw math_error("no singular points away from 0");
    return Complex(best / 2, Real(0));
}

struct MonodromyEntry {
    std::string name;
    Complex location;
    Matrix<Complex> mu;       // in the integral basis
    Real integer_distance;    // max entry distance to the nearest integer
    Real det_deviation;       // |det - 1|
    Matrix<Rational> rounded; // nearest integer matrix
};

inline MonodromyEntry classify_integral(std::string name, const Complex& loc, const Matrix<Complex>& mu) {
    MonodromyEntry e;
    e.name = std::move(name);
    e.location = loc;
    e.mu = mu;
    e.integer_distance = Real(0);
    Matrix<Rational> r(mu.rows, mu.cols);
    for (std::size_t k = 0; k < mu.a.size(); ++k) {
        e.integer_distance = std::max(e.integer_distance, integer_distance(mu.a[k]));
        r.a[k] = Rational(nearest_integer(mu.a[k].real()));
    }
    e.rounded = std::move(r);
    e.det_deviation = abs(mu.det() - Complex(1));
    return e;
}

// Single-system runner: transports the lambda=0 ladder around each finite
// singularity and reports the monodromy in the integral basis.
class EllipticRunner {
public:
    EllipticRunner(EllipticSystem sys, const PrecisionContext& ctx)
        : sys_(std::move(sys)),
          obstacles_(Obstacles::from_points(sys_.opc.own_singular)),
          tr_(std::make_unique<Transporter>(sys_.opc, obstacles_, ctx)) {
        basepoint_ = standard_basepoint(sys_.opc.own_singular);
        zero_frame_ = tr_->frame_at(Complex(0));
    }

    const EllipticSystem& system() const { return sys_; }
    Transporter& transporter() { return *tr_; }
    const Complex& basepoint() const { return basepoint_; }
    FramePtr zero_frame() const { return zero_frame_; }

    // monodromy of the raw (f0, f0 log + f1) ladder
    Matrix<Complex> ladder_monodromy(std::size_t singular_index, int orientation = +1, int side = +1) {
        return hv::monodromy(*tr_, zero_frame_, basepoint_, singular_index, orientation, side);
    }

    // monodromy of omega = U . ladder
    Matrix<Complex> integral_monodromy(std::size_t singular_index, int orientation = +1, int side = +1) {
        auto m = ladder_monodromy(singular_index, orientation, side);
        return sys_.basis_change * m * sys_.basis_change.inverse();
    }

    std::vector<MonodromyEntry> conjecture_check(int side = +1) {
        std::vector<MonodromyEntry> out;
        for (std::size_t i = 0; i < sys_.singular.size(); ++i)
            out.push_back(classify_integral(sys_.singular[i].name, sys_.singular[i].location,
                                            integral_monodromy(i, +1, side)));
        return out;
    }

private:
    EllipticSystem sys_;
    Obstacles obstacles_;
    std::unique_ptr<Transporter> tr_;
    Complex basepoint_;
    FramePtr zero_frame_;
};

// The lambda=0 Frobenius ladder tagged with the change of basis onto the
// conjecturally integral period pair.
struct IntegralEllipticBasis {
    Matrix<Complex> change_of_basis; // omega = U . (f0, f0 log + f1)
    Complex phi;
    Real phi_branch; // arg(phi) used for log(phi)
};

struct TaggedPeriodBasis {
    FrobeniusBasis<Complex> basis;
    IntegralEllipticBasis tag;
};

inline TaggedPeriodBasis integral_period_basis(const Complex& phi,
                                               const std::optional<Rational>& phi_exact,
                                               const PrecisionContext& ctx) {
    auto sys = EllipticSystem::make(phi, phi_exact);
    TaggedPeriodBasis out;
    out.basis = frobenius_basis(sys.opc.op, Complex(0), ctx);
    out.tag = {sys.basis_change, phi, arg(phi)};
    return out;
}

inline std::vector<MonodromyEntry> sl2z_conjecture_check(const Complex& phi,
                                                         const std::optional<Rational>& phi_exact,
                                                         const PrecisionContext& ctx) {
    EllipticRunner runner(EllipticSystem::make(phi, phi_exact), ctx);
    return runner.conjecture_check();
}

// The tensor pair omega(lambda,1) (x) omega(lambda,phi): two operators over
// the union of their singular sets.
class EllipticPair {
public:
    EllipticPair(const Complex& phi, const std::optional<Rational>& phi_exact,
                 const PrecisionContext& ctx)
        : one_(EllipticSystem::make(Complex(1), Rational(1))),
          two_(EllipticSystem::make(phi, phi_exact)) {
        std::vector<Complex> all = one_.opc.own_singular;
        Real tol = pow(Real(10), -static_cast<int>(ctx.working_digits / 2));
        for (auto& s : two_.opc.own_singular) {
            bool dup = false;
            for (auto& t : all)
                if (abs(s - t) <= tol) dup = true;
            if (!dup) all.push_back(s);
        }
        obstacles_ = Obstacles::from_points(all);
        tr1_ = std::make_unique<Transporter>(one_.opc, obstacles_, ctx);
        tr2_ = std::make_unique<Transporter>(two_.opc, obstacles_, ctx);
        basepoint_ = standard_basepoint(all);
        frame1_ = tr1_->frame_at(Complex(0));
        frame2_ = tr2_->frame_at(Complex(0));
    }

    const Obstacles& obstacles() const { return obstacles_; }
    const Complex& basepoint() const { return basepoint_; }
    const EllipticSystem& system_one() const { return one_; }
    const EllipticSystem& system_two() const { return two_; }
    Transporter& transporter_one() { return *tr1_; }
    Transporter& transporter_two() { return *tr2_; }
    FramePtr frame_one() const { return frame1_; }
    FramePtr frame_two() const { return frame2_; }

    // integral-basis monodromy factors (mu1, mu2) around one obstacle
    std::pair<Matrix<Complex>, Matrix<Complex>> factor_monodromies(std::size_t obstacle,
                                                                   int orientation = +1,
                                                                   int side = +1) {
        auto m1 = hv::monodromy(*tr1_, frame1_, basepoint_, obstacle, orientation, side);
        auto m2 = hv::monodromy(*tr2_, frame2_, basepoint_, obstacle, orientation, side);
        return {one_.basis_change * m1 * one_.basis_change.inverse(),
                two_.basis_change * m2 * two_.basis_change.inverse()};
    }

    Matrix<Complex> tensor_monodromy(std::size_t obstacle, int orientation = +1, int side = +1) {
        auto [m1, m2] = factor_monodromies(obstacle, orientation, side);
        return kronecker(m1, m2);
    }

private:
    EllipticSystem one_, two_;
    Obstacles obstacles_;
    std::unique_ptr<Transporter> tr1_, tr2_;
    Complex basepoint_;
    FramePtr frame1_, frame2_;
};

} // namespace hv
