#pragma once

#include "hv/contours.hpp"
#include "hv/operator_io.hpp"

namespace hv {

// AESZ 34: the fourth-order operator in varphi governing the one-parameter
// threefold family, together with the integral symplectic basis Pi built on
// the MUM-point Frobenius ladder.

// theta^4 - phi (35 theta^4 + 70 theta^3 + 63 theta^2 + 28 theta + 5)
//         + phi^2 (theta+1)^2 (259 theta^2 + 518 theta + 285)
//         - 225 phi^3 (theta+1)^2 (theta+2)^2
inline FuchsianOperator<Rational> aesz34_operator_raw() {
    auto theta_poly = [](std::initializer_list<long> v) {
        std::vector<Rational> c;
        for (long x : v) c.push_back(Rational(x));
        return RationalPoly(std::move(c));
    };
    RationalPoly t1 = theta_poly({0, 1});  // theta
    RationalPoly term1 = t1 * t1 * t1 * t1;
    RationalPoly term2 = theta_poly({5, 28, 63, 70, 35});
    RationalPoly plus1 = theta_poly({1, 1});
    RationalPoly plus2 = theta_poly({2, 1});
    RationalPoly term3 = plus1 * plus1 * theta_poly({285, 518, 259});
    RationalPoly term4 = plus1 * plus1 * plus2 * plus2 * Rational(225);
    // collect phi-degree d contributions of each theta-polynomial
    std::vector<RationalPoly> by_theta(5); // index = theta power, value = poly in phi
    auto add = [&](const RationalPoly& theta_part, unsigned phi_deg, const Rational& scale) {
        for (std::size_t k = 0; k < theta_part.c.size(); ++k) {
            if (by_theta[k].c.size() <= phi_deg) by_theta[k].c.resize(phi_deg + 1, Rational(0));
            by_theta[k].c[phi_deg] += scale * theta_part.c[k];
        }
    };
    add(term1, 0, Rational(1));
    add(term2, 1, Rational(-1));
    add(term3, 2, Rational(1));
    add(term4, 3, Rational(-1));
    FuchsianOperator<Rational> op;
    op.name = "AESZ34";
    op.variable = "varphi";
    op.order = 4;
    op.shift = Rational(0);
    for (auto& p : by_theta) {
        p.trim();
        op.coeffs.push_back(p);
    }
    op.validate();
    return op;
}

// MUM normalization: substituting solution -> phi * solution turns
// sum p_i theta^i into sum p_i (theta - 1)^i, with indices (1,1,1,1) at 0.
inline FuchsianOperator<Rational> mum_normalized(FuchsianOperator<Rational> op) {
    op.shift = op.shift - 1;
    op.name += "-mum";
    return op;
}

// Loads the operator asset and validates it: order 4, indices (0,0,0,0) raw
// and (1,1,1,1) after normalization, singular set {0, 1/25, 1/9, 1}, and a
// degree-one holomorphic solution seed.
inline FuchsianOperator<Rational> load_aesz34(const std::string& path) {
    FuchsianOperator<Rational> raw = load_operator_file(path);
    if (raw.order != 4) throw config_error("aesz34: operator order must be 4");
    if (raw.shift != 0) throw config_error("aesz34: raw operator must have shift 0");
    auto raw_idx = indicial_exponents(raw, Rational(0));
    if (raw_idx != std::vector<Rational>{0, 0, 0, 0})
        throw config_error("aesz34: raw indices at 0 must be (0,0,0,0)");
    // singular set from the leading coefficient
    for (Rational s : {Rational(1, 25), Rational(1, 9), Rational(1)})
        if (raw.leading().eval(s) != 0)
            throw config_error("aesz34: singular set must contain 1/25, 1/9 and 1");
    auto op = mum_normalized(raw);
    auto idx = indicial_exponents(op, Rational(0));
    if (idx != std::vector<Rational>{1, 1, 1, 1})
        throw config_error("aesz34: normalized indices at 0 must be (1,1,1,1)");
    return op;
}

struct TopologicalData {
    long h3 = 12;
    long c2h = 12;
    long chi = -8;
    long sigma = 0; // H^3 mod 2
    Complex zeta3;

    static TopologicalData standard() {
        TopologicalData t;
        t.zeta3 = make_complex(zeta3_value());
        return t;
    }

    // Apery-accelerated series, exact rational partial sums.
    static Real zeta3_value() {
        unsigned digits = Real::default_precision();
        Rational sum(0);
        Integer binom(2); // C(2n,n) at n=1
        Real floor = pow(Real(10), -static_cast<int>(digits) - 10);
        for (unsigned n = 1;; ++n) {
            if (n > 1) {
                // C(2n,n) = C(2n-2,n-1) * (2n-1) * 2 / n
                binom = binom * (2 * static_cast<long>(n) - 1) * 2 / static_cast<long>(n);
            }
            Rational term(1, Integer(static_cast<long>(n)) * n * n * binom);
            if (n % 2 == 0) term = -term;
            sum += term;
            if (abs(make_real(term)) < floor) break;
            if (n > 8 * digits) throw precision_error("zeta(3) series failed to converge");
        }
        return make_real(sum) * Real(5) / 2;
    }
};

// Pi(phi) = (2 pi i)^3 M_top diag(1, (2пi)^-1, (2 pi i)^-2, (2 pi i)^-3) varpi(phi)
inline Matrix<Complex> pi_prefactor(const TopologicalData& topo) {
    Complex tpi = two_pi_i();
    Complex tpi3 = tpi * tpi * tpi;
    Matrix<Complex> m_top(4, 4);
    m_top(0, 0) = Complex(topo.chi) * topo.zeta3 / tpi3;
    m_top(0, 1) = make_complex(Rational(topo.c2h, 24));
    m_top(0, 2) = Complex(0);
    m_top(0, 3) = make_complex(Rational(topo.h3, 6));
    m_top(1, 0) = make_complex(Rational(topo.c2h, 24));
    m_top(1, 1) = make_complex(Rational(topo.sigma, 2));
    m_top(1, 2) = make_complex(Rational(-topo.h3, 2));
    m_top(1, 3) = Complex(0);
    m_top(2, 0) = Complex(1);
    m_top(3, 1) = Complex(1);
    Matrix<Complex> diag(4, 4);
    Complex w(1);
    for (unsigned j = 0; j < 4; ++j) {
        diag(j, j) = w;
        w = w / tpi;
    }
    return (m_top * diag) * tpi3;
}

// The threefold period system: MUM ladder varpi at phi=0 and the prefactor.
class ThreefoldSystem {
public:
    ThreefoldSystem(FuchsianOperator<Rational> op, const PrecisionContext& ctx)
        : ctx_(ctx), topo_(TopologicalData::standard()), prefactor_(pi_prefactor(topo_)) {
        opc_.op = to_complex(op);
        opc_.id = op.name;
        for (Rational s : {Rational(0), Rational(1, 25), Rational(1, 9), Rational(1)})
            opc_.own_singular.push_back(make_complex(s));
        obstacles_ = Obstacles::from_points(opc_.own_singular);
        tr_ = std::make_unique<Transporter>(opc_, obstacles_, ctx_);
        mum_frame_ = tr_->frame_at(Complex(0));
        validate_mum();
        basepoint_ = standard_basepoint(opc_.own_singular);
    }

    static ThreefoldSystem standard(const PrecisionContext& ctx) {
        return ThreefoldSystem(mum_normalized(aesz34_operator_raw()), ctx);
    }

    const TopologicalData& topological() const { return topo_; }
    const Matrix<Complex>& prefactor() const { return prefactor_; }
    Transporter& transporter() { return *tr_; }
    FramePtr mum_frame() const { return mum_frame_; }
    const Complex& basepoint() const { return basepoint_; }
    const Obstacles& obstacles() const { return obstacles_; }
    const PrecisionContext& context() const { return ctx_; }

    // varpi(phi) inside the MUM disk, log phi on the principal branch
    std::vector<Complex> varpi(const Complex& phi) const {
        Real limit = abs(make_complex(Rational(1, 25))) / 2;
        if (abs(phi) > limit)
            throw config_error("varpi evaluation outside the certified MUM disk");
        return evaluate_values(mum_frame_->basis, phi, arg(phi));
    }

    std::vector<Complex> pi_vector(const Complex& phi) const {
        return times_col(prefactor_, varpi(phi));
    }

    // monodromy of Pi around one singular location, standard loop;
    // orientation +1 realizes log(phi) -> log(phi) + 2 pi i at phi = 0
    Matrix<Complex> monodromy_pi(const Rational& around, int orientation = +1, int side = +1) {
        auto idx = obstacles_.locate(make_complex(around), tr_->tiny());
        if (!idx) throw config_error("not a singular point of the threefold operator");
        auto m = hv::monodromy(*tr_, mum_frame_, basepoint_, *idx, orientation, side);
        return prefactor_ * m * prefactor_.inverse();
    }

    // The published conifold matrices follow the opposite continuation
    // convention; this is the loop realizing e.g. (1,0,5,1)^T = M (1,0,-5,1)^T
    // at varphi = 1/25.
    Matrix<Complex> published_monodromy(const Rational& around, int side = +1) {
        return monodromy_pi(around, -1, side);
    }

    // closed-form MUM monodromy in the varpi ladder: binomial log shift
    Matrix<Complex> mum_monodromy_closed_form(int orientation = +1) const {
        Complex tpi = two_pi_i() * Real(orientation);
        Matrix<Complex> n(4, 4);
        auto binom = [](unsigned a, unsigned b) {
            long r = 1;
            for (unsigned j = 1; j <= b; ++j) r = r * (a - b + j) / j;
            return r;
        };
        for (unsigned j = 0; j < 4; ++j)
            for (unsigned k = 0; k <= j; ++k)
                n(j, k) = Complex(binom(j, k)) * pow(tpi, j - k);
        return n;
    }

private:
    void validate_mum() {
        const auto& basis = mum_frame_->basis;
        if (basis.size() != 4 || basis.rho != 1)
            throw config_error("aesz34: MUM ladder must have indices (1,1,1,1)");
        // varpi_0 = phi + O(phi^2): degree-one holomorphic seed
        if (!(abs(basis.sols[0].levels[0].coeff(0) - Complex(1)) < tr_->tiny()))
            throw config_error("aesz34: holomorphic solution must start at phi");
        // binomial ladder structure: top series of every solution is F_0
        for (unsigned j = 1; j < 4; ++j)
            if (basis.sols[j].depth() != j + 1)
                throw config_error("aesz34: MUM ladder has wrong log depths");
    }

    PrecisionContext ctx_;
    TopologicalData topo_;
    Matrix<Complex> prefactor_;
    OperatorContext opc_;
    Obstacles obstacles_;
    std::unique_ptr<Transporter> tr_;
    FramePtr mum_frame_;
    Complex basepoint_;
};

// Independent oracle for the holomorphic period: the closed composite
// contour evaluated on the elliptic side, paired with (0,1) (x) (0,1);
// the result equals -(2 pi i)^3 varpi_0(phi) = -Pi_3(phi) on the threefold
// side, so the oracle returns the negated contour value.
inline QuadratureResult holomorphic_period_oracle(EllipticPair& pair, const PrecisionContext& ctx,
                                                  int side = +1) {
    auto spec = make_t3_contour(pair, side);
    auto pairing = pairing_row({0, 1}, {0, 1});
    auto r = integrate_paired(pair, spec, pairing, ctx);
    r.value = -r.value;
    return r;
}

} // namespace hv
