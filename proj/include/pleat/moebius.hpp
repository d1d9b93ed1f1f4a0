#pragma once
// PSL2(C) acting on the Riemann sphere and, by Poincare extension, on H^3.

#include <algorithm>
#include <array>

#include "halfspace.hpp"

namespace pleat {

class MoebiusMap {
  public:
    MoebiusMap() : a_(1), b_(0), c_(0), d_(1) {}

    // Any invertible matrix; it is scaled to determinant one and the sign is
    // fixed canonically (Re tr >= 0, ties broken by Im tr >= 0).
    MoebiusMap(cplx a, cplx b, cplx c, cplx d) : a_(a), b_(b), c_(c), d_(d) {
        normalize();
    }

    static MoebiusMap identity() { return {}; }

    cplx a() const { return a_; }
    cplx b() const { return b_; }
    cplx c() const { return c_; }
    cplx d() const { return d_; }
    cplx det() const { return a_ * d_ - b_ * c_; }
    cplx trace() const { return a_ + d_; }

    MoebiusMap inverse() const { return {d_, -b_, -c_, a_}; }

    friend MoebiusMap operator*(MoebiusMap const& A, MoebiusMap const& B) {
        return {A.a_ * B.a_ + A.b_ * B.c_, A.a_ * B.b_ + A.b_ * B.d_,
                A.c_ * B.a_ + A.d_ * B.c_, A.c_ * B.b_ + A.d_ * B.d_};
    }

    BoundaryPoint operator()(BoundaryPoint const& x) const {
        cplx u = a_ * x.u() + b_ * x.v();
        cplx v = c_ * x.u() + d_ * x.v();
        // Keep the pair at unit scale so long products never overflow.
        double s = std::sqrt(std::norm(u) + std::norm(v));
        return {u / s, v / s};
    }

    std::array<double, 8> entries() const {
        return {a_.real(), a_.imag(), b_.real(), b_.imag(),
                c_.real(), c_.imag(), d_.real(), d_.imag()};
    }

  private:
    void normalize() {
        cplx det = a_ * d_ - b_ * c_;
        double scale = std::max({std::abs(a_), std::abs(b_), std::abs(c_), std::abs(d_)});
        if (!(std::abs(det) > 1e-300) || !(std::abs(det) > 1e-28 * scale * scale) ||
            !std::isfinite(scale))
            throw GeometryError("Moebius matrix is singular or not finite");
        cplx s = std::sqrt(det);
        a_ /= s;
        b_ /= s;
        c_ /= s;
        d_ /= s;
        cplx tr = a_ + d_;
        if (tr.real() < 0.0 || (tr.real() == 0.0 && tr.imag() < 0.0)) {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
            d_ = -d_;
        }
    }

    cplx a_, b_, c_, d_;
};

inline MoebiusMap compose(MoebiusMap const& A, MoebiusMap const& B) { return A * B; }

inline BoundaryPoint act_boundary(MoebiusMap const& A, BoundaryPoint const& x) {
    return A(x);
}

// max{|a|+|b|, |c|+|d|}
inline double norm(MoebiusMap const& A) {
    return std::max(std::abs(A.a()) + std::abs(A.b()), std::abs(A.c()) + std::abs(A.d()));
}

namespace detail {
inline double norm_of_difference(MoebiusMap const& A, MoebiusMap const& B, double sign) {
    return std::max(std::abs(A.a() - sign * B.a()) + std::abs(A.b() - sign * B.b()),
                    std::abs(A.c() - sign * B.c()) + std::abs(A.d() - sign * B.d()));
}
}  // namespace detail

// ||A - B|| for the pair of representatives that are closest.
inline double projective_distance(MoebiusMap const& A, MoebiusMap const& B) {
    return std::min(detail::norm_of_difference(A, B, 1.0),
                    detail::norm_of_difference(A, B, -1.0));
}

// Largest entrywise modulus difference, again minimized over the sign.
inline double max_entry_difference(MoebiusMap const& A, MoebiusMap const& B) {
    auto diff = [&](double s) {
        return std::max({std::abs(A.a() - s * B.a()), std::abs(A.b() - s * B.b()),
                         std::abs(A.c() - s * B.c()), std::abs(A.d() - s * B.d())});
    };
    return std::min(diff(1.0), diff(-1.0));
}

inline double dist_id(MoebiusMap const& A) {
    return projective_distance(A, MoebiusMap::identity());
}

inline HPoint3 poincare_extend(MoebiusMap const& A, HPoint3 const& p) {
    cplx z = p.Z();
    double t = p.ht();
    cplx czd = A.c() * z + A.d();
    double den = std::norm(czd) + std::norm(A.c()) * t * t;
    cplx num = (A.a() * z + A.b()) * std::conj(czd) + A.a() * std::conj(A.c()) * t * t;
    double th = t / den;  // ad - bc = 1
    if (!(th > 0.0) || !std::isfinite(th))
        throw NumericalError("Poincare extension produced a non-positive height");
    return {num / den, th};
}

inline UnitTangent act_tangent(MoebiusMap const& A, UnitTangent const& u) {
    HPoint3 base = poincare_extend(A, u.base());
    BoundaryPoint xi = A(ideal_endpoint(u));
    return {base, direction_toward(base, xi)};
}

// Orientation-sensitive normal form: a map sending g.from() to 0 and
// g.to() to infinity.
inline MoebiusMap axis_frame(Geodesic const& g) {
    BoundaryPoint const& p = g.from();
    BoundaryPoint const& q = g.to();
    return {p.v(), -p.u(), q.v(), -q.u()};
}

// Rotation by phi about g; counterclockwise seen from g.from() looking at
// g.to().  In the axis frame it is z -> e^{i phi} z.
inline MoebiusMap rotation_about(Geodesic const& g, double phi) {
    double h = reduce_angle(phi) / 2.0;
    MoebiusMap M = axis_frame(g);
    MoebiusMap D(std::polar(1.0, h), 0.0, 0.0, std::polar(1.0, -h));
    return M.inverse() * D * M;
}

// Loxodromic map: translation by Re c from g.from() toward g.to(), combined
// with rotation by Im c; for real c it is the hyperbolic translation T_g^c.
inline MoebiusMap translation_along(Geodesic const& g, cplx c) {
    cplx h(c.real() / 2.0, reduce_angle(c.imag()) / 2.0);
    MoebiusMap M = axis_frame(g);
    MoebiusMap D(std::exp(h), 0.0, 0.0, std::exp(-h));
    return M.inverse() * D * M;
}

// Isometry sending p to j and the ideal point xi to 0; real on H^2 data.
inline MoebiusMap normalize_frame(HPoint3 const& p, BoundaryPoint const& xi) {
    cplx u = xi.u(), v = xi.v();
    double s = 1.0 / std::sqrt(std::norm(u) + std::norm(v));
    u *= s;
    v *= s;
    // A: xi -> infinity with determinant |u|^2 + |v|^2 > 0.
    MoebiusMap A(-std::conj(u), -std::conj(v), v, -u);
    HPoint3 q = poincare_extend(A, p);
    // Then w -> (w - Z)/t puts q at j, and w -> -1/w swaps infinity and 0.
    MoebiusMap B(1.0, -q.Z(), 0.0, q.ht());
    MoebiusMap C(0.0, -1.0, 1.0, 0.0);
    return C * B * A;
}

inline MoebiusMap normalize_frame(Ray const& r) { return normalize_frame(r.origin, r.toward); }

}  // namespace pleat
