#pragma once
// Cones about geodesic rays and their shadows on the boundary sphere.
//
// A shadow is stored as a Hermitian form H = [[A, B], [conj B, D]] with
// interior { (u:v) : A|u|^2 + 2 Re(B conj(u) v) + D|v|^2 < 0 }.  Disks,
// half-planes and disk complements are then the same kind of object, and an
// isometry M acts by H -> (M^-1)^* H M^-1.

#include "moebius.hpp"

namespace pleat {

struct OrientedCircle {
    double A = 1.0;
    cplx B = 0.0;
    double D = -1.0;

    double form(BoundaryPoint const& x) const {
        cplx u = x.u(), v = x.v();
        double s = 1.0 / (std::norm(u) + std::norm(v));
        return s * (A * std::norm(u) + 2.0 * (B * std::conj(u) * v).real() + D * std::norm(v));
    }
    bool contains(BoundaryPoint const& x) const { return form(x) < 0.0; }

    // True when the region is a bounded disk; then center/radius are meaningful.
    bool is_disk() const { return A > 1e-14 * scale(); }
    cplx center() const { return -B / A; }
    double radius() const {
        double r2 = std::norm(B) / (A * A) - D / A;
        return r2 > 0.0 ? std::sqrt(r2) : 0.0;
    }

    double scale() const { return std::max({std::abs(A), std::abs(B), std::abs(D)}); }

    OrientedCircle rescaled() const {
        double s = scale();
        return {A / s, B / s, D / s};
    }

    // Image of the region under M.
    OrientedCircle transformed(MoebiusMap const& M) const {
        // N = M^-1 = [[d, -b], [-c, a]];  H' = N^* H N.
        cplx n11 = M.d(), n12 = -M.b(), n21 = -M.c(), n22 = M.a();
        cplx Bc = std::conj(B);
        // H N
        cplx h11 = A * n11 + B * n21, h12 = A * n12 + B * n22;
        cplx h21 = Bc * n11 + D * n21, h22 = Bc * n12 + D * n22;
        double A2 = (std::conj(n11) * h11 + std::conj(n21) * h21).real();
        cplx B2 = std::conj(n11) * h12 + std::conj(n21) * h22;
        double D2 = (std::conj(n12) * h12 + std::conj(n22) * h22).real();
        return OrientedCircle{A2, B2, D2}.rescaled();
    }
};

inline OrientedCircle disk(cplx center, double radius) {
    return OrientedCircle{1.0, -center, std::norm(center) - radius * radius}.rescaled();
}

inline OrientedCircle cone_shadow(Cone const& c) {
    // In the frame vertex -> j, axis -> 0 the shadow is |w| < tan(theta/2).
    double h = c.half_angle() / 2.0;
    OrientedCircle base{std::cos(h) * std::cos(h), 0.0, -std::sin(h) * std::sin(h)};
    MoebiusMap N = normalize_frame(c.vertex(), c.toward());
    return base.transformed(N.inverse());
}

struct NestingResult {
    bool nested = false;
    // 1 - |c| - r for the inner shadow drawn in the frame where the outer
    // shadow is the unit disk; -1 when the inner shadow is not a disk there.
    double margin = -1.0;
};

inline constexpr double nesting_tolerance = 1e-10;

// Is the closure of the inner shadow inside the open outer shadow?
inline NestingResult shadow_nested(Cone const& outer, Cone const& inner) {
    MoebiusMap N = normalize_frame(outer.vertex(), outer.toward());
    double r = std::tan(outer.half_angle() / 2.0);
    MoebiusMap S(1.0, 0.0, 0.0, r);  // w -> w / r
    OrientedCircle h = cone_shadow(inner).transformed(S * N);
    if (!h.is_disk()) return {false, -1.0};
    double margin = 1.0 - std::abs(h.center()) - h.radius();
    return {margin > nesting_tolerance, margin};
}

inline HPoint3 ray_point_at(Ray const& r, double d) {
    if (!(d >= 0.0)) throw GeometryError("ray_point_at: distance must be nonnegative");
    MoebiusMap N = normalize_frame(r.origin, r.toward);
    return poincare_extend(N.inverse(), HPoint3({0.0, 0.0}, std::exp(-d)));
}

inline double dist_point_geodesic(HPoint3 const& p, Geodesic const& g) {
    HPoint3 q = poincare_extend(axis_frame(g), p);
    return std::asinh(std::abs(q.Z()) / q.ht());
}

}  // namespace pleat
