#pragma once
// Upper half-space model H^3 = { z + t j : z in C, t > 0 } and its boundary sphere.
//
// The hyperbolic plane H^2 is the vertical slice { x + t j : x real }; its
// boundary is the extended real line.  Everything here is a plain value type.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pleat {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Raised when an input violates a documented precondition (bad geometry,
// degenerate configuration).  The CLI maps it to exit code 2.
struct GeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when floating point arithmetic produced something that the exact
// mathematics rules out (e.g. a non-positive image height).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Representative of an angle in (-pi, pi].
inline double reduce_angle(double a) {
    double r = std::remainder(a, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

//---------------------------------------------------------------------------//
// Points
//---------------------------------------------------------------------------//

class HPoint3 {
  public:
    HPoint3(cplx z, double t) : z_(z), t_(t) {
        if (!(t > 0.0) || !std::isfinite(t) || !std::isfinite(z.real()) ||
            !std::isfinite(z.imag()))
            throw GeometryError("HPoint3 requires finite z and height t > 0");
    }
    // Point of the hyperbolic plane slice.
    static HPoint3 plane(double x, double t) { return {cplx(x, 0.0), t}; }
    static HPoint3 j() { return {cplx(0.0, 0.0), 1.0}; }

    cplx Z() const { return z_; }
    double ht() const { return t_; }

    friend bool operator==(HPoint3 const&, HPoint3 const&) = default;

  private:
    cplx z_;
    double t_;
};

// A point of the Riemann sphere as a projective pair (u : v).
class BoundaryPoint {
  public:
    BoundaryPoint(cplx u, cplx v) : u_(u), v_(v) {
        if (u == cplx(0) && v == cplx(0))
            throw GeometryError("BoundaryPoint (0:0) is not a point");
    }
    BoundaryPoint(cplx z) : BoundaryPoint(z, cplx(1.0)) {}  // NOLINT: implicit by design
    BoundaryPoint(double x) : BoundaryPoint(cplx(x), cplx(1.0)) {}  // NOLINT
    static BoundaryPoint infinity() { return {cplx(1.0), cplx(0.0)}; }

    cplx u() const { return u_; }
    cplx v() const { return v_; }

    bool is_infinite() const { return v_ == cplx(0.0); }

    // Affine value u/v; infinite values come back as +inf.
    cplx value() const {
        if (is_infinite()) return {HUGE_VAL, 0.0};
        return u_ / v_;
    }

    // Chart choice: the larger-magnitude coordinate is the denominator.
    // Returns (w, at_infinity): w = u/v near 0, or w = v/u near infinity.
    std::pair<cplx, bool> chart() const {
        if (std::abs(v_) >= std::abs(u_)) return {u_ / v_, false};
        return {v_ / u_, true};
    }

    // True when the point lies on the extended real line (boundary of H^2).
    bool is_real(double tol = 1e-12) const {
        double scale = std::norm(u_) + std::norm(v_);
        return std::abs((u_ * std::conj(v_)).imag()) <= tol * scale;
    }

    // Representative (x : y) with real coordinates; requires is_real().
    std::pair<double, double> real_pair() const {
        auto [w, inf] = chart();
        if (inf) return {1.0, w.real()};
        return {w.real(), 1.0};
    }

  private:
    cplx u_;
    cplx v_;
};

// Chordal distance on the sphere of diameter 2; bounded and chart free.
inline double chordal_distance(BoundaryPoint const& a, BoundaryPoint const& b) {
    double num = std::abs(a.u() * b.v() - b.u() * a.v());
    double den = std::sqrt((std::norm(a.u()) + std::norm(a.v())) *
                           (std::norm(b.u()) + std::norm(b.v())));
    return 2.0 * num / den;
}

inline bool same_point(BoundaryPoint const& a, BoundaryPoint const& b,
                       double tol = 1e-12) {
    return chordal_distance(a, b) <= tol;
}

class Geodesic {
  public:
    Geodesic(BoundaryPoint from, BoundaryPoint to) : from_(from), to_(to) {
        if (same_point(from_, to_, 1e-14))
            throw GeometryError("geodesic endpoints coincide");
    }
    BoundaryPoint const& from() const { return from_; }
    BoundaryPoint const& to() const { return to_; }
    Geodesic reversed() const { return {to_, from_}; }
    bool is_planar(double tol = 1e-12) const {
        return from_.is_real(tol) && to_.is_real(tol);
    }

  private:
    BoundaryPoint from_;
    BoundaryPoint to_;
};

// Components along (Re z, Im z, t).
struct Vec3 {
    double x = 0, y = 0, t = 0;

    double norm() const { return std::sqrt(x * x + y * y + t * t); }
    Vec3 operator*(double s) const { return {x * s, y * s, t * s}; }
    Vec3 operator+(Vec3 const& o) const { return {x + o.x, y + o.y, t + o.t}; }
    Vec3 operator-(Vec3 const& o) const { return {x - o.x, y - o.y, t - o.t}; }
    cplx horizontal() const { return {x, y}; }
};

inline double dot(Vec3 const& a, Vec3 const& b) {
    return a.x * b.x + a.y * b.y + a.t * b.t;
}
inline Vec3 cross(Vec3 const& a, Vec3 const& b) {
    return {a.y * b.t - a.t * b.y, a.t * b.x - a.x * b.t, a.x * b.y - a.y * b.x};
}

// Angle in [0, pi] between two nonzero vectors (atan2 form).
inline double angle_between(Vec3 const& a, Vec3 const& b) {
    return std::atan2(cross(a, b).norm(), dot(a, b));
}

class UnitTangent {
  public:
    UnitTangent(HPoint3 base, Vec3 dir) : base_(base) {
        double n = dir.norm();
        if (!(n > 0.0) || !std::isfinite(n))
            throw GeometryError("tangent direction must be a nonzero vector");
        dir_ = dir * (1.0 / n);
    }
    HPoint3 const& base() const { return base_; }
    Vec3 const& direction() const { return dir_; }

  private:
    HPoint3 base_;
    Vec3 dir_;
};

// A geodesic ray, given by its origin and its ideal endpoint.
struct Ray {
    HPoint3 origin;
    BoundaryPoint toward;
};

class Cone {
  public:
    Cone(HPoint3 vertex, BoundaryPoint toward, double half_angle)
        : vertex_(vertex), toward_(toward), half_angle_(half_angle) {
        if (!(half_angle > 0.0 && half_angle < pi))
            throw GeometryError("cone half-angle must lie in (0, pi)");
    }
    HPoint3 const& vertex() const { return vertex_; }
    BoundaryPoint const& toward() const { return toward_; }
    double half_angle() const { return half_angle_; }

  private:
    HPoint3 vertex_;
    BoundaryPoint toward_;
    double half_angle_;
};

//---------------------------------------------------------------------------//
// Metric operations that need no isometries
//---------------------------------------------------------------------------//

inline double hyp_dist(HPoint3 const& p, HPoint3 const& q) {
    double dz = std::abs(p.Z() - q.Z());
    double dt = p.ht() - q.ht();
    double chord = std::hypot(dz, dt);
    return 2.0 * std::asinh(chord / (2.0 * std::sqrt(p.ht() * q.ht())));
}

// The (unnormalized) heterogeneous distance on the unit tangent bundle:
// max of height difference, horizontal displacement and the angle between
// the Euclidean parallel translates of the directions.
inline double tangent_distance(UnitTangent const& a, UnitTangent const& b) {
    double dh = std::abs(a.base().ht() - b.base().ht());
    double dz = std::abs(a.base().Z() - b.base().Z());
    double ang = angle_between(a.direction(), b.direction());
    return std::max({dh, dz, ang});
}

// Unit direction at q of the geodesic ray ending at xi.
inline Vec3 direction_toward(HPoint3 const& q, BoundaryPoint const& xi) {
    if (xi.is_infinite()) return {0.0, 0.0, 1.0};
    // Work with the affine representative scaled so |(u,v)| ~ 1.
    cplx u = xi.u(), v = xi.v();
    double s = 1.0 / std::sqrt(std::norm(u) + std::norm(v));
    u *= s;
    v *= s;
    cplx w = u - q.Z() * v;  // (xi - z) v
    double t = q.ht();
    cplx h = 2.0 * t * w * std::conj(v);
    double vert = std::norm(w) - t * t * std::norm(v);
    Vec3 d{h.real(), h.imag(), vert};
    double n = d.norm();
    if (!(n > 0.0)) throw NumericalError("direction_toward: degenerate direction");
    return d * (1.0 / n);
}

// Ideal endpoint of the geodesic ray determined by a unit tangent.
inline BoundaryPoint ideal_endpoint(UnitTangent const& u) {
    Vec3 const& d = u.direction();
    cplx z0 = u.base().Z();
    double t0 = u.base().ht();
    double hs = std::hypot(d.x, d.y);
    if (hs <= 1e-15 * std::abs(d.t)) {
        if (d.t > 0) return BoundaryPoint::infinity();
        return BoundaryPoint(z0);
    }
    cplx hhat = cplx(d.x, d.y) / hs;
    // The geodesic is a semicircle in the vertical plane through z0 along hhat;
    // its forward endpoint sits at horizontal offset c + R from z0.
    double c = t0 * d.t / hs;
    double R = std::hypot(c, t0);
    double off = (c >= 0.0) ? c + R : t0 * t0 / (R - c);
    return BoundaryPoint(z0 + off * hhat);
}

// Direction at p of the geodesic through p and q, pointing toward q.
inline Vec3 direction_through(HPoint3 const& p, HPoint3 const& q) {
    cplx dz = q.Z() - p.Z();
    double r = std::abs(dz);
    if (r == 0.0 && q.ht() == p.ht())
        throw GeometryError("direction_through: coincident points");
    cplx hhat = (r > 0.0) ? dz / r : cplx(1.0, 0.0);
    // Planar picture: p -> i, q -> x' + i y' after the similarity
    // w -> (w - p)/t_p; the Cayley map sends i to the disk center, where
    // geodesics are diameters.  The tangent angle at i is arg K(q') + pi/2.
    cplx qp(r / p.ht(), q.ht() / p.ht());
    cplx K = (qp - cplx(0, 1)) / (qp + cplx(0, 1));
    double psi = std::arg(K) + pi / 2.0;
    double cx = std::cos(psi), st = std::sin(psi);
    return {cx * hhat.real(), cx * hhat.imag(), st};
}

// Ideal endpoint of the geodesic ray from p through q.
inline BoundaryPoint ray_through(HPoint3 const& p, HPoint3 const& q) {
    return ideal_endpoint(UnitTangent(p, direction_through(p, q)));
}

// Complete geodesic through two distinct points, oriented from p to q.
inline Geodesic geodesic_through(HPoint3 const& p, HPoint3 const& q) {
    return {ray_through(q, p), ray_through(p, q)};
}

}  // namespace pleat
