#pragma once
// Geometry inside the hyperbolic plane slice { x + t j }: segments, which side
// of a geodesic a point lies on, and where geodesics cross segments and rays.
//
// Most routines move the configuration into a frame where the segment or ray
// runs down the vertical axis from j toward 0, where everything is explicit.

#include <optional>
#include <vector>

#include "cones.hpp"
#include "optimize.hpp"

namespace pleat {

inline bool is_planar(HPoint3 const& p, double tol = 1e-12) {
    return std::abs(p.Z().imag()) <= tol * (1.0 + std::abs(p.Z().real()));
}

struct Segment {
    HPoint3 a;
    HPoint3 b;

    double length() const { return hyp_dist(a, b); }
    Ray ray() const { return {a, ray_through(a, b)}; }
    // Frame sending a -> j and b -> e^{-length} j.
    MoebiusMap frame() const { return normalize_frame(a, ray_through(a, b)); }
    HPoint3 point_at(double s) const { return ray_point_at(ray(), s); }
    HPoint3 midpoint() const { return point_at(0.5 * length()); }
};

// Signed position of w relative to the oriented planar geodesic g:
// negative on the left, positive on the right, zero on g.  The value is the
// circle's Hermitian form, scaled to be chart independent.
inline double side_value(Geodesic const& g, double x, double y2, double w2) {
    // (x, y2, w2) encodes a point with u-coordinate products:
    // x = Re(u conj v), w2 = |u|^2, y2 = |v|^2 (boundary or interior alike).
    auto [up, vp] = g.from().real_pair();
    auto [uq, vq] = g.to().real_pair();
    double det = up * vq - vp * uq;
    double n = vp * vq * w2 - (vp * uq + up * vq) * x + up * uq * y2;
    double scale = std::hypot(up, vp) * std::hypot(uq, vq) * (w2 + y2);
    return (det > 0 ? 1.0 : -1.0) * n / scale;
}

inline double side_value(Geodesic const& g, HPoint3 const& w) {
    double x = w.Z().real();
    double t = w.ht();
    return side_value(g, x, 1.0, x * x + t * t);
}

inline double side_value(Geodesic const& g, BoundaryPoint const& xi) {
    auto [u, v] = xi.real_pair();
    return side_value(g, u * v, v * v, u * u);
}

inline bool on_left(Geodesic const& g, HPoint3 const& w) { return side_value(g, w) < 0.0; }

// Crossing of a planar geodesic with a segment.
struct SegmentHit {
    double s;       // arclength from the segment start
    HPoint3 point;  // crossing point
    double angle;   // from the segment direction to the geodesic direction, in (0, pi)
};

namespace detail {
// Height at which the geodesic (p', q') crosses the positive vertical axis,
// if it does; p', q' are real boundary points in the axis frame.
inline std::optional<double> axis_crossing_height(BoundaryPoint const& p, BoundaryPoint const& q) {
    auto [up, vp] = p.real_pair();
    auto [uq, vq] = q.real_pair();
    if (vp == 0.0 || vq == 0.0) return std::nullopt;  // vertical leaf: parallel or equal
    double pq = (up / vp) * (uq / vq);
    if (!(pq < 0.0)) return std::nullopt;
    return std::sqrt(-pq);
}
}  // namespace detail

inline std::optional<SegmentHit> cross_segment(Geodesic const& g, Segment const& seg) {
    MoebiusMap N = seg.frame();
    BoundaryPoint p = N(g.from()), q = N(g.to());
    auto h = detail::axis_crossing_height(p, q);
    double L = seg.length();
    if (!h || !(*h < 1.0) || !(*h > std::exp(-L))) return std::nullopt;
    double s = -std::log(*h);
    double pv = p.real_pair().first / p.real_pair().second;
    double qv = q.real_pair().first / q.real_pair().second;
    double c = 0.5 * (pv + qv);
    double sgn = pv < qv ? 1.0 : -1.0;
    double angle = std::atan2(*h, -sgn * c);
    return SegmentHit{s, seg.point_at(s), angle};
}

// Crossing of a segment with a geodesic ray; the parameter is the distance
// from the ray origin.
struct RayHit {
    double s;
    HPoint3 point;
    bool through_endpoint;  // the ray passes through a segment endpoint
};

inline std::optional<RayHit> cross_ray(Ray const& r, Segment const& seg) {
    MoebiusMap N = normalize_frame(r);
    HPoint3 w1 = poincare_extend(N, seg.a), w2 = poincare_extend(N, seg.b);
    double x1 = w1.Z().real(), y1 = w1.ht();
    double x2 = w2.Z().real(), y2 = w2.ht();
    double h;
    bool endpoint = false;
    if (x1 == 0.0 || x2 == 0.0) {
        endpoint = true;
        h = (x1 == 0.0) ? y1 : y2;
    } else if ((x1 < 0.0) != (x2 < 0.0)) {
        double c = (x2 * x2 + y2 * y2 - x1 * x1 - y1 * y1) / (2.0 * (x2 - x1));
        double h2 = x1 * x1 + y1 * y1 - 2.0 * x1 * c;
        if (!(h2 > 0.0)) return std::nullopt;
        h = std::sqrt(h2);
    } else {
        return std::nullopt;
    }
    if (!(h <= 1.0)) return std::nullopt;  // behind the origin
    double s = -std::log(h);
    return RayHit{s, ray_point_at(r, s), endpoint};
}

// Proper crossing of the interiors; segments sharing an endpoint do not cross.
inline bool segments_cross(Segment const& s1, Segment const& s2, double tol = 1e-12) {
    auto straddles = [tol](Segment const& a, Segment const& b) {
        Geodesic g = geodesic_through(a.a, a.b);
        double p = side_value(g, b.a), q = side_value(g, b.b);
        return (p > tol && q < -tol) || (p < -tol && q > tol);
    };
    return straddles(s1, s2) && straddles(s2, s1);
}

inline double dist_point_segment(HPoint3 const& w, Segment const& seg) {
    MoebiusMap N = seg.frame();
    HPoint3 q = poincare_extend(N, w);
    double L = seg.length();
    double r = std::hypot(std::abs(q.Z()), q.ht());
    if (r >= std::exp(-L) && r <= 1.0) return std::asinh(std::abs(q.Z()) / q.ht());
    if (r > 1.0) return hyp_dist(q, HPoint3::j());
    return hyp_dist(q, HPoint3({0.0, 0.0}, std::exp(-L)));
}

// Distance between two segments.  The distance from a point moving along
// one segment to the other (convex) segment is a convex function of the
// arclength, so golden-section search finds its minimum.
inline double segment_distance(Segment const& s1, Segment const& s2) {
    if (segments_cross(s1, s2)) return 0.0;
    double L = s1.length();
    Ray r = s1.ray();
    auto f = [&](double s) { return dist_point_segment(ray_point_at(r, s), s2); };
    return golden_section_minimize(f, 0.0, L, 1e-13).second;
}

// Interior test for a geodesic quadrilateral v0 v1 v2 v3 (convex, in order).
inline bool inside_quadrilateral(std::array<HPoint3, 4> const& v, HPoint3 const& w) {
    for (int i = 0; i < 4; ++i) {
        Geodesic edge = geodesic_through(v[i], v[(i + 1) % 4]);
        double ref = side_value(edge, v[(i + 2) % 4]);
        double sw = side_value(edge, w);
        if (!(sw * ref > 0.0)) return false;
    }
    return true;
}

}  // namespace pleat
