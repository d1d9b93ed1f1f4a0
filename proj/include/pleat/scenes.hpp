#pragma once
// Scene generators: a band of nearly parallel leaves carried by a chain of
// rectangles, batteries of test rays through it, and random leaf stacks.

#include <random>

#include "bending.hpp"
#include "constants.hpp"

namespace pleat {

// The band runs along the core geodesic from -1 to 1 (the unit semicircle).
// Ties are translates along the core of a segment of the imaginary axis
// centred at j; leaves are semicircles about 0 of radius e^{s_k}.
struct BandParams {
    std::size_t leaves = 10;
    std::size_t rectangles = 6;
    double tie_length = 1e-3;
    double spacing = 0.1;  // core distance between consecutive ties
    double fill = 0.8;     // fraction of the half-tie the leaves may occupy
    CocycleKind kind = CocycleKind::Angle;
};

inline Geodesic band_core() { return {BoundaryPoint(-1.0), BoundaryPoint(1.0)}; }

// Core position of tie m.
inline double band_tie_position(BandParams const& p, std::size_t m) {
    return (static_cast<double>(m) - 0.5 * static_cast<double>(p.rectangles)) * p.spacing;
}

inline Scene make_band_scene(BandParams const& p, std::vector<double> const& atoms, std::mt19937_64& rng) {
    if (p.leaves < 1 || p.rectangles < 1) throw GeometryError("band needs leaves and rectangles");
    if (atoms.size() != p.leaves) throw GeometryError("one atom per leaf");
    double half = 0.5 * p.tie_length;
    double xmax = 0.5 * static_cast<double>(p.rectangles) * p.spacing;
    // Lambert quadrilateral: a leaf at distance s from the core sits at
    // distance atanh(tanh(s) cosh(x)) along the perpendicular at x.
    double smax = std::atanh(std::tanh(p.fill * half) / std::cosh(xmax));
    std::uniform_real_distribution<double> U(-smax, smax);
    std::vector<double> s(p.leaves);
    for (auto& x : s) x = U(rng);
    std::sort(s.begin(), s.end(), std::greater<>());
    for (std::size_t k = 1; k < s.size(); ++k)
        if (!(s[k] < s[k - 1])) throw GeometryError("band leaves collide; draw again");

    std::vector<Geodesic> leaves;
    for (double sk : s) {
        double r = std::exp(sk);
        leaves.emplace_back(BoundaryPoint(-r), BoundaryPoint(r));
    }
    Geodesic core = band_core();
    std::vector<Segment> ties;
    for (std::size_t m = 0; m <= p.rectangles; ++m) {
        MoebiusMap H = translation_along(core, band_tie_position(p, m));
        ties.push_back({poincare_extend(H, HPoint3({0, 0}, std::exp(half))),
                        poincare_extend(H, HPoint3({0, 0}, std::exp(-half)))});
    }
    std::vector<Rectangle> rects;
    for (std::size_t m = 0; m < p.rectangles; ++m) rects.push_back({m, m + 1});

    Scene sc;
    sc.lamination = FiniteLamination(std::move(leaves));
    sc.cocycle = Cocycle::from_real(p.kind, atoms);
    sc.track = TrainTrack(std::move(ties), std::move(rects));
    sc.base_plaque = 0;
    return sc;
}

namespace detail {
inline Vec3 rotate_planar(Vec3 const& d, double gamma) {
    double c = std::cos(gamma), s = std::sin(gamma);
    return {c * d.x - s * d.t, 0.0, s * d.x + c * d.t};
}
}  // namespace detail

// A mix of rays for a band scene: rays crossing the band transversally
// (one or a few rectangles), shallow rays entering through a long side and
// running along the band, and rays entering through the first tie.  Every
// ray is checked with arc_division; failures are redrawn.
inline std::vector<Ray> band_ray_battery(Scene const& sc, BandParams const& p, std::size_t count,
                                         std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Geodesic core = band_core();
    double x0 = band_tie_position(p, 0), x1 = band_tie_position(p, p.rectangles);
    double W = p.tie_length;
    std::vector<Ray> rays;
    std::size_t attempts = 0;
    while (rays.size() < count) {
        if (++attempts > 200 * count + 1000) throw GeometryError("could not build a ray battery");
        double kind = U(rng);
        std::optional<Ray> ray;
        double side = U(rng) < 0.5 ? 1.0 : -1.0;
        if (kind < 0.4) {
            // Transverse.
            double x = x0 + (x1 - x0) * (0.05 + 0.9 * U(rng));
            MoebiusMap H = translation_along(core, x);
            HPoint3 q = poincare_extend(H, HPoint3::j());
            Vec3 perp = direction_toward(q, H(side > 0 ? BoundaryPoint(0.0) : BoundaryPoint::infinity()));
            Vec3 dir = detail::rotate_planar(perp, (U(rng) - 0.5) * 2.0 * pi / 3.0);
            BoundaryPoint fwd = ideal_endpoint(UnitTangent(q, dir));
            BoundaryPoint back = ideal_endpoint(UnitTangent(q, dir * -1.0));
            HPoint3 o = ray_point_at(Ray{q, back}, (2.0 + 2.0 * U(rng)) * W);
            ray = Ray{o, fwd};
        } else if (kind < 0.7) {
            // Shallow entry through a long side.
            double x = x0 + (x1 - x0) * U(rng) - p.spacing;
            MoebiusMap H = translation_along(core, x);
            HPoint3 o = poincare_extend(H, HPoint3({0, 0}, std::exp(side * (1.0 + U(rng)) * W)));
            Vec3 along = direction_toward(o, BoundaryPoint(1.0));
            double gamma = -side * (0.2 + 3.0 * U(rng)) * W / p.spacing;
            Vec3 dir = detail::rotate_planar(along, gamma);
            ray = Ray{o, ideal_endpoint(UnitTangent(o, dir))};
        } else {
            // Entry through the first tie, nearly along the leaves.
            MoebiusMap H = translation_along(core, x0 - 0.5 * p.spacing * U(rng) - 1e-3 * p.spacing);
            HPoint3 o = poincare_extend(H, HPoint3({0, 0}, std::exp((U(rng) - 0.5) * 0.6 * W)));
            Vec3 along = direction_toward(o, BoundaryPoint(1.0));
            double gamma = (U(rng) - 0.5) * 2.0 * W / (static_cast<double>(p.rectangles) * p.spacing);
            Vec3 dir = detail::rotate_planar(along, gamma);
            ray = Ray{o, ideal_endpoint(UnitTangent(o, dir))};
        }
        try {
            auto div = arc_division(sc, *ray);
            if (div.arcs.empty()) continue;
            rays.push_back(*ray);
        } catch (GeometryError const&) {
        }
    }
    return rays;
}

// A geometric band satisfying every hypothesis of the injectivity theorem:
// tie length below the (7) bound, atoms below epsilon * w_* in total.
struct TheoremScene {
    Scene scene;
    BandParams params;
    TrackMetrics metrics;
    CaseConstants constants;
};

inline TheoremScene make_theorem_scene(std::mt19937_64& rng, std::size_t rays = 50) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    BandParams p;
    p.leaves = 3 + static_cast<std::size_t>(U(rng) * 30);
    p.rectangles = 3 + static_cast<std::size_t>(U(rng) * 5);
    p.spacing = 0.05 + 0.25 * U(rng);
    // l* ~ spacing and l_* = spacing; shrink the ties under the bound.
    p.tie_length = (0.1 + 0.8 * U(rng)) * w_bound_value(1.05 * p.spacing, p.spacing);
    p.kind = CocycleKind::Angle;
    for (int attempt = 0;; ++attempt) {
        std::vector<double> zeros(p.leaves, 0.0);
        Scene sc = make_band_scene(p, zeros, rng);
        TrackMetrics m = track_metrics(*sc.track);
        if (!theorem_w_bound(m)) {
            p.tie_length *= 0.5;
            if (attempt > 20) throw GeometryError("could not satisfy the tie-length bound");
            continue;
        }
        CaseConstants k = case_constants(m.lStar, m.lLower);
        double eps = k.epsilonFinal.to_double();
        // Each atom at most eps * w_* / (2n): every tie value and every
        // prefix stays below eps * w_* / 2 < min(eps * w_*, eps).
        std::vector<double> atoms(p.leaves);
        for (auto& a : atoms) a = (2.0 * U(rng) - 1.0) * eps * m.wLower / (2.0 * static_cast<double>(p.leaves));
        sc.cocycle = Cocycle::from_real(CocycleKind::Angle, atoms);
        sc.rays = band_ray_battery(sc, p, rays, rng);
        return {sc, p, m, k};
    }
}

// Wide band with large atoms: the certificate is expected to be withheld.
inline Scene make_stress_scene(std::mt19937_64& rng) {
    BandParams p;
    p.leaves = 3;
    p.rectangles = 2;
    p.tie_length = 1.0;
    p.spacing = 0.5;
    p.fill = 0.9;
    Scene sc = make_band_scene(p, {3.0, 3.0, 3.0}, rng);
    sc.rays = band_ray_battery(sc, p, 10, rng);
    return sc;
}

// Ten-leaf band with a small real (shear) cocycle for the motion scan.
inline Scene make_motion_demo(std::mt19937_64& rng, std::size_t rays = 20) {
    BandParams p;
    p.leaves = 10;
    p.rectangles = 6;
    p.tie_length = 0.02;
    p.spacing = 0.1;
    p.kind = CocycleKind::Real;
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> atoms(p.leaves);
    for (auto& a : atoms) a = (0.5 + U(rng)) * 1e-3;
    Scene sc = make_band_scene(p, atoms, rng);
    sc.rays = band_ray_battery(sc, p, rays, rng);
    return sc;
}

// k nested leaves (a_0 < a_1 < ... < b_1 < b_0), moved by a random real
// Moebius map, with atoms uniform in [-amp, amp].
inline Scene make_random_stack(std::size_t k, double amp, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> s(k);
    for (auto& x : s) x = 2.0 * U(rng) - 1.0;
    std::sort(s.begin(), s.end(), std::greater<>());
    double c = 2.0 * U(rng) - 1.0;
    // Random orientation-preserving real map: scale, shift, then z -> -1/z
    // half of the time (this puts some endpoints near infinity).
    double a = std::exp(2.0 * U(rng) - 1.0), b = 4.0 * U(rng) - 2.0;
    MoebiusMap M(a, b, 0.0, 1.0);
    if (U(rng) < 0.5) M = MoebiusMap(0.0, -1.0, 1.0, 0.3 * (2.0 * U(rng) - 1.0)) * M;
    std::vector<Geodesic> leaves;
    std::vector<double> atoms;
    for (std::size_t i = 0; i < k; ++i) {
        double r = std::exp(s[i]);
        leaves.emplace_back(M(BoundaryPoint(c - r)), M(BoundaryPoint(c + r)));
        atoms.push_back(amp * (2.0 * U(rng) - 1.0));
    }
    Scene sc;
    sc.lamination = FiniteLamination(std::move(leaves));
    sc.cocycle = Cocycle::from_real(CocycleKind::Angle, atoms);
    return sc;
}

}  // namespace pleat
