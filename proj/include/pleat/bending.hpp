#pragma once
// Realizing a transverse cocycle as isometries between plaques, cutting a
// ray into arcs along the train track, and the cone-nesting certificate.
//
// Orientation convention: for a pair of plaques (P, Q) every leaf between
// them is oriented so that P lies on its left.  With that convention the
// product of "rotate about the leaf, then undo about the next leaf" factors
// telescopes to R_1^{a_1} R_2^{a_2} ... R_k^{a_k}, all in the coordinates of
// the unbent plane, and phi_{Q,P} = phi_{P,Q}^{-1}.

#include <optional>

#include "lamination.hpp"

namespace pleat {

struct Scene {
    FiniteLamination lamination;
    Cocycle cocycle;
    std::optional<TrainTrack> track;
    std::size_t base_plaque = 0;
    std::vector<Ray> rays;  // optional ray battery for certificates

    void validate() const {
        if (cocycle.size() != lamination.size())
            throw GeometryError("cocycle has " + std::to_string(cocycle.size()) +
                                " atoms but the lamination has " +
                                std::to_string(lamination.size()) + " leaves");
        if (base_plaque >= lamination.plaque_count())
            throw GeometryError("base plaque index out of range");
    }
};

// The leaves crossed going from plaque P to plaque Q, oriented with P on the
// left, paired with their atoms.
inline std::vector<std::pair<Geodesic, cplx>> separating_leaves(Scene const& s, std::size_t P,
                                                                std::size_t Q) {
    std::size_t n = s.lamination.plaque_count();
    if (P >= n || Q >= n) throw GeometryError("plaque index out of range");
    std::vector<std::pair<Geodesic, cplx>> out;
    if (P < Q) {
        for (std::size_t i = P; i < Q; ++i)
            out.emplace_back(s.lamination.leaf(i), s.cocycle.atoms.at(i));
    } else {
        for (std::size_t i = P; i > Q; --i)
            out.emplace_back(s.lamination.leaf(i - 1).reversed(), s.cocycle.atoms.at(i - 1));
    }
    return out;
}

namespace detail {
// phi = B_1 ... B_{k-1} R_Q with B_i = F(g_i, s_i) F(g_{i+1}, -s_i), where
// s_i is the cocycle on the first i leaves and F is rotation or translation.
template <typename Factor>
MoebiusMap b_product(Scene const& s, std::size_t P, std::size_t Q, Factor&& factor) {
    s.validate();
    auto sep = separating_leaves(s, P, Q);
    MoebiusMap phi;
    if (sep.empty()) return phi;
    cplx partial = 0.0;
    for (std::size_t i = 0; i + 1 < sep.size(); ++i) {
        partial = reduce(s.cocycle.kind, partial + sep[i].second);
        phi = phi * factor(sep[i].first, partial) * factor(sep[i + 1].first, -partial);
    }
    partial = reduce(s.cocycle.kind, partial + sep.back().second);
    return phi * factor(sep.back().first, partial);
}
}  // namespace detail

inline MoebiusMap bend_between(Scene const& s, std::size_t P, std::size_t Q) {
    if (s.cocycle.kind == CocycleKind::Complex)
        throw GeometryError("bend_between needs a real or angle cocycle");
    return detail::b_product(s, P, Q, [](Geodesic const& g, cplx a) {
        return rotation_about(g, a.real());
    });
}

inline MoebiusMap shear_between(Scene const& s, std::size_t P, std::size_t Q) {
    if (s.cocycle.kind == CocycleKind::Angle)
        throw GeometryError("shear_between needs a real or complex cocycle");
    return detail::b_product(s, P, Q, [](Geodesic const& g, cplx a) {
        return translation_along(g, a);
    });
}

// Bending for angle cocycles, (complex) shearing otherwise.
inline MoebiusMap realize(Scene const& s, std::size_t P, std::size_t Q) {
    return s.cocycle.kind == CocycleKind::Angle ? bend_between(s, P, Q) : shear_between(s, P, Q);
}

// Classical leaf-by-leaf development: after bending along the first j-1
// leaves, bend along the image of leaf j.
inline MoebiusMap naive_pleat(std::vector<Geodesic> const& leaves, std::vector<double> const& angles) {
    if (leaves.size() != angles.size()) throw GeometryError("naive_pleat: one angle per leaf");
    MoebiusMap phi;
    for (std::size_t j = 0; j < leaves.size(); ++j) {
        Geodesic moved(phi(leaves[j].from()), phi(leaves[j].to()));
        phi = rotation_about(moved, angles[j]) * phi;
    }
    return phi;
}

inline double telescoping_check(Scene const& s, std::size_t P, std::size_t Qmid, std::size_t Q) {
    if (Qmid < std::min(P, Q) || Qmid > std::max(P, Q))
        throw GeometryError("intermediate plaque does not separate the end plaques");
    return projective_distance(realize(s, P, Q), realize(s, P, Qmid) * realize(s, Qmid, Q));
}

inline BoundaryPoint boundary_map(Scene const& s, BoundaryPoint const& xi) {
    std::size_t P = s.lamination.plaque_of(xi);
    return realize(s, s.base_plaque, P)(xi);
}

//---------------------------------------------------------------------------//
// Cutting a ray along the track
//---------------------------------------------------------------------------//

enum class SideKind { Long, Short };

struct TrackEvent {
    double s;
    HPoint3 point;
    SideKind kind;
    bool shared = false;  // short side between two rectangles
    bool vertex = false;  // passes through a rectangle corner
};

struct Arc {
    double s_a = 0, s_b = 0;
    HPoint3 a = HPoint3::j(), b = HPoint3::j();
    std::size_t plaque_a = 0, plaque_b = 0;
    int case_label = 0;
    std::string pattern;  // side kinds met, e.g. "LSL"
    bool nudged_a = false, nudged_b = false;
    bool vertex = false;
};

struct ArcDivision {
    Ray ray;
    std::vector<Arc> arcs;
    std::vector<double> leaf_crossings;  // distances along the ray
};

// Distance along the ray at which it crosses the planar geodesic g, if any.
inline std::optional<double> ray_leaf_crossing(Ray const&, MoebiusMap const& N, Geodesic const& g) {
    auto h = detail::axis_crossing_height(N(g.from()), N(g.to()));
    if (!h || !(*h <= 1.0)) return std::nullopt;
    return -std::log(*h);
}

inline std::vector<TrackEvent> track_events(TrainTrack const& t, Ray const& ray) {
    std::vector<TrackEvent> ev;
    for (std::size_t i = 0; i < t.ties().size(); ++i) {
        std::size_t owners = t.rectangles_on(i);
        if (owners == 0) continue;
        if (auto h = cross_ray(ray, t.ties()[i]))
            ev.push_back({h->s, h->point, SideKind::Short, owners >= 2, h->through_endpoint});
    }
    for (std::size_t r = 0; r < t.rectangles().size(); ++r)
        for (auto const& side : t.long_sides(r))
            if (auto h = cross_ray(ray, side))
                ev.push_back({h->s, h->point, SideKind::Long, false, h->through_endpoint});
    std::sort(ev.begin(), ev.end(), [](auto const& x, auto const& y) { return x.s < y.s; });

    // Merge coincident events: overlapping sub-ties of a switch, or a corner.
    std::vector<TrackEvent> merged;
    for (auto const& e : ev) {
        if (!merged.empty() && std::abs(e.s - merged.back().s) < 1e-12) {
            auto& m = merged.back();
            if (e.kind != m.kind) {
                m.vertex = true;
                m.kind = SideKind::Short;
            } else if (e.kind == SideKind::Short) {
                m.shared = true;
            }
            m.vertex = m.vertex || e.vertex;
            continue;
        }
        merged.push_back(e);
    }
    return merged;
}

inline int case_for(std::string const& pattern) {
    if (pattern == "LL") return 1;
    if (pattern == "LSL") return 2;
    if (pattern == "LS" || pattern == "SL" || pattern == "SSL") return 3;
    if (pattern == "SS") return 4;
    if (pattern == "LSSL") return 5;
    return 0;
}

inline ArcDivision arc_division(Scene const& scene, Ray const& ray) {
    if (!scene.track) throw GeometryError("scene has no train track");
    TrainTrack const& track = *scene.track;
    if (!is_planar(ray.origin) || !ray.toward.is_real())
        throw GeometryError("ray must lie in the hyperbolic plane");
    if (track.inside(ray.origin)) throw GeometryError("ray basepoint inside the track");

    MoebiusMap N = normalize_frame(ray);
    for (std::size_t i = 0; i < scene.lamination.size(); ++i) {
        Geodesic const& g = scene.lamination.leaf(i);
        BoundaryPoint p = N(g.from()), q = N(g.to());
        auto [up, vp] = p.real_pair();
        auto [uq, vq] = q.real_pair();
        bool p0 = std::abs(up) < 1e-13 * std::abs(vp), q0 = std::abs(uq) < 1e-13 * std::abs(vq);
        bool pi_ = std::abs(vp) < 1e-13 * std::abs(up), qi = std::abs(vq) < 1e-13 * std::abs(uq);
        if ((p0 && qi) || (pi_ && q0)) throw GeometryError("ray coincides with a leaf");
    }

    std::vector<TrackEvent> ev = track_events(track, ray);
    ArcDivision out{ray, {}, {}};

    auto is_long = [&](std::size_t k) { return k < ev.size() && ev[k].kind == SideKind::Long; };
    auto is_shared = [&](std::size_t k) {
        return k < ev.size() && ev[k].kind == SideKind::Short && ev[k].shared;
    };
    std::size_t i = 0;
    while (i < ev.size()) {
        std::size_t start = i, end = 0;
        if (start + 1 >= ev.size()) throw GeometryError("ray does not leave the track");
        if (ev[start].kind == SideKind::Long) {
            if (is_long(start + 1))
                end = start + 1;
            else if (is_shared(start + 1) && is_long(start + 2))
                end = start + 2;
            else if (is_shared(start + 1) && is_shared(start + 2) && is_long(start + 3))
                end = start + 3;
            else
                end = start + 1;  // stop at the first short side
        } else {
            if (is_long(start + 1))
                end = start + 1;
            else if (is_shared(start + 1) && is_long(start + 2))
                end = start + 2;
            else
                end = start + 1;
        }
        Arc arc;
        arc.s_a = ev[start].s;
        arc.s_b = ev[end].s;
        for (std::size_t k = start; k <= end; ++k) {
            arc.pattern += ev[k].kind == SideKind::Long ? 'L' : 'S';
            arc.vertex = arc.vertex || ev[k].vertex;
        }
        arc.case_label = case_for(arc.pattern);
        out.arcs.push_back(std::move(arc));
        i = is_shared(end) ? end : end + 1;
    }

    // Leaf crossings along the ray.
    for (std::size_t l = 0; l < scene.lamination.size(); ++l)
        if (auto s = ray_leaf_crossing(ray, N, scene.lamination.leaf(l))) out.leaf_crossings.push_back(*s);
    std::sort(out.leaf_crossings.begin(), out.leaf_crossings.end());

    for (double c : out.leaf_crossings) {
        bool covered = std::any_of(out.arcs.begin(), out.arcs.end(),
                                   [&](Arc const& a) { return c >= a.s_a - 1e-12 && c <= a.s_b + 1e-12; });
        if (!covered) throw GeometryError("ray crosses a leaf outside the track");
    }

    // Arc ends on a leaf are pushed forward by a tiny multiple of w_* so
    // that they sit inside a plaque; shared ends move together.
    double nudge = 1e-6 * track_metrics(track).wLower;
    auto on_leaf = [&](double s) {
        for (double c : out.leaf_crossings)
            if (std::abs(c - s) < 1e-12) return true;
        return false;
    };
    for (auto& arc : out.arcs) {
        if (on_leaf(arc.s_a)) {
            arc.s_a += nudge;
            arc.nudged_a = true;
        }
        if (on_leaf(arc.s_b)) {
            arc.s_b += nudge;
            arc.nudged_b = true;
        }
        arc.a = ray_point_at(ray, arc.s_a);
        arc.b = ray_point_at(ray, arc.s_b);
        arc.plaque_a = scene.lamination.plaque_of(arc.a, 0.0);
        arc.plaque_b = scene.lamination.plaque_of(arc.b, 0.0);
    }

    return out;
}

//---------------------------------------------------------------------------//
// Certificate
//---------------------------------------------------------------------------//

struct ArcCertificate {
    Arc arc;
    Cone outer;
    Cone inner;  // image of the cone at b under the realization
    MoebiusMap map;
    NestingResult nesting;
};

struct Certificate {
    Ray ray;
    std::vector<ArcCertificate> arcs;
    bool granted = true;
    double min_margin = HUGE_VAL;
};

inline Certificate nesting_certificate(Scene const& s, Ray const& ray) {
    ArcDivision div = arc_division(s, ray);
    Certificate cert{ray, {}, true, HUGE_VAL};
    BoundaryPoint const& xi = ray.toward;
    for (auto const& arc : div.arcs) {
        MoebiusMap R = realize(s, arc.plaque_a, arc.plaque_b);
        Cone outer(arc.a, xi, pi / 2.0);
        Cone inner(poincare_extend(R, arc.b), R(xi), pi / 2.0);
        NestingResult nest = shadow_nested(outer, inner);
        cert.granted = cert.granted && nest.nested;
        cert.min_margin = std::min(cert.min_margin, nest.margin);
        cert.arcs.push_back({arc, outer, inner, R, nest});
    }
    return cert;
}

struct BatteryResult {
    bool granted = true;
    double min_margin = HUGE_VAL;
    std::vector<Certificate> certificates;
};

inline BatteryResult certify_battery(Scene const& s, std::vector<Ray> const& rays) {
    BatteryResult out;
    for (auto const& r : rays) {
        out.certificates.push_back(nesting_certificate(s, r));
        out.granted = out.granted && out.certificates.back().granted;
        out.min_margin = std::min(out.min_margin, out.certificates.back().min_margin);
    }
    return out;
}

}  // namespace pleat
