#pragma once
// Finite laminations of the hyperbolic plane, transverse cocycles, and the
// train tracks that carry them.
//
// A finite lamination here is a stack of disjoint geodesics: every leaf
// separates its predecessor from its successor.  The complementary strips
// ("plaques") are numbered 0..n so that plaque i lies between leaf i-1 and
// leaf i.  Leaves are oriented so that lower-numbered plaques sit on their
// left; plaque_of() is then a count of the leaves a point lies to the right of.

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "plane.hpp"

namespace pleat {

class FiniteLamination {
  public:
    FiniteLamination() = default;

    explicit FiniteLamination(std::vector<Geodesic> leaves) : leaves_(std::move(leaves)) {
        std::size_t n = leaves_.size();
        for (std::size_t i = 0; i < n; ++i)
            if (!leaves_[i].is_planar())
                throw GeometryError("leaf " + std::to_string(i) +
                                    " does not lie in the hyperbolic plane");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = i + 1; k < n; ++k)
                if (linked(leaves_[i], leaves_[k]))
                    throw GeometryError("leaves " + std::to_string(i) + " and " +
                                        std::to_string(k) + " intersect");
        if (n >= 2) {
            if (side_of(leaves_[0], leaves_[1]) < 0.0) leaves_[0] = leaves_[0].reversed();
            for (std::size_t i = 1; i < n; ++i)
                if (side_of(leaves_[i], leaves_[i - 1]) > 0.0) leaves_[i] = leaves_[i].reversed();
            for (std::size_t i = 1; i + 1 < n; ++i)
                if (!(side_of(leaves_[i], leaves_[i + 1]) > 0.0))
                    throw GeometryError("leaf " + std::to_string(i) +
                                        " does not separate its neighbours; leaves are out of order");
        }
    }

    std::size_t size() const { return leaves_.size(); }
    std::size_t plaque_count() const { return leaves_.size() + 1; }
    std::vector<Geodesic> const& leaves() const { return leaves_; }
    Geodesic const& leaf(std::size_t i) const { return leaves_.at(i); }

    // Plaque containing w; throws if w is (numerically) on a leaf.
    std::size_t plaque_of(HPoint3 const& w, double tol = 1e-13) const {
        return locate([&](Geodesic const& g) {
            double s = side_value(g, w);
            if (std::abs(s) <= tol) throw GeometryError("point lies on a leaf");
            return s > 0.0;
        });
    }

    // Plaque whose closure contains the ideal point xi.  A leaf endpoint is
    // assigned to the plaque on the left of that leaf (the lower index).
    std::size_t plaque_of(BoundaryPoint const& xi, double tol = 1e-13) const {
        return locate([&](Geodesic const& g) { return side_value(g, xi) > tol; });
    }

    // Side of the geodesic h relative to g, judged by h's endpoint farthest from g.
    static double side_of(Geodesic const& g, Geodesic const& h) {
        double a = side_value(g, h.from()), b = side_value(g, h.to());
        return std::abs(a) >= std::abs(b) ? a : b;
    }

    static bool linked(Geodesic const& g, Geodesic const& h, double tol = 1e-13) {
        double a = side_value(g, h.from()), b = side_value(g, h.to());
        return (a > tol && b < -tol) || (a < -tol && b > tol);
    }

  private:
    // Leaves a point is right of form a prefix, so binary search applies.
    template <typename RightOf>
    std::size_t locate(RightOf&& right_of) const {
        std::size_t lo = 0, hi = leaves_.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (right_of(leaves_[mid]))
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

    std::vector<Geodesic> leaves_;
};

//---------------------------------------------------------------------------//
// Cocycles
//---------------------------------------------------------------------------//

enum class CocycleKind { Real, Angle, Complex };

inline std::string to_string(CocycleKind k) {
    switch (k) {
        case CocycleKind::Real: return "real";
        case CocycleKind::Angle: return "angle";
        case CocycleKind::Complex: return "complex";
    }
    return "?";
}

// Reduce a value to its canonical representative: angles to (-pi, pi],
// complex values mod 2 pi i (imaginary part to (-pi, pi]).
inline cplx reduce(CocycleKind kind, cplx v) {
    switch (kind) {
        case CocycleKind::Real: return {v.real(), 0.0};
        case CocycleKind::Angle: return {reduce_angle(v.real()), 0.0};
        case CocycleKind::Complex: return {v.real(), reduce_angle(v.imag())};
    }
    return v;
}

struct Level;

struct Cocycle {
    CocycleKind kind = CocycleKind::Angle;
    std::vector<cplx> atoms;
    // Optional: level n -> a finer lamination with atoms summing to ours.
    std::function<Level(int)> refinement;

    Cocycle() = default;
    Cocycle(CocycleKind k, std::vector<cplx> a) : kind(k), atoms(std::move(a)) {
        for (auto& x : atoms) {
            if (kind != CocycleKind::Complex && x.imag() != 0.0)
                throw GeometryError("real or angle cocycle with a complex atom");
            x = reduce(kind, x);
        }
    }
    static Cocycle from_real(CocycleKind k, std::vector<double> const& a) {
        return {k, std::vector<cplx>(a.begin(), a.end())};
    }
    static Cocycle zero(CocycleKind k, std::size_t n) { return {k, std::vector<cplx>(n, 0.0)}; }

    std::size_t size() const { return atoms.size(); }
};

struct Level {
    FiniteLamination lamination;
    Cocycle cocycle;
};

//---------------------------------------------------------------------------//
// Transverse arcs
//---------------------------------------------------------------------------//

struct Crossing {
    std::size_t leaf;
    double s;  // arclength along the arc
    HPoint3 point;
    double angle;
};

class TransverseArc {
  public:
    TransverseArc(FiniteLamination const& lam, Segment carrier) : carrier_(carrier) {
        for (std::size_t i = 0; i < lam.size(); ++i) {
            Geodesic const& g = lam.leaf(i);
            if (dist_point_geodesic(carrier.a, g) < 1e-12 || dist_point_geodesic(carrier.b, g) < 1e-12)
                throw GeometryError("arc endpoint lies on leaf " + std::to_string(i));
            if (auto hit = cross_segment(g, carrier)) {
                if (std::sin(hit->angle) < 1e-12)
                    throw GeometryError("arc is tangent to leaf " + std::to_string(i));
                crossings_.push_back({i, hit->s, hit->point, hit->angle});
            }
        }
        std::sort(crossings_.begin(), crossings_.end(),
                  [](Crossing const& x, Crossing const& y) { return x.s < y.s; });
        for (std::size_t k = 1; k < crossings_.size(); ++k) {
            long step = static_cast<long>(crossings_[k].leaf) - static_cast<long>(crossings_[k - 1].leaf);
            long dir = static_cast<long>(crossings_[1].leaf) - static_cast<long>(crossings_[0].leaf);
            if (std::abs(step) != 1 || step != dir)
                throw GeometryError("arc meets the leaves out of list order");
        }
    }

    Segment const& carrier() const { return carrier_; }
    std::vector<Crossing> const& crossings() const { return crossings_; }
    double length() const { return carrier_.length(); }

    // Lengths of the n+1 complementary gaps, in order along the arc.
    std::vector<double> gaps() const {
        std::vector<double> g;
        double prev = 0.0;
        for (auto const& c : crossings_) {
            g.push_back(c.s - prev);
            prev = c.s;
        }
        g.push_back(length() - prev);
        return g;
    }

  private:
    Segment carrier_;
    std::vector<Crossing> crossings_;
};

inline cplx beta_of_arc(Cocycle const& c, TransverseArc const& k) {
    cplx sum = 0.0;
    for (auto const& x : k.crossings()) sum += c.atoms.at(x.leaf);
    return reduce(c.kind, sum);
}

inline double beta_max(Cocycle const& c, std::vector<TransverseArc> const& ties) {
    double m = 0.0;
    for (auto const& k : ties) m = std::max(m, std::abs(beta_of_arc(c, k)));
    return m;
}

enum class VarRule {
    Minimum,  // best admissible gap family
    AllGaps,  // keep every gap (no exclusions); an upper bound for Minimum
};

// delta-variation of the cocycle on a tie.  The value on the prefix ending
// inside gap j is P_j; a family of gaps is admissible when the gaps left out
// have total length < delta * |tie| and the two end gaps are kept.
inline double beta_var_delta(Cocycle const& c, TransverseArc const& tie, double delta,
                             VarRule rule = VarRule::Minimum) {
    if (!(delta > 0.0 && delta < 1.0)) throw GeometryError("delta must lie in (0, 1)");
    std::vector<double> gaps = tie.gaps();
    std::size_t n = gaps.size() - 1;
    std::vector<double> prefix(n + 1);
    cplx sum = 0.0;
    prefix[0] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sum += c.atoms.at(tie.crossings()[j].leaf);
        prefix[j + 1] = std::abs(reduce(c.kind, sum));
    }
    double ends = std::max(prefix[0], prefix[n]);
    if (rule == VarRule::AllGaps || n < 2)
        return std::max(ends, *std::max_element(prefix.begin(), prefix.end()));

    // Dropping the largest prefixes first is optimal: to reach a threshold T
    // every gap above T must go, so the answer is the first gap we cannot
    // afford to drop.
    std::vector<std::size_t> order(n - 1);
    std::iota(order.begin(), order.end(), std::size_t{1});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return prefix[a] > prefix[b]; });
    double budget = delta * tie.length();
    double dropped = 0.0;
    for (std::size_t j : order) {
        if (prefix[j] <= ends) break;
        if (dropped + gaps[j] < budget) {
            dropped += gaps[j];
            continue;
        }
        return prefix[j];
    }
    return ends;
}

//---------------------------------------------------------------------------//
// Train tracks
//---------------------------------------------------------------------------//

// A long rectangle bounded by two ties; the long sides join a-ends to a-ends
// and b-ends to b-ends.
struct Rectangle {
    std::size_t tie_a;
    std::size_t tie_b;
};

class TrainTrack {
  public:
    TrainTrack() = default;
    TrainTrack(std::vector<Segment> ties, std::vector<Rectangle> rects)
        : ties_(std::move(ties)), rects_(std::move(rects)) {
        for (std::size_t i = 0; i < ties_.size(); ++i) {
            if (!is_planar(ties_[i].a) || !is_planar(ties_[i].b))
                throw GeometryError("tie " + std::to_string(i) + " leaves the hyperbolic plane");
            if (!(ties_[i].length() > 0.0))
                throw GeometryError("tie " + std::to_string(i) + " has zero length");
        }
        for (std::size_t r = 0; r < rects_.size(); ++r) {
            auto const& R = rects_[r];
            if (R.tie_a >= ties_.size() || R.tie_b >= ties_.size() || R.tie_a == R.tie_b)
                throw GeometryError("rectangle " + std::to_string(r) + " has invalid tie indices");
            auto v = vertices(r);
            for (int i = 0; i < 4; ++i) {
                Geodesic edge = geodesic_through(v[i], v[(i + 1) % 4]);
                double s1 = side_value(edge, v[(i + 2) % 4]);
                double s2 = side_value(edge, v[(i + 3) % 4]);
                if (!(s1 * s2 > 0.0))
                    throw GeometryError("rectangle " + std::to_string(r) +
                                        " is not a convex quadrilateral (check tie endpoint order)");
            }
        }
        for (std::size_t r = 0; r < rects_.size(); ++r)
            for (std::size_t q = r + 1; q < rects_.size(); ++q)
                for (auto const& s1 : long_sides(r))
                    for (auto const& s2 : long_sides(q))
                        if (segments_cross(s1, s2))
                            throw GeometryError("rectangles " + std::to_string(r) + " and " +
                                                std::to_string(q) + " overlap");
    }

    std::vector<Segment> const& ties() const { return ties_; }
    std::vector<Rectangle> const& rectangles() const { return rects_; }

    std::array<HPoint3, 4> vertices(std::size_t r) const {
        auto const& A = ties_.at(rects_.at(r).tie_a);
        auto const& B = ties_.at(rects_.at(r).tie_b);
        return {A.a, A.b, B.b, B.a};
    }
    std::array<Segment, 2> long_sides(std::size_t r) const {
        auto const& A = ties_.at(rects_.at(r).tie_a);
        auto const& B = ties_.at(rects_.at(r).tie_b);
        return {Segment{A.a, B.a}, Segment{A.b, B.b}};
    }
    std::size_t rectangles_on(std::size_t tie) const {
        std::size_t n = 0;
        for (auto const& R : rects_) n += (R.tie_a == tie) + (R.tie_b == tie);
        return n;
    }
    bool inside(HPoint3 const& w) const {
        for (std::size_t r = 0; r < rects_.size(); ++r)
            if (inside_quadrilateral(vertices(r), w)) return true;
        return false;
    }

  private:
    std::vector<Segment> ties_;
    std::vector<Rectangle> rects_;
};

struct TrackMetrics {
    double lStar = 0;   // max diameter of a pair of ties bounding a rectangle
    double lLower = 0;  // min distance between such ties
    double wStar = 0;   // max tie length
    double wLower = 0;  // min tie length
};

inline TrackMetrics track_metrics(TrainTrack const& t) {
    if (t.rectangles().empty()) throw GeometryError("track has no rectangles (no paired ties)");
    TrackMetrics m;
    m.lLower = HUGE_VAL;
    m.wLower = HUGE_VAL;
    std::vector<bool> used(t.ties().size(), false);
    for (std::size_t r = 0; r < t.rectangles().size(); ++r) {
        auto v = t.vertices(r);
        for (int i = 0; i < 4; ++i)
            for (int k = i + 1; k < 4; ++k) m.lStar = std::max(m.lStar, hyp_dist(v[i], v[k]));
        auto const& R = t.rectangles()[r];
        m.lLower = std::min(m.lLower, segment_distance(t.ties()[R.tie_a], t.ties()[R.tie_b]));
        used[R.tie_a] = used[R.tie_b] = true;
    }
    for (std::size_t i = 0; i < t.ties().size(); ++i) {
        if (!used[i]) continue;
        double w = t.ties()[i].length();
        m.wStar = std::max(m.wStar, w);
        m.wLower = std::min(m.wLower, w);
    }
    return m;
}

struct TrackViolation {
    std::string kind;  // "angle", "tie_length", "long_side"
    std::size_t tie = 0;
    std::size_t leaf = 0;
    double value = 0;
};

struct GeometricReport {
    bool ok = true;
    std::vector<TrackViolation> violations;
};

inline constexpr double max_tie_length = 1.0 / 20.0;

inline GeometricReport is_geometric(TrainTrack const& t, FiniteLamination const& lam) {
    GeometricReport rep;
    auto flag = [&](TrackViolation v) {
        rep.ok = false;
        rep.violations.push_back(std::move(v));
    };
    for (std::size_t i = 0; i < t.ties().size(); ++i) {
        double w = t.ties()[i].length();
        if (w > max_tie_length) flag({"tie_length", i, 0, w});
        for (std::size_t l = 0; l < lam.size(); ++l)
            if (auto hit = cross_segment(lam.leaf(l), t.ties()[i]))
                if (hit->angle < pi / 4.0 || hit->angle > 3.0 * pi / 4.0)
                    flag({"angle", i, l, hit->angle});
    }
    for (std::size_t r = 0; r < t.rectangles().size(); ++r)
        for (auto const& side : t.long_sides(r))
            for (std::size_t l = 0; l < lam.size(); ++l)
                if (cross_segment(lam.leaf(l), side)) flag({"long_side", r, l, 0.0});
    return rep;
}

// The tie-length hypothesis w* < e^{-2 l*} tanh(l_*/2) / (8 pi).
inline double w_bound_value(double lStar, double lLower) {
    return std::exp(-2.0 * lStar) * std::tanh(lLower / 2.0) / (8.0 * pi);
}

inline bool theorem_w_bound(TrackMetrics const& m) {
    return m.wStar < w_bound_value(m.lStar, m.lLower);
}

//---------------------------------------------------------------------------//
// Stacks of nested leaves
//---------------------------------------------------------------------------//

using AnglePattern = std::function<double(std::size_t)>;

inline AnglePattern alternating(double theta) {
    return [theta](std::size_t k) { return (k % 2 == 0) ? theta : -theta; };
}

// +1, -1, +2, -2, ...
inline AnglePattern growing() {
    return [](std::size_t k) {
        double m = static_cast<double>(k / 2 + 1);
        return (k % 2 == 0) ? m : -m;
    };
}

struct StackScene {
    FiniteLamination lamination;
    Cocycle cocycle;
    Segment full_tie;  // crosses every leaf
    Segment half_tie;  // crosses the first n/2 leaves
};

// n semicircles centred at 0 with radii e^{1/(k+1)}, accumulating on the unit
// semicircle.  Ties run down the imaginary axis from outside the stack.
inline StackScene make_stack_scene(std::size_t n, AnglePattern const& pattern,
                                   CocycleKind kind = CocycleKind::Angle) {
    if (n < 1) throw GeometryError("make_stack_scene needs at least one leaf");
    std::vector<Geodesic> leaves;
    std::vector<cplx> atoms;
    auto radius_log = [](double k) { return 1.0 / (k + 1.0); };
    for (std::size_t k = 0; k < n; ++k) {
        double r = std::exp(radius_log(static_cast<double>(k)));
        leaves.emplace_back(BoundaryPoint(-r), BoundaryPoint(r));
        atoms.emplace_back(pattern(k));
    }
    HPoint3 top({0.0, 0.0}, std::exp(1.5));
    auto between = [&](std::size_t k) {  // height between leaf k-1 and leaf k
        double s = 0.5 * (radius_log(k - 1.0) + radius_log(static_cast<double>(k)));
        return HPoint3({0.0, 0.0}, std::exp(s));
    };
    std::size_t half = std::max<std::size_t>(1, n / 2);
    return {FiniteLamination(std::move(leaves)), Cocycle(kind, std::move(atoms)),
            Segment{top, between(n)}, Segment{top, between(half)}};
}

//---------------------------------------------------------------------------//
// Refinement generators
//---------------------------------------------------------------------------//

// Level n splits leaf k (a semicircle of radius e^{s_k} about 0) into 2^n
// leaves spread evenly over [s_k - spread/2, s_k + spread/2], each carrying
// atom_k / 2^n.  The spread must be smaller than the gaps between the s_k.
inline std::function<Level(int)> halving_refinement(std::vector<double> s, std::vector<double> atoms,
                                                    double spread) {
    if (s.size() != atoms.size()) throw GeometryError("one atom per leaf");
    return [s = std::move(s), atoms = std::move(atoms), spread](int n) {
        std::size_t parts = std::size_t{1} << n;
        std::vector<std::pair<double, double>> children;  // (log radius, atom)
        for (std::size_t k = 0; k < s.size(); ++k)
            for (std::size_t j = 0; j < parts; ++j)
                children.emplace_back(s[k] + spread * ((j + 0.5) / parts - 0.5), atoms[k] / parts);
        std::sort(children.begin(), children.end(), [](auto& a, auto& b) { return a.first > b.first; });
        std::vector<Geodesic> leaves;
        std::vector<cplx> child_atoms;
        for (auto [ls, a] : children) {
            double r = std::exp(ls);
            leaves.emplace_back(BoundaryPoint(-r), BoundaryPoint(r));
            child_atoms.emplace_back(a);
        }
        return Level{FiniteLamination(std::move(leaves)), Cocycle(CocycleKind::Angle, std::move(child_atoms))};
    };
}

// Level n is the alternating stack with 2(n+1) leaves: bounded values on
// every tie, steps that need not shrink.
inline std::function<Level(int)> alternating_refinement(double theta) {
    return [theta](int n) {
        auto st = make_stack_scene(2 * static_cast<std::size_t>(n + 1), alternating(theta));
        return Level{st.lamination, st.cocycle};
    };
}

}  // namespace pleat
