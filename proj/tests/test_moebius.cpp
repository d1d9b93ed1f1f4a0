#include <gtest/gtest.h>

#include <random>

#include <pleat/cones.hpp>

using namespace pleat;

namespace {

MoebiusMap random_map(std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    return {cplx(N(rng), N(rng)), cplx(N(rng), N(rng)), cplx(N(rng), N(rng)), cplx(N(rng), N(rng))};
}

HPoint3 random_point(std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    return {cplx(N(rng), N(rng)), std::exp(N(rng))};
}

BoundaryPoint random_boundary(std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 2.0);
    return cplx(N(rng), N(rng));
}

Geodesic random_geodesic(std::mt19937_64& rng) { return {random_boundary(rng), random_boundary(rng)}; }

bool near_point(HPoint3 const& a, HPoint3 const& b, double tol) {
    return std::abs(a.Z() - b.Z()) < tol && std::abs(a.ht() - b.ht()) < tol;
}

}  // namespace

TEST(MoebiusMap, NormalizedAndSignRule) {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 500; ++i) {
        MoebiusMap A = random_map(rng);
        EXPECT_LT(std::abs(A.det() - 1.0), 1e-12);
        cplx tr = A.trace();
        EXPECT_TRUE(tr.real() > 0.0 || (tr.real() == 0.0 && tr.imag() >= 0.0));
    }
    EXPECT_THROW(MoebiusMap(1.0, 2.0, 2.0, 4.0), GeometryError);
}

TEST(Compose, Examples) {
    std::mt19937_64 rng(11);
    MoebiusMap A = random_map(rng);
    EXPECT_LT(max_entry_difference(compose(MoebiusMap::identity(), A), A), 1e-15);
    EXPECT_LT(dist_id(compose(A, A.inverse())), 1e-12);
    for (int i = 0; i < 500; ++i) {
        MoebiusMap P = random_map(rng), Q = random_map(rng);
        BoundaryPoint x = random_boundary(rng);
        EXPECT_LT(chordal_distance(act_boundary(compose(P, Q), x), act_boundary(P, act_boundary(Q, x))), 1e-10);
    }
}

TEST(Norm, Examples) {
    EXPECT_DOUBLE_EQ(norm(MoebiusMap::identity()), 1.0);
    EXPECT_DOUBLE_EQ(norm(MoebiusMap(1.0, 1.0, 0.0, 1.0)), 2.0);
    std::mt19937_64 rng(12);
    for (int i = 0; i < 1000; ++i) {
        MoebiusMap A = random_map(rng), B = random_map(rng);
        EXPECT_LE(norm(A * B), norm(A) * norm(B) * (1.0 + 1e-12));
    }
}

TEST(DistId, Examples) {
    EXPECT_EQ(dist_id(MoebiusMap::identity()), 0.0);
    EXPECT_EQ(dist_id(MoebiusMap(-1.0, 0.0, 0.0, -1.0)), 0.0);
    // diag(e^{ie/2}, e^{-ie/2}) - Id has both rows of size |e^{ie/2} - 1|.
    Geodesic axis(BoundaryPoint(0.0), BoundaryPoint::infinity());
    for (double e : {1e-8, 1e-3, 0.4, 2.0})
        EXPECT_NEAR(dist_id(rotation_about(axis, e)), std::abs(std::exp(cplx(0, e / 2)) - 1.0), 1e-14);
}

TEST(PoincareExtend, Examples) {
    HPoint3 p(cplx(0.3, -1.2), 0.7);
    EXPECT_TRUE(near_point(poincare_extend(MoebiusMap::identity(), p), p, 1e-15));
    HPoint3 shifted = poincare_extend(MoebiusMap(1.0, 1.0, 0.0, 1.0), p);
    EXPECT_TRUE(near_point(shifted, HPoint3(p.Z() + 1.0, p.ht()), 1e-15));
    for (double phi : {0.3, 2.0, -1.0}) {
        MoebiusMap R(std::exp(cplx(0, phi / 2)), 0.0, 0.0, std::exp(cplx(0, -phi / 2)));
        EXPECT_TRUE(near_point(poincare_extend(R, p), HPoint3(std::exp(cplx(0, phi)) * p.Z(), p.ht()), 1e-14));
    }
}

TEST(PoincareExtend, IsometryAndHomomorphism) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        MoebiusMap A = random_map(rng), B = random_map(rng);
        HPoint3 p = random_point(rng), q = random_point(rng);
        double d = hyp_dist(p, q);
        EXPECT_NEAR(hyp_dist(poincare_extend(A, p), poincare_extend(A, q)), d, 1e-10 * std::max(1.0, d));
        HPoint3 x = poincare_extend(A * B, p), y = poincare_extend(A, poincare_extend(B, p));
        EXPECT_LT(hyp_dist(x, y), 1e-9);
    }
}

TEST(ActTangent, Examples) {
    std::mt19937_64 rng(14);
    std::normal_distribution<double> N(0.0, 1.0);
    UnitTangent u(random_point(rng), {N(rng), N(rng), N(rng)});
    UnitTangent same = act_tangent(MoebiusMap::identity(), u);
    EXPECT_LT(tangent_distance(u, same), 1e-12);

    MoebiusMap dilate(std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0));
    UnitTangent v = act_tangent(dilate, UnitTangent(HPoint3::j(), {0, 0, -1}));
    EXPECT_NEAR(v.base().ht(), 2.0, 1e-14);
    EXPECT_NEAR(v.direction().t, -1.0, 1e-14);
}

// Push a short step forward with the extension and compare directions.
TEST(ActTangent, MatchesFiniteDifferencePushforward) {
    std::mt19937_64 rng(15);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        MoebiusMap A = random_map(rng);
        HPoint3 p = random_point(rng);
        Vec3 d{N(rng), N(rng), N(rng)};
        UnitTangent u(p, d);
        UnitTangent w = act_tangent(A, u);
        double h = 1e-7 * p.ht();
        Vec3 e = u.direction();
        HPoint3 fwd(p.Z() + h * e.horizontal(), p.ht() + h * e.t);
        HPoint3 bwd(p.Z() - h * e.horizontal(), p.ht() - h * e.t);
        HPoint3 a = poincare_extend(A, fwd), b = poincare_extend(A, bwd);
        Vec3 fd{a.Z().real() - b.Z().real(), a.Z().imag() - b.Z().imag(), a.ht() - b.ht()};
        EXPECT_LT(angle_between(fd, w.direction()), 1e-6);
    }
}

TEST(RotationAbout, Examples) {
    Geodesic axis(BoundaryPoint(0.0), BoundaryPoint::infinity());
    for (double phi : {0.5, -2.0, 3.0}) {
        MoebiusMap R = rotation_about(axis, phi);
        EXPECT_LT(chordal_distance(R(cplx(1.0)), BoundaryPoint(std::exp(cplx(0, phi)))), 1e-14);
    }
    std::mt19937_64 rng(16);
    EXPECT_LT(dist_id(rotation_about(random_geodesic(rng), 0.0)), 1e-14);
    // The half-turn about the unit semicircle is z -> 1/z.
    MoebiusMap H = rotation_about(Geodesic(BoundaryPoint(-1.0), BoundaryPoint(1.0)), pi);
    for (cplx z : {cplx(2, 0), cplx(0.3, 0.4), cplx(-5, 1)})
        EXPECT_LT(chordal_distance(H(z), BoundaryPoint(1.0 / z)), 1e-14);
    EXPECT_THROW(rotation_about(Geodesic(BoundaryPoint(1.0), BoundaryPoint(cplx(1.0 + 1e-17))), 0.1),
                 GeometryError);
}

TEST(RotationAbout, FixesAxisPointwise) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        Geodesic g = random_geodesic(rng);
        MoebiusMap R = rotation_about(g, 1.3);
        EXPECT_LT(chordal_distance(R(g.from()), g.from()), 1e-10);
        EXPECT_LT(chordal_distance(R(g.to()), g.to()), 1e-10);
        HPoint3 foot = poincare_extend(axis_frame(g).inverse(), HPoint3::j());
        for (double d : {0.0, 0.5, 2.0}) {
            HPoint3 on = ray_point_at(Ray{foot, g.to()}, d);
            EXPECT_LT(hyp_dist(poincare_extend(R, on), on), 1e-8);
        }
    }
}

TEST(RotationAbout, AdditiveInAngle) {
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    for (int i = 0; i < 500; ++i) {
        Geodesic g = random_geodesic(rng);
        double a = U(rng), b = U(rng);
        EXPECT_LT(projective_distance(rotation_about(g, a) * rotation_about(g, b), rotation_about(g, a + b)), 1e-10);
    }
}

// Positive angles turn counterclockwise seen from the first endpoint.
TEST(RotationAbout, OrientationConvention) {
    Geodesic up(BoundaryPoint(0.0), BoundaryPoint::infinity());
    MoebiusMap R = rotation_about(up, pi / 2);
    EXPECT_LT(chordal_distance(R(1.0), BoundaryPoint(cplx(0, 1))), 1e-14);
    // Reversing the axis reverses the rotation.
    EXPECT_LT(projective_distance(rotation_about(up.reversed(), 0.7), rotation_about(up, -0.7)), 1e-14);
}

TEST(TranslationAlong, Examples) {
    Geodesic axis(BoundaryPoint(0.0), BoundaryPoint::infinity());
    for (double m : {0.1, 1.0, -2.0}) {
        MoebiusMap T = translation_along(axis, m);
        EXPECT_LT(chordal_distance(T(cplx(1.0, 2.0)), BoundaryPoint(std::exp(m) * cplx(1.0, 2.0))), 1e-13);
    }
    std::mt19937_64 rng(19);
    for (int i = 0; i < 200; ++i) {
        Geodesic g = random_geodesic(rng);
        EXPECT_LT(dist_id(translation_along(g, 0.0)), 1e-14);
        std::uniform_real_distribution<double> U(-3.0, 3.0);
        double phi = U(rng);
        EXPECT_LT(projective_distance(translation_along(g, cplx(0, phi)), rotation_about(g, phi)), 1e-12);
    }
}

TEST(TranslationAlong, TranslationLengthAndCommutation) {
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        Geodesic g = random_geodesic(rng);
        double c = U(rng), phi = U(rng);
        MoebiusMap T = translation_along(g, c), R = rotation_about(g, phi);
        HPoint3 foot = poincare_extend(axis_frame(g).inverse(), HPoint3::j());
        EXPECT_NEAR(hyp_dist(poincare_extend(T, foot), foot), std::abs(c), 1e-9);
        EXPECT_LT(projective_distance(T * R, R * T), 1e-10);
    }
}

TEST(TranslationAlong, MovesTowardSecondEndpoint) {
    Geodesic g(BoundaryPoint(-1.0), BoundaryPoint(1.0));
    HPoint3 moved = poincare_extend(translation_along(g, 0.5), HPoint3::j());
    EXPECT_GT(moved.Z().real(), 0.0);
}

// Lemma-style bound for rotations whose axis meets the ball of radius m0 at j.
TEST(RotationAbout, SmallRotationBound) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        double m0 = 2.0 * U(rng);
        double eps = (2.0 * U(rng) - 1.0) * 0.1;
        // An axis through a point at distance <= m0 from j.
        std::normal_distribution<double> N(0.0, 1.0);
        HPoint3 p = ray_point_at(Ray{HPoint3::j(), cplx(N(rng), N(rng))}, m0 * U(rng));
        Vec3 d{N(rng), N(rng), N(rng)};
        Geodesic g(ideal_endpoint(UnitTangent(p, d * -1.0)), ideal_endpoint(UnitTangent(p, d)));
        EXPECT_LE(dist_id(rotation_about(g, eps)), (1.0 + std::exp(2.0 * m0)) * std::abs(eps) / 2.0 + 1e-9);
    }
}
