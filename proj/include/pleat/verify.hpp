#pragma once
// Monte-Carlo checks of the quantitative lemmas.
//
// Every trial draws one instance inside the lemma's hypotheses (rejecting
// and redrawing invalid draws), evaluates both sides of the inequality and
// records the slack.  Trials get their own RNG stream derived from
// (seed, trial index), so reports do not depend on the thread count.
//
// Constrained parameters are stratified: parameter i of trial k is drawn
// from tenth (k / 10^i) % 10 of its admissible range, so the decile next to
// each hypothesis boundary receives a tenth of the samples.

#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <thread>

#include "bending.hpp"
#include "constants.hpp"

namespace pleat {

enum class LemmaId { L2_1, L5_1, L5_2, L5_3, L5_4, L5_5, L6_1, D5_1 };

inline std::vector<LemmaId> all_lemmas() {
    return {LemmaId::L2_1, LemmaId::L5_1, LemmaId::L5_2, LemmaId::L5_3,
            LemmaId::L5_4, LemmaId::L5_5, LemmaId::L6_1, LemmaId::D5_1};
}

inline std::string to_string(LemmaId id) {
    switch (id) {
        case LemmaId::L2_1: return "2.1";
        case LemmaId::L5_1: return "5.1";
        case LemmaId::L5_2: return "5.2";
        case LemmaId::L5_3: return "5.3";
        case LemmaId::L5_4: return "5.4";
        case LemmaId::L5_5: return "5.5";
        case LemmaId::L6_1: return "6.1";
        case LemmaId::D5_1: return "D5.1";
    }
    return "?";
}

inline LemmaId parse_lemma(std::string const& s) {
    for (auto id : all_lemmas())
        if (to_string(id) == s) return id;
    throw std::invalid_argument("unknown lemma id '" + s + "'");
}

// Optional pins; unset fields are drawn from the default ranges.
struct LemmaParams {
    std::optional<double> m0;   // default range [0.01, 2]
    std::optional<double> C;    // default range [0.05, 5]
    std::optional<double> eps;  // rotation angle (5.4, 5.5); default (-pi, pi]
};

struct Violation {
    std::uint64_t trial;
    double observed, bound, slack;
    std::map<std::string, double> instance;
};

struct VerifyReport {
    std::string lemmaId;
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    double worstSlack = HUGE_VAL;
    std::uint64_t seed = 0;
    double elapsed = 0;
    std::uint64_t boundaryDecileHits = 0;
    std::vector<Violation> dumps;  // first violations in trial order
};

inline constexpr double verify_slack = 1e-9;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Draw {
    std::mt19937_64 rng;
    std::uint64_t trial;

    Draw(std::uint64_t seed, std::uint64_t k)
        : rng(splitmix64(splitmix64(seed) ^ splitmix64(k + 0x632be59bd9b4e019ULL))), trial(k) {}

    double uniform(double a = 0.0, double b = 1.0) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    }
    double normal() { return std::normal_distribution<double>()(rng); }
    bool coin() { return uniform() < 0.5; }
    // Decile of parameter `which` assigned to this trial.
    int stratum(int which) const {
        std::uint64_t k = trial;
        for (int i = 0; i < which; ++i) k /= 10;
        return static_cast<int>(k % 10);
    }
    // Uniform in the stratum's tenth of [a, b).
    double stratified(int which, double a, double b) {
        int s = stratum(which);
        return a + (b - a) * (s + uniform()) / 10.0;
    }
};

struct Outcome {
    double observed;
    double bound;
    double slack;  // >= 0 when the inequality holds
    bool boundary;
    std::map<std::string, double> instance;
};

// Draw from the admissible region, retrying rejected draws.
template <typename F>
auto with_retries(F&& f) {
    for (int attempt = 0; attempt < 10000; ++attempt)
        if (auto r = f()) return *r;
    throw std::domain_error("empty admissible region for the given parameters");
}

inline double pick(std::optional<double> const& pinned, Draw& d, double a, double b) {
    return pinned ? *pinned : d.uniform(a, b);
}

inline Vec3 planar_dir(double psi) { return {std::cos(psi), 0.0, std::sin(psi)}; }

// Unit vector within angle alpha of -j.
inline Vec3 near_down(Draw& d, double alpha) {
    double a = d.uniform(0.0, alpha), b = d.uniform(0.0, 2 * pi);
    return {std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), -std::cos(a)};
}

// (p, u) with every component of the tangent distance to (e^{-m} j, -j) below r.
inline std::optional<UnitTangent> tangent_near(Draw& d, double m, double r) {
    double t0 = std::exp(-m);
    double rad = r * std::sqrt(d.uniform());
    cplx z = std::polar(rad, d.uniform(0.0, 2 * pi));
    double t = t0 + d.uniform(-r, r);
    if (!(t > 0.0)) return std::nullopt;
    UnitTangent pu(HPoint3(z, t), near_down(d, std::min(r, pi)));
    UnitTangent ref(HPoint3({0, 0}, t0), {0, 0, -1});
    if (!(tangent_distance(pu, ref) < r)) return std::nullopt;
    return pu;
}

// Element of PSL2(C) with ||A - Id|| < bound, biased toward the boundary.
inline std::optional<MoebiusMap> near_identity(Draw& d, double bound) {
    if (bound <= 0.0) return MoebiusMap::identity();
    cplx e[4];
    double n = 0.0;
    for (auto& x : e) {
        x = cplx(d.normal(), d.normal());
        n = std::max(n, std::abs(x));
    }
    double u = d.uniform();
    double scale = bound * (1.0 - u * u) / (2.0 * n);
    MoebiusMap A(1.0 + scale * e[0], scale * e[1], scale * e[2], 1.0 + scale * e[3]);
    if (!(dist_id(A) < bound)) return std::nullopt;
    return A;
}

// Planar geodesic at distance dist from j, in direction psi from j.
inline Geodesic geodesic_at_distance(double dist, double psi) {
    HPoint3 j = HPoint3::j();
    Vec3 dir = planar_dir(psi);
    HPoint3 q = dist > 0.0 ? ray_point_at(Ray{j, ideal_endpoint(UnitTangent(j, dir))}, dist) : j;
    Vec3 along = dist > 0.0 ? direction_toward(q, ideal_endpoint(UnitTangent(j, dir))) : dir;
    Vec3 perp{-along.t, 0.0, along.x};
    return {ideal_endpoint(UnitTangent(q, perp * -1.0)), ideal_endpoint(UnitTangent(q, perp))};
}

// Closest point of g to w.
inline HPoint3 foot_on(Geodesic const& g, HPoint3 const& w) {
    MoebiusMap M = axis_frame(g);
    HPoint3 q = poincare_extend(M, w);
    double r = std::hypot(std::abs(q.Z()), q.ht());
    return poincare_extend(M.inverse(), HPoint3({0, 0}, r));
}

// Random point of g inside the ball of radius m0 about j (g must meet it).
inline HPoint3 point_in_ball(Draw& d, Geodesic const& g, double m0) {
    HPoint3 j = HPoint3::j();
    HPoint3 f = foot_on(g, j);
    double dg = hyp_dist(j, f);
    double smax = std::acosh(std::max(1.0, std::cosh(m0) / std::cosh(dg)));
    double s = d.uniform(-smax, smax);
    MoebiusMap M = axis_frame(g);
    HPoint3 fq = poincare_extend(M, f);
    return poincare_extend(M.inverse(), HPoint3(fq.Z(), fq.ht() * std::exp(s)));
}

// Geometric long rectangle: ties of length <= 1/20 meeting the core geodesic
// at angles in [pi/4, 3pi/4]; all four vertex angles checked.
struct RandomRectangle {
    Segment k1, k2;
    std::array<HPoint3, 4> v;
    double w1, w2, core;
};

inline std::optional<RandomRectangle> random_rectangle(Draw& d, int stratum_param) {
    double w1 = d.stratified(stratum_param, 1e-4, max_tie_length);
    double w2 = d.uniform(1e-4, max_tie_length);
    double L = d.uniform(0.02, 2.5);
    double g1 = d.uniform(pi / 4, 3 * pi / 4), g2 = d.uniform(pi / 4, 3 * pi / 4);
    double psi = d.uniform(-pi / 2, pi / 2);
    HPoint3 c1 = HPoint3::plane(d.uniform(-2, 2), std::exp(d.uniform(-1, 1)));
    BoundaryPoint core_end = ideal_endpoint(UnitTangent(c1, planar_dir(psi)));
    HPoint3 c2 = ray_point_at(Ray{c1, core_end}, L);
    Vec3 at2 = direction_toward(c2, core_end);
    double psi2 = std::atan2(at2.t, at2.x);
    auto tie = [](HPoint3 c, double dirang, double w) {
        BoundaryPoint fwd = ideal_endpoint(UnitTangent(c, planar_dir(dirang)));
        BoundaryPoint back = ideal_endpoint(UnitTangent(c, planar_dir(dirang + pi)));
        return Segment{ray_point_at(Ray{c, fwd}, w / 2), ray_point_at(Ray{c, back}, w / 2)};
    };
    Segment k1 = tie(c1, psi + g1, w1), k2 = tie(c2, psi2 + g2, w2);
    std::array<HPoint3, 4> v{k1.a, k1.b, k2.b, k2.a};
    for (int i = 0; i < 4; ++i) {
        HPoint3 const& p = v[i];
        double ang = angle_between(direction_through(p, v[(i + 1) % 4]), direction_through(p, v[(i + 3) % 4]));
        if (ang < pi / 4 || ang > 3 * pi / 4) return std::nullopt;
    }
    return RandomRectangle{k1, k2, v, w1, w2, L};
}

inline Outcome lemma_2_1(Draw& d, LemmaParams const&) {
    auto R = with_retries([&] { return random_rectangle(d, 0); });
    double lstar = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int k = i + 1; k < 4; ++k) lstar = std::max(lstar, hyp_dist(R.v[i], R.v[k]));
    double dist = segment_distance(Segment{R.k1.a, R.k2.a}, Segment{R.k1.b, R.k2.b});
    double bound = std::min(R.w1, R.w2) / (20.0 * std::exp(lstar));
    return {dist, bound, dist - bound, d.stratum(0) == 9,
            {{"w1", R.w1}, {"w2", R.w2}, {"core", R.core}, {"lstar", lstar}}};
}

inline Outcome lemma_6_1(Draw& d, LemmaParams const&) {
    auto R = with_retries([&] { return random_rectangle(d, 0); });
    double l = segment_distance(R.k1, R.k2);
    double x = std::max(R.w1, R.w2);
    // Arcs P1 -> Q1 and P2 -> Q2 with P1 before P2 on k1 and Q1 after Q2 on k2
    // cross inside the (convex) rectangle.
    double s1 = d.uniform(0, 1), s2 = d.uniform(0, 1), t1 = d.uniform(0, 1), t2 = d.uniform(0, 1);
    if (s1 > s2) std::swap(s1, s2);
    if (t1 < t2) std::swap(t1, t2);
    auto on = [](Segment const& k, double f) { return k.point_at(f * k.length()); };
    Segment a1{on(R.k1, s1), on(R.k2, t1)}, a2{on(R.k1, s2), on(R.k2, t2)};
    auto hit = cross_ray(a1.ray(), a2);
    if (!hit || hit->s >= a1.length()) throw NumericalError("crossing arcs in a convex rectangle did not meet");
    HPoint3 X = hit->point;
    double ang = angle_between(direction_through(X, a1.b), direction_through(X, a2.b));
    double phi = std::min(ang, pi - ang);
    double bound = pi / 2.0 / std::tanh(l / 2.0) * x;
    return {phi, bound, bound - phi, d.stratum(0) == 9, {{"l", l}, {"x", x}, {"core", R.core}}};
}

struct Sample51 {
    double m0, C, eta, m;
    MoebiusMap A;
    UnitTangent pu;
};

inline Sample51 sample_small_action(Draw& d, LemmaParams const& P, bool nested_variant) {
    return with_retries([&]() -> std::optional<Sample51> {
        double m0 = pick(P.m0, d, 0.01, 2.0);
        double C = pick(P.C, d, 0.05, 5.0);
        double cap = nested_variant ? eta_dprime(m0, C).to_double() : eta_prime(m0, C).to_double();
        double eta = d.stratified(0, 0.0, cap);
        double m = m0 * (1.0 - d.uniform());  // (0, m0]
        auto A = near_identity(d, eta * m);
        if (!A) return std::nullopt;
        auto pu = tangent_near(d, m, C * eta * m);
        if (!pu) return std::nullopt;
        return Sample51{m0, C, eta, m, *A, *pu};
    });
}

inline Outcome lemma_5_1(Draw& d, LemmaParams const& P) {
    Sample51 s = sample_small_action(d, P, false);
    UnitTangent ref(HPoint3({0, 0}, std::exp(-s.m)), {0, 0, -1});
    double obs = tangent_distance(act_tangent(s.A, s.pu), ref);
    double bound = 2.0 * pi * (60.0 * s.C + 9.0) * s.eta * s.m;
    return {obs, bound, bound - obs, d.stratum(0) == 9,
            {{"m0", s.m0}, {"C", s.C}, {"eta", s.eta}, {"m", s.m}}};
}

inline Outcome lemma_5_2(Draw& d, LemmaParams const& P) {
    Sample51 s = sample_small_action(d, P, true);
    UnitTangent img = act_tangent(s.A, s.pu);
    Cone outer(HPoint3::j(), BoundaryPoint(0.0), pi / 2);
    Cone inner(img.base(), ideal_endpoint(img), pi / 2);
    NestingResult n = shadow_nested(outer, inner);
    // observed: how far the inner shadow reaches in the unit-disk frame.
    double obs = 1.0 - n.margin;
    return {obs, 1.0, n.margin, d.stratum(0) == 9,
            {{"m0", s.m0}, {"C", s.C}, {"eta", s.eta}, {"m", s.m}}};
}

inline Outcome derivative_bounds(Draw& d, LemmaParams const& P) {
    Sample51 s = sample_small_action(d, P, false);
    HPoint3 p = s.pu.base();
    double h = 1e-6 * p.ht();
    auto F = [&](double dx, double dy, double dt) {
        HPoint3 q = poincare_extend(s.A, HPoint3(p.Z() + cplx(dx, dy), p.ht() + dt));
        return Vec3{q.Z().real(), q.Z().imag(), q.ht()};
    };
    Vec3 dx = (F(h, 0, 0) - F(-h, 0, 0)) * (0.5 / h);
    Vec3 dy = (F(0, h, 0) - F(0, -h, 0)) * (0.5 / h);
    Vec3 dt = (F(0, 0, h) - F(0, 0, -h)) * (0.5 / h);
    double em = s.eta * s.m;
    const double head = 1.1;
    double horiz = std::max({std::abs(dx.x), std::abs(dy.x), std::abs(dx.y), std::abs(dy.y)});
    double vert_in_h = std::max(std::abs(dt.x), std::abs(dt.y));
    double h_in_xy = std::max(std::abs(dx.t), std::abs(dy.t));
    double slack = std::min({head * 15.0 - horiz, head * 9.0 * em - vert_in_h, head * 12.0 * em - h_in_xy,
                             dt.t - (1.0 - head * 6.0 * em)});
    return {-slack, 0.0, slack, d.stratum(0) == 9,
            {{"m0", s.m0}, {"C", s.C}, {"eta", s.eta}, {"m", s.m}, {"dAx", horiz},
             {"dA12h", vert_in_h}, {"dA3xy", h_in_xy}, {"dA3h", dt.t}}};
}

inline Outcome lemma_5_3(Draw& d, LemmaParams const& P) {
    return with_retries([&]() -> std::optional<Outcome> {
        double m0 = pick(P.m0, d, 0.01, 2.0);
        double m = d.uniform(0.0, m0);
        double theta = d.stratified(0, 0.0, std::exp(-m0) / 16.0);
        double delta = d.stratified(1, 0.0, 0.25);
        double t0 = std::exp(-m);
        HPoint3 c({0, 0}, t0);
        Vec3 along{std::sin(theta), 0.0, std::cos(theta)};
        Geodesic h(ideal_endpoint(UnitTangent(c, along * -1.0)), ideal_endpoint(UnitTangent(c, along)));
        if (d.coin()) h = h.reversed();
        auto pu = tangent_near(d, m, std::max(delta, 1e-300));
        if (!pu) return std::nullopt;
        UnitTangent ref(c, {0, 0, -1});
        double dd = tangent_distance(*pu, ref);
        double phi = pick(P.eps, d, -pi, pi);
        double obs = tangent_distance(act_tangent(rotation_about(h, phi), *pu), ref);
        double bound = 20.0 * dd + 40.0 * std::sqrt(2.0) * std::exp(m0) * theta;
        return Outcome{obs, bound, bound - obs, d.stratum(0) == 9 || d.stratum(1) == 9,
                       {{"m0", m0}, {"m", m}, {"theta", theta}, {"delta", dd}, {"phi", phi}}};
    });
}

inline Outcome lemma_5_4(Draw& d, LemmaParams const& P) {
    double m0 = pick(P.m0, d, 0.01, 2.0);
    double dist = d.stratified(0, 0.0, m0);
    Geodesic g = geodesic_at_distance(dist, d.uniform(0, 2 * pi));
    if (d.coin()) g = g.reversed();
    double eps = pick(P.eps, d, -pi, pi);
    double obs = dist_id(rotation_about(g, eps));
    double bound = (1.0 + std::exp(2.0 * m0)) * std::abs(eps) / 2.0;
    return {obs, bound, bound - obs, d.stratum(0) == 9, {{"m0", m0}, {"dist", dist}, {"eps", eps}}};
}

inline Outcome lemma_5_5(Draw& d, LemmaParams const& P) {
    return with_retries([&]() -> std::optional<Outcome> {
        double m0 = pick(P.m0, d, 0.01, 2.0);
        double dist = d.stratified(0, 0.0, m0);
        Geodesic g1 = geodesic_at_distance(dist, d.uniform(0, 2 * pi));
        BoundaryPoint t = d.coin() ? g1.to() : g1.from();
        // g2: through a random point of the ball, ending at t.
        double rho = m0 * std::sqrt(d.uniform());
        HPoint3 j = HPoint3::j();
        HPoint3 P2 = rho > 0 ? ray_point_at(Ray{j, ideal_endpoint(UnitTangent(j, planar_dir(d.uniform(0, 2 * pi))))}, rho)
                             : j;
        Vec3 back = direction_toward(P2, t) * -1.0;
        BoundaryPoint other = ideal_endpoint(UnitTangent(P2, back));
        if (same_point(other, t, 1e-9)) return std::nullopt;
        BoundaryPoint o1 = same_point(g1.to(), t) ? g1.from() : g1.to();
        bool toward = d.coin();
        Geodesic G1 = toward ? Geodesic(o1, t) : Geodesic(t, o1);
        Geodesic G2 = toward ? Geodesic(other, t) : Geodesic(t, other);
        HPoint3 A = point_in_ball(d, G1, m0);
        HPoint3 B = d.coin() ? foot_on(G2, A) : point_in_ball(d, G2, m0);
        if (hyp_dist(B, j) > m0) return std::nullopt;
        double s = hyp_dist(A, B);
        double eps = pick(P.eps, d, -pi, pi);
        double obs = dist_id(rotation_about(G1, eps) * rotation_about(G2, -eps));
        double bound = 2.0 * std::exp(m0) * (1.0 + std::exp(m0)) * s * std::abs(eps);
        return Outcome{obs, bound, bound - obs, d.stratum(0) == 9,
                       {{"m0", m0}, {"dist", dist}, {"s", s}, {"eps", eps}, {"toward", toward ? 1.0 : 0.0}}};
    });
}

inline Outcome run_trial(LemmaId id, Draw& d, LemmaParams const& P) {
    switch (id) {
        case LemmaId::L2_1: return lemma_2_1(d, P);
        case LemmaId::L5_1: return lemma_5_1(d, P);
        case LemmaId::L5_2: return lemma_5_2(d, P);
        case LemmaId::L5_3: return lemma_5_3(d, P);
        case LemmaId::L5_4: return lemma_5_4(d, P);
        case LemmaId::L5_5: return lemma_5_5(d, P);
        case LemmaId::L6_1: return lemma_6_1(d, P);
        case LemmaId::D5_1: return derivative_bounds(d, P);
    }
    throw std::invalid_argument("unknown lemma");
}

}  // namespace detail

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

inline VerifyReport verify_lemma(LemmaId id, std::uint64_t trials, std::uint64_t seed,
                                 LemmaParams const& params = {}, unsigned threads = 0,
                                 std::size_t max_dumps = 20) {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (threads == 0) threads = default_threads();
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
    auto t0 = std::chrono::steady_clock::now();

    struct Partial {
        std::uint64_t violations = 0, boundary = 0;
        double worst = HUGE_VAL;
        std::vector<Violation> dumps;
        std::exception_ptr error;
    };
    std::vector<Partial> parts(threads);
    auto work = [&](unsigned w) {
        Partial& p = parts[w];
        try {
            for (std::uint64_t k = w; k < trials; k += threads) {
                detail::Draw d(seed, k);
                detail::Outcome o = detail::run_trial(id, d, params);
                p.worst = std::min(p.worst, o.slack);
                p.boundary += o.boundary;
                if (o.slack < -verify_slack || !std::isfinite(o.slack)) {
                    ++p.violations;
                    if (p.dumps.size() < max_dumps) p.dumps.push_back({k, o.observed, o.bound, o.slack, o.instance});
                }
            }
        } catch (...) {
            p.error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();

    VerifyReport rep;
    rep.lemmaId = to_string(id);
    rep.trials = trials;
    rep.seed = seed;
    for (auto& p : parts) {
        if (p.error) std::rethrow_exception(p.error);
        rep.violations += p.violations;
        rep.boundaryDecileHits += p.boundary;
        rep.worstSlack = std::min(rep.worstSlack, p.worst);
        rep.dumps.insert(rep.dumps.end(), p.dumps.begin(), p.dumps.end());
    }
    std::sort(rep.dumps.begin(), rep.dumps.end(), [](auto const& a, auto const& b) { return a.trial < b.trial; });
    if (rep.dumps.size() > max_dumps) rep.dumps.resize(max_dumps);
    rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ||phi_n - phi_{n+1}|| for consecutive refinement levels, where phi_n
// realizes the level-n scene from its first plaque to its last.
inline std::vector<double> refinement_cauchy_check(Cocycle const& c, int levels) {
    if (!c.refinement) throw std::invalid_argument("cocycle has no refinement generator");
    auto phi = [&](int n) {
        Level lv = c.refinement(n);
        Scene s{lv.lamination, lv.cocycle, std::nullopt, 0, {}};
        return realize(s, 0, s.lamination.plaque_count() - 1);
    };
    std::vector<double> steps;
    MoebiusMap prev = phi(0);
    for (int n = 0; n < levels; ++n) {
        MoebiusMap next = phi(n + 1);
        steps.push_back(projective_distance(prev, next));
        prev = next;
    }
    return steps;
}

}  // namespace pleat
