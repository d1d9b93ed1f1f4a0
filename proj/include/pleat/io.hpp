#pragma once
// JSON and CSV for scenes, certificates and reports.  The scene schema is
// documented in docs/scene-format.md.

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bending.hpp"
#include "constants.hpp"
#include "motion.hpp"
#include "verify.hpp"

namespace pleat {

using json = nlohmann::json;

// Malformed input; the message names the offending line or field.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace io_detail {

inline std::string where(std::string const& path) { return path.empty() ? "/" : path; }

[[noreturn]] inline void fail(std::string const& path, std::string const& what) {
    throw InputError("field " + where(path) + ": " + what);
}

inline json const& field(json const& j, std::string const& key, std::string const& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "/" + key, "missing");
    return *it;
}

inline double number(json const& j, std::string const& path) {
    if (!j.is_number()) fail(path, "expected a number");
    double x = j.get<double>();
    if (!std::isfinite(x)) fail(path, "not finite");
    return x;
}

inline BoundaryPoint real_endpoint(json const& j, std::string const& path) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return BoundaryPoint::infinity();
        fail(path, "expected a number or \"inf\"");
    }
    return BoundaryPoint(number(j, path));
}

inline json endpoint_json(BoundaryPoint const& p) {
    if (p.is_infinite()) return "inf";
    return p.value().real();
}

inline HPoint3 plane_point(json const& j, std::string const& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected a point [x, t]");
    double x = number(j[0], path + "/0"), t = number(j[1], path + "/1");
    if (!(t > 0.0)) fail(path + "/1", "height must be positive");
    return HPoint3::plane(x, t);
}

inline json point_json(HPoint3 const& p) { return json::array({p.Z().real(), p.ht()}); }

inline cplx atom(json const& j, std::string const& path) {
    if (j.is_array()) {
        if (j.size() != 2) fail(path, "complex atoms are [re, im]");
        return {number(j[0], path + "/0"), number(j[1], path + "/1")};
    }
    return number(j, path);
}

inline CocycleKind kind_of(json const& j, std::string const& path) {
    if (!j.is_string()) fail(path, "expected \"real\", \"angle\" or \"complex\"");
    auto s = j.get<std::string>();
    if (s == "real") return CocycleKind::Real;
    if (s == "angle") return CocycleKind::Angle;
    if (s == "complex") return CocycleKind::Complex;
    fail(path, "unknown cocycle kind \"" + s + "\"");
}

inline std::size_t index(json const& j, std::string const& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
    return j.get<std::size_t>();
}

// Shortest text that reads back to the same double.
inline std::string shortest(double x) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_col(std::string const& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace io_detail

inline json parse_json(std::string const& text) {
    try {
        return json::parse(text);
    } catch (json::parse_error const& e) {
        auto [line, col] = io_detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw InputError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": malformed JSON");
    }
}

inline std::string read_file(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

//---------------------------------------------------------------------------//
// Scenes
//---------------------------------------------------------------------------//

inline Scene scene_from_json(json const& j) {
    using namespace io_detail;
    if (!j.is_object()) fail("", "a scene is a JSON object");
    Scene s;

    json const& jl = field(j, "leaves", "");
    if (!jl.is_array()) fail("/leaves", "expected an array");
    std::vector<Geodesic> leaves;
    for (std::size_t i = 0; i < jl.size(); ++i) {
        std::string p = "/leaves/" + std::to_string(i);
        if (!jl[i].is_array() || jl[i].size() != 2) fail(p, "a leaf is a pair of endpoints");
        BoundaryPoint a = real_endpoint(jl[i][0], p + "/0"), b = real_endpoint(jl[i][1], p + "/1");
        if (same_point(a, b, 1e-14)) fail(p, "endpoints coincide");
        leaves.emplace_back(a, b);
    }
    try {
        s.lamination = FiniteLamination(std::move(leaves));
    } catch (GeometryError const& e) {
        fail("/leaves", e.what());
    }

    CocycleKind kind = CocycleKind::Angle;
    if (j.contains("kind")) kind = kind_of(j["kind"], "/kind");
    json const& ja = field(j, "atoms", "");
    if (!ja.is_array()) fail("/atoms", "expected an array");
    std::vector<cplx> atoms;
    for (std::size_t i = 0; i < ja.size(); ++i) atoms.push_back(atom(ja[i], "/atoms/" + std::to_string(i)));
    try {
        s.cocycle = Cocycle(kind, std::move(atoms));
    } catch (GeometryError const& e) {
        fail("/atoms", e.what());
    }
    if (s.cocycle.size() != s.lamination.size())
        fail("/atoms", "expected " + std::to_string(s.lamination.size()) + " atoms, one per leaf");

    if (j.contains("base_plaque")) {
        s.base_plaque = index(j["base_plaque"], "/base_plaque");
        if (s.base_plaque >= s.lamination.plaque_count()) fail("/base_plaque", "out of range");
    }

    if (j.contains("ties") || j.contains("rectangles")) {
        json const& jt = field(j, "ties", "");
        json const& jr = field(j, "rectangles", "");
        if (!jt.is_array()) fail("/ties", "expected an array");
        if (!jr.is_array()) fail("/rectangles", "expected an array");
        std::vector<Segment> ties;
        for (std::size_t i = 0; i < jt.size(); ++i) {
            std::string p = "/ties/" + std::to_string(i);
            if (!jt[i].is_array() || jt[i].size() != 2) fail(p, "a tie is a pair of points");
            ties.push_back({plane_point(jt[i][0], p + "/0"), plane_point(jt[i][1], p + "/1")});
        }
        std::vector<Rectangle> rects;
        for (std::size_t i = 0; i < jr.size(); ++i) {
            std::string p = "/rectangles/" + std::to_string(i);
            json const& r = jr[i].is_object() ? field(jr[i], "ties", p) : jr[i];
            if (jr[i].is_object()) p += "/ties";
            if (!r.is_array() || r.size() != 2) fail(p, "a rectangle is a pair of tie indices");
            rects.push_back({index(r[0], p + "/0"), index(r[1], p + "/1")});
        }
        try {
            s.track = TrainTrack(std::move(ties), std::move(rects));
        } catch (GeometryError const& e) {
            fail("/rectangles", e.what());
        }
    }

    if (j.contains("rays")) {
        json const& jr = j["rays"];
        if (!jr.is_array()) fail("/rays", "expected an array");
        for (std::size_t i = 0; i < jr.size(); ++i) {
            std::string p = "/rays/" + std::to_string(i);
            Ray r{plane_point(field(jr[i], "origin", p), p + "/origin"),
                  real_endpoint(field(jr[i], "toward", p), p + "/toward")};
            s.rays.push_back(r);
        }
    }
    return s;
}

inline json scene_to_json(Scene const& s) {
    using namespace io_detail;
    json j;
    j["kind"] = to_string(s.cocycle.kind);
    json leaves = json::array();
    for (auto const& g : s.lamination.leaves()) leaves.push_back({endpoint_json(g.from()), endpoint_json(g.to())});
    j["leaves"] = leaves;
    json atoms = json::array();
    for (cplx a : s.cocycle.atoms) {
        if (s.cocycle.kind == CocycleKind::Complex)
            atoms.push_back({a.real(), a.imag()});
        else
            atoms.push_back(a.real());
    }
    j["atoms"] = atoms;
    j["base_plaque"] = s.base_plaque;
    if (s.track) {
        json ties = json::array(), rects = json::array();
        for (auto const& t : s.track->ties()) ties.push_back({point_json(t.a), point_json(t.b)});
        for (auto const& r : s.track->rectangles()) rects.push_back({r.tie_a, r.tie_b});
        j["ties"] = ties;
        j["rectangles"] = rects;
    }
    if (!s.rays.empty()) {
        json rays = json::array();
        for (auto const& r : s.rays) rays.push_back({{"origin", point_json(r.origin)}, {"toward", endpoint_json(r.toward)}});
        j["rays"] = rays;
    }
    return j;
}

inline Scene load_scene(std::string const& path) { return scene_from_json(parse_json(read_file(path))); }

//---------------------------------------------------------------------------//
// Reports
//---------------------------------------------------------------------------//

inline json matrix_json(MoebiusMap const& m) {
    auto e = m.entries();
    return json(std::vector<double>(e.begin(), e.end()));
}

inline json boundary_json(BoundaryPoint const& p) {
    if (p.is_infinite()) return "inf";
    cplx z = p.value();
    if (z.imag() == 0.0) return z.real();
    return json::array({z.real(), z.imag()});
}

inline json certificate_json(Certificate const& c) {
    json arcs = json::array();
    for (auto const& a : c.arcs) {
        arcs.push_back({{"s_a", a.arc.s_a},
                        {"s_b", a.arc.s_b},
                        {"a", io_detail::point_json(a.arc.a)},
                        {"b", io_detail::point_json(a.arc.b)},
                        {"plaque_a", a.arc.plaque_a},
                        {"plaque_b", a.arc.plaque_b},
                        {"case", a.arc.case_label},
                        {"pattern", a.arc.pattern},
                        {"nudged_a", a.arc.nudged_a},
                        {"nudged_b", a.arc.nudged_b},
                        {"vertex", a.arc.vertex},
                        {"matrix", matrix_json(a.map)},
                        {"nested", a.nesting.nested},
                        {"margin", a.nesting.margin}});
    }
    json j{{"origin", io_detail::point_json(c.ray.origin)},
           {"toward", boundary_json(c.ray.toward)},
           {"granted", c.granted},
           {"arcs", arcs}};
    j["min_margin"] = c.arcs.empty() ? json(nullptr) : json(c.min_margin);
    return j;
}

inline json battery_json(BatteryResult const& b) {
    json certs = json::array();
    for (auto const& c : b.certificates) certs.push_back(certificate_json(c));
    json j{{"granted", b.granted}, {"rays", b.certificates.size()}, {"certificates", certs}};
    j["min_margin"] = std::isfinite(b.min_margin) ? json(b.min_margin) : json(nullptr);
    return j;
}

// One line per arc:
// ray,arc,s_a,s_b,plaque_a,plaque_b,case,pattern,nudged,vertex,nested,margin
inline void write_certificate_csv(std::ostream& os, BatteryResult const& b) {
    os << "ray,arc,s_a,s_b,plaque_a,plaque_b,case,pattern,nudged,vertex,nested,margin\n";
    using io_detail::shortest;
    for (std::size_t r = 0; r < b.certificates.size(); ++r) {
        auto const& c = b.certificates[r];
        for (std::size_t i = 0; i < c.arcs.size(); ++i) {
            auto const& a = c.arcs[i];
            os << r << ',' << i << ',' << shortest(a.arc.s_a) << ',' << shortest(a.arc.s_b) << ',' << a.arc.plaque_a << ','
               << a.arc.plaque_b << ',' << a.arc.case_label << ',' << a.arc.pattern << ','
               << (a.arc.nudged_a || a.arc.nudged_b) << ',' << a.arc.vertex << ',' << a.nesting.nested << ','
               << shortest(a.nesting.margin) << '\n';
        }
    }
}

inline json log_json(LogValue const& v, int digits = 6) {
    return {{"sign", v.sign()}, {"log10", v.log10()}, {"display", v.display(digits)}};
}

inline json constants_json(CaseConstants const& k, int digits = 6) {
    json trace = json::array();
    for (auto const& t : k.trace)
        trace.push_back({{"name", t.name}, {"formula", t.formula}, {"value", log_json(t.value, digits)}});
    return {{"lStar", k.lStar},
            {"lLower", k.lLower},
            {"C", log_json(k.cOfL, digits)},
            {"C_prime", log_json(k.cPrime, digits)},
            {"C_double_prime", log_json(k.cDouble, digits)},
            {"eps_case1", log_json(k.epsCase1, digits)},
            {"eps_case2", log_json(k.epsCase2, digits)},
            {"eps_case3", log_json(k.epsCase3, digits)},
            {"eps_case5", log_json(k.epsCase5, digits)},
            {"w_star_tie_bound", log_json(k.wStarEq7, digits)},
            {"w_star_case3", log_json(k.wStarEq26, digits)},
            {"w_star", log_json(k.wStarBound, digits)},
            {"epsilon", log_json(k.epsilonFinal, digits)},
            {"delta", log_json(k.deltaFinal, digits)},
            {"trace", trace}};
}

// Columns: m0,epsilon,delta,w_star,log10_epsilon,log10_w_star
inline void write_table_csv(std::ostream& os, std::vector<TableRow> const& rows, int digits = 6) {
    os << "m0,epsilon,delta,w_star,log10_epsilon,log10_w_star\n";
    for (auto const& r : rows) {
        std::ostringstream l;
        l << std::setprecision(digits + 2) << r.epsilon.log10() << ',' << r.wStar.log10();
        os << io_detail::shortest(r.m0) << ',' << r.epsilon.display(digits) << ','
           << r.delta.display(digits) << ',' << r.wStar.display(digits) << ',' << l.str() << '\n';
    }
}

inline json optimum_json(LStarOptimum const& o, int digits = 6) {
    return {{"lStarOpt", o.lStarOpt}, {"epsilonOpt", log_json(o.epsilonOpt, digits)}, {"wStar", log_json(o.wStar, digits)}};
}

inline json verify_json(VerifyReport const& r) {
    json viol = json::array();
    for (auto const& v : r.dumps)
        viol.push_back({{"trial", v.trial}, {"slack", v.slack}, {"observed", v.observed}, {"bound", v.bound},
                        {"instance", v.instance}});
    json worst = std::isfinite(r.worstSlack) ? json(r.worstSlack) : json(nullptr);
    return {{"lemma", r.lemmaId},
            {"trials", r.trials},
            {"violations", r.violations},
            {"worstSlack", worst},
            {"seed", r.seed},
            {"elapsedSeconds", r.elapsed},
            {"boundaryDecileHits", r.boundaryDecileHits},
            {"dumps", viol}};
}

inline json motion_json(MotionScan const& m) {
    json grid = json::array();
    for (std::size_t i = 0; i < m.grid.size(); ++i)
        grid.push_back({{"w", {m.grid[i].real(), m.grid[i].imag()}}, {"granted", bool(m.granted[i])}, {"margin", m.margins[i]}});
    return {{"grid", grid}, {"radii", m.radii}, {"angles", m.angles}, {"granted0", bool(m.granted.at(0))},
            {"estimatedRadius", m.estimatedRadius}};
}

// Boundary images of sample points xi for every granted grid value:
// w_re,w_im,xi,image_re,image_im
inline void write_motion_cloud_csv(std::ostream& os, Scene const& scene, MotionScan const& m,
                                   std::vector<double> const& xis) {
    os << "w_re,w_im,xi,image_re,image_im\n";
    using io_detail::shortest;
    for (std::size_t i = 0; i < m.grid.size(); ++i) {
        if (!m.granted[i]) continue;
        for (double x : xis) {
            BoundaryPoint y = boundary_map(deformed_scene(scene, m.grid[i]), BoundaryPoint(x));
            if (y.is_infinite()) continue;
            os << shortest(m.grid[i].real()) << ',' << shortest(m.grid[i].imag()) << ',' << shortest(x) << ','
               << shortest(y.value().real()) << ',' << shortest(y.value().imag()) << '\n';
        }
    }
}

}  // namespace pleat
