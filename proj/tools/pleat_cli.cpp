// pleat_cli: scenes, certificates, lemma checks, constants and motion scans.
//
// Exit status: 0 success / certificate granted, 1 certificate withheld or
// violations found, 2 usage or input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include <pleat/pleat.hpp>

using namespace pleat;

namespace {

constexpr int kOk = 0, kFailed = 1, kInputError = 2;

struct Global {
    std::string out;
    unsigned threads = 0;
    int precision = 6;
};

class Output {
  public:
    explicit Output(std::string const& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InputError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void emit(Global const& g, json const& j) {
    Output o(g.out);
    o.stream() << j.dump(2) << '\n';
}

std::vector<double> read_m0_csv(std::string const& path) {
    std::istringstream in(read_file(path));
    std::vector<double> m0s;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto comma = line.find(',');
        std::string cell = line.substr(0, comma);
        cell.erase(0, cell.find_first_not_of(" \t\r"));
        cell.erase(cell.find_last_not_of(" \t\r") + 1);
        if (cell.empty() || cell == "m0") continue;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(cell, &used);
        } catch (std::exception const&) {
            used = 0;
        }
        if (used != cell.size() || !(v > 0.0) || !std::isfinite(v))
            throw InputError(path + ": line " + std::to_string(lineno) + ": expected a positive m0, got '" + cell + "'");
        m0s.push_back(v);
    }
    if (m0s.empty()) throw InputError(path + ": no m0 values");
    return m0s;
}

Scene demo_scene(std::string const& kind, std::uint64_t seed, std::size_t rays) {
    std::mt19937_64 rng(seed);
    if (kind == "theorem") return make_theorem_scene(rng, rays).scene;
    if (kind == "zero") {
        Scene s = make_theorem_scene(rng, rays).scene;
        s.cocycle = Cocycle::zero(s.cocycle.kind, s.cocycle.size());
        return s;
    }
    if (kind == "stress") return make_stress_scene(rng);
    if (kind == "motion") return make_motion_demo(rng, rays);
    throw InputError("unknown demo scene '" + kind + "'");
}

int scene_validate(Global const& g, std::string const& path) {
    Scene s = load_scene(path);
    json j{{"leaves", s.lamination.size()},
           {"plaques", s.lamination.plaque_count()},
           {"kind", to_string(s.cocycle.kind)},
           {"base_plaque", s.base_plaque},
           {"rays", s.rays.size()}};
    int code = kOk;
    if (s.track) {
        TrackMetrics m = track_metrics(*s.track);
        GeometricReport rep = is_geometric(*s.track, s.lamination);
        json viol = json::array();
        for (auto const& v : rep.violations)
            viol.push_back({{"kind", v.kind}, {"tie", v.tie}, {"leaf", v.leaf}, {"value", v.value}});
        j["track"] = {{"ties", s.track->ties().size()},
                      {"rectangles", s.track->rectangles().size()},
                      {"l_star", m.lStar},
                      {"l_lower", m.lLower},
                      {"w_star", m.wStar},
                      {"w_lower", m.wLower},
                      {"geometric", rep.ok},
                      {"w_bound_holds", theorem_w_bound(m)},
                      {"violations", viol}};
        json arcs = json::array();
        for (std::size_t i = 0; i < s.rays.size(); ++i) {
            try {
                auto div = arc_division(s, s.rays[i]);
                arcs.push_back({{"ray", i}, {"arcs", div.arcs.size()}, {"leaf_crossings", div.leaf_crossings.size()}});
            } catch (GeometryError const& e) {
                arcs.push_back({{"ray", i}, {"error", e.what()}});
                code = kFailed;
            }
        }
        j["ray_division"] = arcs;
        if (!rep.ok) code = kFailed;
    }
    j["valid"] = code == kOk;
    emit(g, j);
    return code;
}

int bend(Global const& g, std::string const& path, std::optional<std::size_t> from, std::optional<std::size_t> to,
         std::vector<double> const& xis) {
    Scene s = load_scene(path);
    std::size_t P = from.value_or(s.base_plaque);
    std::size_t Q = to.value_or(s.lamination.plaque_count() - 1);
    if (P >= s.lamination.plaque_count() || Q >= s.lamination.plaque_count())
        throw InputError("plaque index out of range (the scene has " + std::to_string(s.lamination.plaque_count()) +
                         " plaques)");
    MoebiusMap phi = realize(s, P, Q);
    json images = json::array();
    for (double x : xis) images.push_back({{"xi", x}, {"image", boundary_json(boundary_map(s, x))}});
    emit(g, {{"from", P}, {"to", Q}, {"matrix", matrix_json(phi)}, {"dist_id", dist_id(phi)}, {"images", images}});
    return kOk;
}

int certify(Global const& g, std::string const& path, std::string const& format) {
    Scene s = load_scene(path);
    if (!s.track) throw InputError(path + ": certify needs ties and rectangles");
    if (s.rays.empty()) throw InputError(path + ": certify needs a ray battery");
    BatteryResult b;
    try {
        b = certify_battery(s, s.rays);
    } catch (GeometryError const& e) {
        throw InputError(std::string("ray battery: ") + e.what());
    }
    if (format == "csv") {
        Output o(g.out);
        write_certificate_csv(o.stream(), b);
    } else {
        emit(g, battery_json(b));
    }
    return b.granted ? kOk : kFailed;
}

int verify(Global const& g, std::string const& lemma, std::uint64_t trials, std::uint64_t seed, LemmaParams const& p,
           std::string const& dump_dir) {
    std::vector<LemmaId> ids;
    if (lemma == "all")
        ids = all_lemmas();
    else
        try {
            ids = {parse_lemma(lemma)};
        } catch (std::invalid_argument const& e) {
            throw InputError(e.what());
        }
    json reports = json::array();
    std::uint64_t violations = 0;
    for (LemmaId id : ids) {
        VerifyReport r;
        try {
            r = verify_lemma(id, trials, seed, p, g.threads);
        } catch (std::domain_error const& e) {
            throw InputError("lemma " + to_string(id) + ": " + e.what());
        }
        violations += r.violations;
        json j = verify_json(r);
        if (!dump_dir.empty() && !r.dumps.empty()) {
            std::string file = dump_dir + "/violations_" + r.lemmaId + ".json";
            std::ofstream out(file);
            if (!out) throw InputError("cannot write " + file);
            out << j["dumps"].dump(2) << '\n';
        }
        reports.push_back(std::move(j));
    }
    emit(g, ids.size() == 1 ? reports[0] : json{{"reports", reports}, {"violations", violations}});
    return violations == 0 ? kOk : kFailed;
}

int motion(Global const& g, std::string const& path, double rmax, int res, int angles, std::string const& csv) {
    Scene s = load_scene(path);
    if (s.cocycle.kind != CocycleKind::Real) throw InputError(path + ": motion needs a real (shear) cocycle");
    if (!s.track || s.rays.empty()) throw InputError(path + ": motion needs a track and a ray battery");
    MotionScan m = motion_scan(s, rmax, res, angles, g.threads);
    if (!csv.empty()) {
        std::ofstream out(csv);
        if (!out) throw InputError("cannot write " + csv);
        // Sample points: midway between consecutive leaf endpoints on both sides.
        std::vector<double> xis;
        auto const& leaves = s.lamination.leaves();
        for (std::size_t i = 0; i + 1 < leaves.size(); ++i)
            for (auto end : {&Geodesic::from, &Geodesic::to}) {
                BoundaryPoint a = (leaves[i].*end)(), b = (leaves[i + 1].*end)();
                if (!a.is_infinite() && !b.is_infinite()) xis.push_back(0.5 * (a.value().real() + b.value().real()));
            }
        write_motion_cloud_csv(out, s, m, xis);
    }
    emit(g, motion_json(m));
    return m.granted[0] ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bending maps, injectivity certificates and constants for pleated planes"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Global g;
    app.add_option("--out", g.out, "Write the report here instead of stdout");
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--precision", g.precision, "Significant digits in displayed constants")
        ->check(CLI::Range(1, 17));

    // scene validate | scene demo
    auto* scene = app.add_subcommand("scene", "Scene files");
    scene->require_subcommand(1);
    std::string scene_path;
    auto* validate = scene->add_subcommand("validate", "Load a scene and check its track");
    validate->add_option("scene", scene_path, "Scene JSON")->required();
    auto* demo = scene->add_subcommand("demo", "Write a generated demo scene");
    std::string demo_kind = "theorem";
    std::uint64_t demo_seed = 42;
    std::size_t demo_rays = 20;
    demo->add_option("--kind", demo_kind, "zero | theorem | stress | motion")
        ->check(CLI::IsMember({"zero", "theorem", "stress", "motion"}));
    demo->add_option("--seed", demo_seed, "Generator seed");
    demo->add_option("--rays", demo_rays, "Rays in the battery")->check(CLI::PositiveNumber);

    auto* bend_cmd = app.add_subcommand("bend", "Developing map between two plaques");
    std::optional<std::size_t> from, to;
    std::vector<double> xis;
    bend_cmd->add_option("--scene", scene_path, "Scene JSON")->required();
    bend_cmd->add_option("--from", from, "Start plaque (default: the base plaque)");
    bend_cmd->add_option("--to", to, "End plaque (default: the last plaque)");
    bend_cmd->add_option("--xi", xis, "Boundary points to map");

    auto* cert = app.add_subcommand("certify", "Run the nesting certificate over the scene's rays");
    std::string format = "json";
    cert->add_option("--scene", scene_path, "Scene JSON")->required();
    cert->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    auto* ver = app.add_subcommand("verify", "Monte-Carlo check of a lemma's inequality");
    std::string lemma = "all", dump_dir;
    std::uint64_t trials = 100000, seed = 42;
    std::optional<double> m0, C, eps;
    ver->add_option("--lemma", lemma, "2.1 | 5.1 | 5.2 | 5.3 | 5.4 | 5.5 | 6.1 | D5.1 | all");
    ver->add_option("--trials", trials, "Trials per lemma")->check(CLI::PositiveNumber);
    ver->add_option("--seed", seed, "Base seed");
    ver->add_option("--m0", m0, "Pin m0");
    ver->add_option("--C", C, "Pin C");
    ver->add_option("--eps", eps, "Pin the rotation angle");
    ver->add_option("--dump", dump_dir, "Directory for violation dumps")->check(CLI::ExistingDirectory);

    auto* cons = app.add_subcommand("constants", "Case constants for given l* and l_*");
    double lstar = 0.2, llower = 0.05;
    cons->add_option("--lstar", lstar, "l*");
    cons->add_option("--llower", llower, "l_*");

    auto* tab = app.add_subcommand("table", "Epsilon and w* over a list of m0 = l* (l_* = m0/4)");
    std::string rows = "default";
    tab->add_option("--rows", rows, "'default' or a CSV file with one m0 per line");

    auto* opt = app.add_subcommand("optimize", "Maximize epsilon over l*");
    double lo = 1e-6, hi = 2.0;
    int grid = 400;
    opt->add_option("--lo", lo, "Lower end of the l* range")->check(CLI::PositiveNumber);
    opt->add_option("--hi", hi, "Upper end of the l* range")->check(CLI::PositiveNumber);
    opt->add_option("--grid", grid, "Coarse grid size")->check(CLI::Range(3, 100000));

    auto* mot = app.add_subcommand("motion", "Scan the certificate over w * alpha");
    double rmax = 0.1;
    int res = 16, angles = 16;
    std::string csv;
    mot->add_option("--scene", scene_path, "Scene JSON with a real cocycle")->required();
    mot->add_option("--rmax", rmax, "Largest |w|")->check(CLI::PositiveNumber);
    mot->add_option("--res", res, "Radii in the grid")->check(CLI::Range(1, 1000));
    mot->add_option("--angles", angles, "Directions in the grid")->check(CLI::Range(1, 1000));
    mot->add_option("--csv", csv, "Write boundary images of granted w here");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*validate) return scene_validate(g, scene_path);
        if (*demo) {
            emit(g, scene_to_json(demo_scene(demo_kind, demo_seed, demo_rays)));
            return kOk;
        }
        if (*bend_cmd) return bend(g, scene_path, from, to, xis);
        if (*cert) return certify(g, scene_path, format);
        if (*ver) {
            LemmaParams p{m0, C, eps};
            return verify(g, lemma, trials, seed, p, dump_dir);
        }
        if (*cons) {
            if (!(llower > 0.0) || !(llower <= lstar)) throw InputError("need 0 < llower <= lstar");
            emit(g, constants_json(case_constants(lstar, llower), g.precision));
            return kOk;
        }
        if (*tab) {
            auto m0s = rows == "default" ? default_table_m0() : read_m0_csv(rows);
            auto t = table(m0s);
            Output o(g.out);
            write_table_csv(o.stream(), t, g.precision);
            return kOk;
        }
        if (*opt) {
            if (!(lo < hi)) throw InputError("need lo < hi");
            emit(g, optimum_json(optimize_lstar(lo, hi, grid), g.precision));
            return kOk;
        }
        if (*mot) return motion(g, scene_path, rmax, res, angles, csv);
    } catch (InputError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (GeometryError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
