#pragma once
// The complex family of deformations w -> w * alpha of a real (shear)
// cocycle alpha: the certificate is scanned over a polar grid of w, and the
// boundary map is checked to be holomorphic in w.
//
// The realized deformation is the difference cocycle w alpha relative to the
// undeformed plane, so w = 0 is the identity; Re w rescales the shear and
// Im w bends by Im(w) alpha.

#include <thread>

#include "bending.hpp"

namespace pleat {

inline Scene deformed_scene(Scene const& base, cplx w) {
    if (base.cocycle.kind != CocycleKind::Real)
        throw GeometryError("motion needs a real-valued cocycle");
    Scene s = base;
    std::vector<cplx> atoms;
    atoms.reserve(base.cocycle.size());
    for (cplx a : base.cocycle.atoms) atoms.push_back(w * a.real());
    s.cocycle = Cocycle(CocycleKind::Complex, std::move(atoms));
    return s;
}

struct MotionScan {
    std::vector<cplx> grid;  // grid[0] = 0, then radius-major
    std::vector<bool> granted;
    std::vector<double> margins;
    std::vector<double> radii;
    int angles = 16;
    double estimatedRadius = 0.0;
};

// Radii rMax * 10^{-3 (res-1-k)/(res-1)}, k = 0..res-1, times `angles`
// directions, plus w = 0.  The radius estimate is the largest grid radius
// below the first withheld one, over all directions.
inline MotionScan motion_scan(Scene const& scene, double rMax, int resolution, int angles = 16,
                              unsigned threads = 0) {
    if (!(rMax > 0.0) || resolution < 1 || angles < 1)
        throw std::invalid_argument("motion_scan needs rMax > 0, resolution >= 1, angles >= 1");
    if (scene.rays.empty()) throw GeometryError("scene has no ray battery");
    MotionScan out;
    out.angles = angles;
    for (int k = 0; k < resolution; ++k)
        out.radii.push_back(resolution == 1 ? rMax
                                            : rMax * std::pow(10.0, -3.0 * (resolution - 1 - k) / (resolution - 1)));
    out.grid.push_back(0.0);
    for (double r : out.radii)
        for (int a = 0; a < angles; ++a) out.grid.push_back(std::polar(r, 2.0 * pi * a / angles));

    std::size_t n = out.grid.size();
    std::vector<char> ok(n);
    std::vector<double> margin(n);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](unsigned w) {
        try {
            for (std::size_t i = w; i < n; i += threads) {
                auto res = certify_battery(deformed_scene(scene, out.grid[i]), scene.rays);
                ok[i] = res.granted;
                margin[i] = res.min_margin;
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    out.granted.assign(ok.begin(), ok.end());
    out.margins = margin;
    if (!out.granted[0]) return out;
    double est = rMax;
    for (int a = 0; a < angles; ++a) {
        double last = 0.0;
        for (int k = 0; k < resolution; ++k) {
            if (!out.granted[1 + static_cast<std::size_t>(k) * angles + a]) break;
            last = out.radii[k];
        }
        est = std::min(est, last);
    }
    out.estimatedRadius = est;
    return out;
}

// Image of xi under the boundary map of the deformation by w, as an affine
// value (finite by assumption on xi).
inline cplx motion_image(Scene const& scene, cplx w, BoundaryPoint const& xi) {
    BoundaryPoint y = boundary_map(deformed_scene(scene, w), xi);
    if (std::abs(y.v()) < 1e-300) throw GeometryError("image of xi is at infinity");
    return y.value();
}

struct CRResidual {
    double dbar;  // |df/d(conj w)|
    double d;     // |df/dw|
};

// Central differences in the real and imaginary directions of w.
inline CRResidual cr_residual(Scene const& scene, cplx w, BoundaryPoint const& xi, double h) {
    for (auto const& g : scene.lamination.leaves())
        if (same_point(g.from(), xi, 1e-12) || same_point(g.to(), xi, 1e-12))
            throw GeometryError("xi is a leaf endpoint");
    cplx fx = (motion_image(scene, w + h, xi) - motion_image(scene, w - h, xi)) / (2.0 * h);
    cplx fy = (motion_image(scene, w + cplx(0, h), xi) - motion_image(scene, w - cplx(0, h), xi)) / (2.0 * h);
    cplx dbar = 0.5 * (fx + cplx(0, 1) * fy);
    cplx d = 0.5 * (fx - cplx(0, 1) * fy);
    return {std::abs(dbar), std::abs(d)};
}

}  // namespace pleat
