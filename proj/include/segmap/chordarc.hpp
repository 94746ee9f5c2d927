#pragma once
// Two closed-form boundary-singular maps (a logarithmic spiral twist and a
// half-power cusp), exact Wirtinger gradients with finite-difference
// cross-checks, chord-arc ratio probes of their image curves, and the
// Royden-distance transport of an approximation under postcomposition.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "segmap/energy.hpp"
#include "segmap/harmonic.hpp"
#include "segmap/numerics.hpp"

namespace segmap {

enum class ExampleMap {
    spiral,  // z -> |z - 1|^{4i} (z - 1), continuous at z = 1 with value 0
    cusp,    // z -> (z + 1)^2 / |z + 1|, continuous at z = -1 with value 0
};

[[nodiscard]] inline cplx eval_example_map(ExampleMap kind, cplx z) {
    if (kind == ExampleMap::spiral) {
        const cplx u = z - 1.0;
        const double r = std::abs(u);
        if (r == 0.0) return {};
        // |u|^{4i} = e^{4 i log |u|}
        return std::polar(1.0, 4.0 * std::log(r)) * u;
    }
    const cplx v = z + 1.0;
    const double r = std::abs(v);
    if (r == 0.0) return {};
    return v * (v / r);
}

// Exact complex derivatives away from the singular point:
//   spiral: f_z = (1 + 2i) |u|^{4i},  f_zbar = 2i (u / ubar) |u|^{4i},  u = z - 1
//   cusp:   f_z = (3/2) v/|v|,        f_zbar = -(1/2) (v/|v|)^3,        v = z + 1
// Both have constant modulus pairs (sqrt 5, 2) resp. (3/2, 1/2), hence
// constant Jacobians 1 and 2.
[[nodiscard]] inline WirtingerSample example_map_wirtinger(ExampleMap kind, cplx z) {
    if (kind == ExampleMap::spiral) {
        const cplx u = z - 1.0;
        const double r = std::abs(u);
        if (r == 0.0) throw std::invalid_argument("derivative undefined at the singular point");
        const cplx tw = std::polar(1.0, 4.0 * std::log(r));
        const cplx q = u / r;
        return {cplx(1.0, 2.0) * tw, cplx(0.0, 2.0) * q * q * tw};
    }
    const cplx v = z + 1.0;
    const double r = std::abs(v);
    if (r == 0.0) throw std::invalid_argument("derivative undefined at the singular point");
    const cplx q = v / r;
    return {1.5 * q, -0.5 * q * q * q};
}

[[nodiscard]] inline double example_map_jacobian(ExampleMap kind, cplx z) {
    const WirtingerSample w = example_map_wirtinger(kind, z);
    return std::norm(w.fz) - std::norm(w.fzb);
}

struct ExampleGradients {
    cplx fz, fzb;        // closed form
    cplx fz_fd, fzb_fd;  // centered finite differences
    double jacobian = 0.0;
    double jacobian_fd = 0.0;
};

/// Closed-form gradients next to centered finite differences with a step
/// proportional to the distance from the singular point. Probes must stay in
/// the open disk and away from the singularity so the step is meaningful.
[[nodiscard]] inline ExampleGradients example_map_gradients(ExampleMap kind, cplx z) {
    const cplx sing = kind == ExampleMap::spiral ? cplx{1.0, 0.0} : cplx{-1.0, 0.0};
    if (std::abs(z) >= 1.0)
        throw std::invalid_argument("gradient probe must lie in the open unit disk");
    const double d = std::abs(z - sing);
    if (d < 1e-6)
        throw std::invalid_argument("gradient probe too close to the singular point");
    ExampleGradients g;
    const WirtingerSample w = example_map_wirtinger(kind, z);
    g.fz = w.fz;
    g.fzb = w.fzb;
    g.jacobian = std::norm(w.fz) - std::norm(w.fzb);
    const double h = std::clamp(1e-4 * d, 1e-9, 1e-6);
    auto f = [&](cplx p) { return eval_example_map(kind, p); };
    const cplx fx = (f(z + h) - f(z - h)) / (2.0 * h);
    const cplx fy = (f(z + cplx{0.0, h}) - f(z - cplx{0.0, h})) / (2.0 * h);
    g.fz_fd = 0.5 * (fx - cplx{0.0, 1.0} * fy);
    g.fzb_fd = 0.5 * (fx + cplx{0.0, 1.0} * fy);
    g.jacobian_fd = std::norm(g.fz_fd) - std::norm(g.fzb_fd);
    return g;
}

// ------------------------------------------------------------ chord-arc probes

enum class ProbeDomain {
    disk,    // unit circle itself
    spiral,  // image of the circle under the spiral map
    cusp,    // image of the circle under the cusp map
};

// Closed boundary curve discretized at n equal circle parameters, with the
// cumulative edge lengths (cum[i] = length of pts[0..i]) and the full
// perimeter including the closing edge.
struct BoundaryPolyline {
    std::vector<cplx> pts;
    std::vector<double> cum;
    double total = 0.0;
};

[[nodiscard]] inline BoundaryPolyline make_boundary_polyline(ProbeDomain domain, int n) {
    if (n < 16) throw std::invalid_argument("need at least 16 polyline points");
    BoundaryPolyline p;
    p.pts.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const cplx z = std::polar(1.0, two_pi * k / n);
        switch (domain) {
            case ProbeDomain::disk: p.pts[static_cast<std::size_t>(k)] = z; break;
            case ProbeDomain::spiral:
                p.pts[static_cast<std::size_t>(k)] = eval_example_map(ExampleMap::spiral, z);
                break;
            case ProbeDomain::cusp:
                p.pts[static_cast<std::size_t>(k)] = eval_example_map(ExampleMap::cusp, z);
                break;
        }
    }
    p.cum.resize(p.pts.size());
    p.cum[0] = 0.0;
    for (std::size_t i = 1; i < p.pts.size(); ++i)
        p.cum[i] = p.cum[i - 1] + std::abs(p.pts[i] - p.pts[i - 1]);
    p.total = p.cum.back() + std::abs(p.pts.front() - p.pts.back());
    return p;
}

struct ChordArcProbe {
    std::size_t ia = 0, ib = 0;  // polyline indices of the chord endpoints
    double boundary_len = 0.0;   // shorter boundary arc between them
    double chord = 0.0;          // straight-line distance
    double ratio = 0.0;          // boundary_len / chord
};

/// Ratio of the shorter boundary arc between two polyline vertices to their
/// straight-line distance. Finite chord-arc constants mean this stays
/// bounded over all vertex pairs.
[[nodiscard]] inline ChordArcProbe chordarc_ratio(const BoundaryPolyline& p, std::size_t ia,
                                                  std::size_t ib) {
    if (ia >= p.pts.size() || ib >= p.pts.size())
        throw std::invalid_argument("probe index out of range");
    if (ia > ib) std::swap(ia, ib);
    ChordArcProbe probe;
    probe.ia = ia;
    probe.ib = ib;
    probe.chord = std::abs(p.pts[ib] - p.pts[ia]);
    if (probe.chord == 0.0) throw std::invalid_argument("probe endpoints coincide");
    const double forward = p.cum[ib] - p.cum[ia];
    probe.boundary_len = std::min(forward, p.total - forward);
    probe.ratio = probe.boundary_len / probe.chord;
    return probe;
}

namespace detail {

// Even-odd ray crossing test against the closed polyline.
[[nodiscard]] inline bool point_in_polygon(const std::vector<cplx>& poly, cplx q) {
    bool inside = false;
    const double x = q.real(), y = q.imag();
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const double yi = poly[i].imag(), yj = poly[j].imag();
        if ((yi > y) != (yj > y)) {
            const double xc =
                poly[i].real() + (y - yi) * (poly[j].real() - poly[i].real()) / (yj - yi);
            if (x < xc) inside = !inside;
        }
    }
    return inside;
}

}  // namespace detail

struct ProbeRun {
    BoundaryPolyline boundary;
    std::vector<ChordArcProbe> probes;
    int skipped = 0;         // chords leaving the region (or degenerate)
    double max_ratio = 0.0;  // over the kept probes
};

/// Draws `count` seeded random chords between boundary points and keeps the
/// ones whose straight segment stays inside the region (32 interior samples
/// against the polyline). Endpoints are drawn as circle parameters, so the
/// same seed probes essentially the same physical chords at every polyline
/// resolution. Nonconvex images drop many chords; the skip counter records
/// how many.
[[nodiscard]] inline ProbeRun generate_probes(ProbeDomain domain, int n_poly, int count,
                                              std::uint64_t seed = 1) {
    if (count < 1) throw std::invalid_argument("need at least one probe");
    ProbeRun run;
    run.boundary = make_boundary_polyline(domain, n_poly);
    const std::size_t n = run.boundary.pts.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> par(0.0, 1.0);
    for (int c = 0; c < count; ++c) {
        const std::size_t ia = std::min(n - 1, static_cast<std::size_t>(par(rng) * n));
        const std::size_t ib = std::min(n - 1, static_cast<std::size_t>(par(rng) * n));
        if (ia == ib || run.boundary.pts[ia] == run.boundary.pts[ib]) {
            ++run.skipped;
            continue;
        }
        const cplx a = run.boundary.pts[ia], b = run.boundary.pts[ib];
        bool ok = true;
        for (int s = 0; s < 32 && ok; ++s) {
            const double t = (s + 1.0) / 33.0;
            ok = detail::point_in_polygon(run.boundary.pts, a + t * (b - a));
        }
        if (!ok) {
            ++run.skipped;
            continue;
        }
        run.probes.push_back(chordarc_ratio(run.boundary, ia, ib));
        run.max_ratio = std::max(run.max_ratio, run.probes.back().ratio);
    }
    return run;
}

// ------------------------------------------------------- composition transport

// Value and derivative fields of (outer example map) composed with a
// harmonic map, by the chain rule
//   (F o f)_z = F_w(f) f_z + F_wbar(f) conj(f_zbar),
//   (F o f)_zbar = F_w(f) f_zbar + F_wbar(f) conj(f_z).
[[nodiscard]] inline ValueField composed_value(ExampleMap kind, const HarmonicMap& f) {
    return [kind, &f](cplx z) { return eval_example_map(kind, f.evaluate(z)); };
}

[[nodiscard]] inline DerivField composed_deriv(ExampleMap kind, const HarmonicMap& f) {
    return [kind, &f](cplx z) {
        const HarmonicMap::Wirtinger in = f.wirtinger(z);
        const WirtingerSample out = example_map_wirtinger(kind, f.evaluate(z));
        return WirtingerSample{out.fz * in.fz + out.fzb * std::conj(in.fzb),
                               out.fz * in.fzb + out.fzb * std::conj(in.fz)};
    };
}

/// Royden distances between the composed limits: for each approximant f_m,
///   d_m = sup |F o f_m - F o f| + sqrt(E[F o f_m - F o f]),
/// evaluated over the grid and `boundary_samples` circle points. Uniform
/// convergence plus energy convergence of f_m makes these distances shrink,
/// which is what the caller asserts.
[[nodiscard]] inline std::vector<double> composition_transport_check(
    const HarmonicMap& f, std::span<const HarmonicMap> fms, ExampleMap kind,
    const PolarGrid& grid, int boundary_samples = 1024, int threads = 1) {
    std::vector<double> out;
    out.reserve(fms.size());
    const ValueField base_v = composed_value(kind, f);
    const DerivField base_d = composed_deriv(kind, f);
    for (const HarmonicMap& fm : fms) {
        const ValueField mv = composed_value(kind, fm);
        const DerivField md = composed_deriv(kind, fm);
        ValueField dv = [&](cplx z) { return mv(z) - base_v(z); };
        DerivField dd = [&](cplx z) {
            const WirtingerSample a = md(z);
            const WirtingerSample b = base_d(z);
            return WirtingerSample{a.fz - b.fz, a.fzb - b.fzb};
        };
        out.push_back(royden_norm(dv, dd, grid, boundary_samples, threads));
    }
    return out;
}

}  // namespace segmap
