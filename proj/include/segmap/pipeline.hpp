#pragma once
// End-to-end driver: builds a segment fixture (boundary correspondence plus
// truncated harmonic extension), repairs it at a ladder of resolutions, and
// collects the quantities whose bounds certify the approximation: uniform
// distance, slope floors, Jacobian positivity, quasi-Lipschitz margins, and
// three energy estimates per resolution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "segmap/boundary.hpp"
#include "segmap/energy.hpp"
#include "segmap/geometry.hpp"
#include "segmap/harmonic.hpp"
#include "segmap/numerics.hpp"

namespace segmap {

enum class PhiPreset { identity, flat_step, multi_flat, custom };

[[nodiscard]] inline const char* preset_name(PhiPreset p) {
    switch (p) {
        case PhiPreset::identity: return "identity";
        case PhiPreset::flat_step: return "flat_step";
        case PhiPreset::multi_flat: return "multi_flat";
        case PhiPreset::custom: return "custom";
    }
    return "custom";
}

/// Built-in boundary correspondences. identity is the exact fixed point of
/// the repair; flat_step has one flat stretch [0, omega/2]; multi_flat has
/// two flat stretches and an uneven node layout.
[[nodiscard]] inline MonotonePhi preset_phi(PhiPreset p, const Segment& seg) {
    const double om = seg.omega();
    MonotonePhi out;
    switch (p) {
        case PhiPreset::identity:
            out.theta = {-om, om};
            out.phi = {-om, om};
            break;
        case PhiPreset::flat_step:
            out.theta = {-om, 0.0, 0.5 * om, om};
            out.phi = {-om, 0.0, 0.0, om};
            break;
        case PhiPreset::multi_flat:
            for (double c : {-1.0, -0.8, -0.55, -0.2, 0.1, 0.45, 0.7, 1.0})
                out.theta.push_back(c * om);
            for (double c : {-1.0, -0.6, -0.6, -0.1, -0.1, 0.5, 0.5, 1.0})
                out.phi.push_back(c * om);
            break;
        case PhiPreset::custom:
            throw std::invalid_argument("custom preset needs an explicit node list");
    }
    return out;
}

/// Kept set matching each preset: the repair runs on its complement. The
/// endpoints repeat the node expressions bitwise, so no interpolated nodes
/// are inserted.
[[nodiscard]] inline ArcSet preset_arcset(PhiPreset p, const Segment& seg) {
    const double om = seg.omega();
    switch (p) {
        case PhiPreset::identity: return {};
        case PhiPreset::flat_step: return {{{-om, 0.0}}};
        case PhiPreset::multi_flat: return {{{-om, -0.8 * om}, {0.1 * om, 0.45 * om}}};
        case PhiPreset::custom: return {};
    }
    return {};
}

struct FixtureSpec {
    double omega = std::numbers::pi / 3;
    PhiPreset preset = PhiPreset::flat_step;
    MonotonePhi custom_phi;             // consulted only for PhiPreset::custom
    std::optional<ArcSet> custom_kept;  // overrides the preset kept set
    std::vector<int> m_list = {4, 8, 16, 32, 64, 128, 256, 512};
    int N = 512;             // truncation order; sampled at 4N angles
    int douglas_nodes = 2048;
    double jacobian_r_max = 0.95;
    int grid_r = 128;
    int grid_theta = 256;
    int ql_pairs = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct Fixture {
    Segment seg;
    SegmentBoundaryMap boundary;
    HarmonicMap map;
    double min_jacobian = 0.0;
};

/// Validates the boundary data, extends it harmonically, and scans the
/// Jacobian. A nonpositive scan minimum aborts the build: the fixture is
/// then outside the regime every later bound assumes.
[[nodiscard]] inline Fixture build_fixture(const FixtureSpec& spec) {
    const Segment seg(spec.omega);
    MonotonePhi phi =
        spec.preset == PhiPreset::custom ? spec.custom_phi : preset_phi(spec.preset, seg);
    SegmentBoundaryMap boundary = canonical_fixture_boundary(seg, std::move(phi));
    if (spec.N < 2) throw std::invalid_argument("truncation order must be at least 2");
    HarmonicMap map =
        harmonic_extension([&boundary](double t) { return boundary.value(t); }, spec.N);
    const PolarGrid grid{spec.jacobian_r_max, spec.grid_r, spec.grid_theta};
    const double minj = rkc_positivity_check(map, grid, spec.threads);
    if (!(minj > 0.0)) {
        std::ostringstream os;
        os << "fixture rejected: jacobian minimum " << minj << " on the r <= " << grid.r_max
           << " grid is not positive";
        throw std::runtime_error(os.str());
    }
    return {seg, std::move(boundary), std::move(map), minj};
}

struct ReportRow {
    int m = 0;
    double sup_err = 0.0;            // sup |f - f_m| over the circle
    double bound_8w2_over_m = 0.0;   // 8 omega^2 / m
    double bound_21_over_m = 0.0;    // 21 / m
    double e_f = 0.0;                // spectral energy of the base map
    double e_fm_douglas = 0.0;       // boundary-integral energy of f_m
    double e_fm_fourier = 0.0;       // spectral energy of f_m's extension
    double energy_gap = 0.0;         // |e_fm_fourier - e_f|; the repair can
                                     // move the energy either way
    double min_slope = 0.0;          // worst slope over repaired components
    double min_jacobian = 0.0;       // scan minimum for f_m's extension
    double ql_margin = 0.0;          // worst quasi-Lipschitz margin
};

struct ConvergenceReport {
    FixtureSpec spec;
    double e_f = 0.0;
    double base_min_jacobian = 0.0;
    double annulus_energy = 0.0;  // base-map energy in 0.9 <= r <= 0.999
    std::vector<ReportRow> rows;
};

/// Energy of the truncated map restricted to an annulus, by the same
/// midpoint rule in u = r^2. Deterministic for any thread count.
[[nodiscard]] inline double energy_in_annulus(const HarmonicMap& map, double r_lo, double r_hi,
                                              int n_r = 32, int n_theta = 256, int threads = 1) {
    if (!(0.0 <= r_lo && r_lo < r_hi && r_hi <= 1.0))
        throw std::invalid_argument("need 0 <= r_lo < r_hi <= 1");
    if (n_r < 1 || n_theta < 1) throw std::invalid_argument("grid counts must be positive");
    const double u_lo = r_lo * r_lo, u_hi = r_hi * r_hi;
    const double area = ((u_hi - u_lo) / n_r) * (two_pi / n_theta) * 0.5;
    std::vector<double> ring(static_cast<std::size_t>(n_r));
    run_tiles(ring.size(), threads, [&](std::size_t i) {
        const double r =
            std::sqrt(u_lo + (u_hi - u_lo) * (static_cast<double>(i) + 0.5) / n_r);
        std::vector<double> terms(static_cast<std::size_t>(n_theta));
        for (int j = 0; j < n_theta; ++j) {
            const HarmonicMap::Wirtinger w =
                map.wirtinger(std::polar(r, two_pi * (j + 0.5) / n_theta));
            terms[static_cast<std::size_t>(j)] = 2.0 * (std::norm(w.fz) + std::norm(w.fzb));
        }
        ring[i] = pairwise_sum(terms);
    });
    return pairwise_sum(ring) * area;
}

/// Full ladder run. Rows are produced in increasing m; any failure inside a
/// row is rethrown with the offending m named.
[[nodiscard]] inline ConvergenceReport run_approximation(const FixtureSpec& spec) {
    ConvergenceReport rep;
    rep.spec = spec;
    const Fixture fx = build_fixture(spec);
    rep.base_min_jacobian = fx.min_jacobian;
    rep.e_f = dirichlet_energy_fourier(fx.map);
    rep.annulus_energy =
        energy_in_annulus(fx.map, 0.9, 0.999, 32, spec.grid_theta, spec.threads);

    const ArcSet kept = spec.custom_kept ? *spec.custom_kept : preset_arcset(spec.preset, fx.seg);
    std::vector<int> ms = spec.m_list;
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    if (ms.empty()) throw std::invalid_argument("m list must not be empty");

    const PolarGrid grid{spec.jacobian_r_max, spec.grid_r, spec.grid_theta};
    for (int m : ms) {
        try {
            ReportRow row;
            row.m = m;
            row.e_f = rep.e_f;
            row.bound_8w2_over_m = 8.0 * spec.omega * spec.omega / m;
            row.bound_21_over_m = 21.0 / m;

            const Homeomorphized hm = homeomorphize(fx.boundary, kept, m);
            row.sup_err = sup_distance(fx.boundary, hm.map, 64);
            row.min_slope = std::numeric_limits<double>::infinity();
            for (const ReplacedComponent& rc : hm.components)
                row.min_slope = std::min(row.min_slope, rc.min_slope);

            const HarmonicMap fm = harmonic_extension(
                [&hm](double t) { return hm.map.value(t); }, spec.N);
            row.e_fm_fourier = dirichlet_energy_fourier(fm);
            row.e_fm_douglas = douglas_energy([&hm](double t) { return hm.map.value(t); },
                                              spec.douglas_nodes, spec.threads);
            row.energy_gap = std::abs(row.e_fm_fourier - rep.e_f);
            row.min_jacobian = rkc_positivity_check(fm, grid, spec.threads);
            row.ql_margin =
                quasi_lipschitz_check(fx.boundary, hm.map, fx.seg, spec.ql_pairs,
                                      spec.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(m));
            rep.rows.push_back(row);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "m=" << m << ": " << e.what();
            throw std::runtime_error(os.str());
        }
    }
    return rep;
}

// ----------------------------------------------------------------- verdicts

struct Verdict {
    std::string name;
    bool pass = true;
    std::string detail;
};

namespace detail {

inline void add_verdict(std::vector<Verdict>& v, std::string name, bool pass,
                        const std::ostringstream& os) {
    v.push_back({std::move(name), pass, os.str()});
}

}  // namespace detail

/// Checks every certified bound against the collected rows:
///   uniform-bound            sup |f - f_m| <= min(8 omega^2, 21) / m
///   strict-monotonicity      repaired slopes strictly positive
///   jacobian-positivity      scan minima strictly positive
///   quasi-lipschitz          margins above -1e-10
///   energy-bounded           E[f_m] <= (50 / sin^2(omega/4)) E[f] + 64 pi
///   douglas-fourier-agreement  the two f_m energies within 1e-3 relative
///   energy-convergence       gap at the largest m at most a quarter of the
///                            gap at the smallest (when they span >= 64x)
[[nodiscard]] inline std::vector<Verdict> verify_proposition(const ConvergenceReport& rep) {
    std::vector<Verdict> out;
    const double om = rep.spec.omega;

    {
        std::ostringstream os;
        bool pass = true;
        for (const ReportRow& r : rep.rows) {
            const bool ok = r.sup_err <= r.bound_8w2_over_m + 1e-12 &&
                            r.sup_err <= r.bound_21_over_m + 1e-12;
            if (!ok && pass) {
                pass = false;
                os << "m=" << r.m << ": sup_err " << r.sup_err << " exceeds bound "
                   << std::min(r.bound_8w2_over_m, r.bound_21_over_m);
            }
        }
        if (pass) os << "sup |f - f_m| within 8 omega^2 / m and 21 / m on all rows";
        detail::add_verdict(out, "uniform-bound", pass, os);
    }
    {
        std::ostringstream os;
        bool pass = true;
        for (const ReportRow& r : rep.rows)
            if (!(r.min_slope > 0.0) && pass) {
                pass = false;
                os << "m=" << r.m << ": min slope " << r.min_slope << " not positive";
            }
        if (pass) os << "repaired boundary maps strictly increasing on all rows";
        detail::add_verdict(out, "strict-monotonicity", pass, os);
    }
    {
        std::ostringstream os;
        bool pass = true;
        for (const ReportRow& r : rep.rows)
            if (!(r.min_jacobian > 0.0) && pass) {
                pass = false;
                os << "m=" << r.m << ": jacobian minimum " << r.min_jacobian << " not positive";
            }
        if (pass)
            os << "jacobian positive on the r <= " << rep.spec.jacobian_r_max
               << " grid on all rows";
        detail::add_verdict(out, "jacobian-positivity", pass, os);
    }
    {
        std::ostringstream os;
        bool pass = true;
        for (const ReportRow& r : rep.rows)
            if (!(r.ql_margin >= -1e-10) && pass) {
                pass = false;
                os << "m=" << r.m << ": quasi-Lipschitz margin " << r.ql_margin;
            }
        if (pass) os << "quasi-Lipschitz margins nonnegative on all rows";
        detail::add_verdict(out, "quasi-lipschitz", pass, os);
    }
    {
        const double s = std::sin(om / 4);
        const double cap = (50.0 / (s * s)) * rep.e_f + 64.0 * std::numbers::pi;
        std::ostringstream os;
        bool pass = true;
        for (const ReportRow& r : rep.rows)
            if (!(r.e_fm_fourier <= cap) && pass) {
                pass = false;
                os << "m=" << r.m << ": E[f_m] " << r.e_fm_fourier << " exceeds cap " << cap;
            }
        if (pass) os << "E[f_m] within (50 / sin^2(omega/4)) E[f] + 64 pi";
        detail::add_verdict(out, "energy-bounded", pass, os);
    }
    {
        std::ostringstream os;
        bool pass = true;
        for (const ReportRow& r : rep.rows) {
            const double rel = std::abs(r.e_fm_douglas - r.e_fm_fourier) /
                               std::max(r.e_fm_fourier, 1e-12);
            if (!(rel <= 1e-3) && pass) {
                pass = false;
                os << "m=" << r.m << ": estimators disagree by " << rel << " relative";
            }
        }
        if (pass) os << "boundary-integral and spectral energies agree to 1e-3";
        detail::add_verdict(out, "douglas-fourier-agreement", pass, os);
    }
    {
        std::ostringstream os;
        bool pass = true;
        if (rep.rows.size() >= 2 &&
            rep.rows.back().m >= 64 * rep.rows.front().m) {
            const double g0 = rep.rows.front().energy_gap;
            const double g1 = rep.rows.back().energy_gap;
            pass = g1 <= 0.25 * g0;
            if (pass)
                os << "gap shrank from " << g0 << " (m=" << rep.rows.front().m << ") to " << g1
                   << " (m=" << rep.rows.back().m << ")";
            else
                os << "gap " << g1 << " at m=" << rep.rows.back().m
                   << " is not a quarter of gap " << g0 << " at m=" << rep.rows.front().m;
        } else {
            os << "skipped: m ladder spans less than a factor 64";
        }
        detail::add_verdict(out, "energy-convergence", pass, os);
    }
    return out;
}

[[nodiscard]] inline bool all_pass(const std::vector<Verdict>& v) {
    for (const Verdict& x : v)
        if (!x.pass) return false;
    return true;
}

}  // namespace segmap
