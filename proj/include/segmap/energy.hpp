#pragma once
// Dirichlet energy in three equivalent forms (spectral, boundary double
// integral, interior quadrature), the Royden-style norm used to compare maps,
// and the orthogonality check for replacing a map by the harmonic extension
// of its boundary values.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "segmap/harmonic.hpp"
#include "segmap/numerics.hpp"

namespace segmap {

// E[f] = integral of |f_x|^2 + |f_y|^2 = 2 (|f_z|^2 + |f_zbar|^2) over the
// disk. For the truncated series this is 2 pi sum |n| |c_n|^2 exactly.
[[nodiscard]] inline double dirichlet_energy_fourier(const HarmonicMap& map) {
    std::vector<double> terms(map.coeff.size());
    for (int n = -map.N; n <= map.N; ++n)
        terms[static_cast<std::size_t>(n + map.N)] = std::abs(n) * std::norm(map.c(n));
    return two_pi * pairwise_sum(terms);
}

/// Boundary-only energy of the harmonic extension of g (Douglas form):
///   E = (1/2pi) int int |g(s) - g(t)|^2 / (4 sin^2((s-t)/2)) ds dt,
/// discretized with the t-grid at 2 pi k / M and the s-grid offset by half a
/// step, so the singular diagonal s = t is never hit and the identity map
/// integrates to 2 pi at every M. Deterministic for any thread count.
template <class Fn>
[[nodiscard]] double douglas_energy(Fn&& boundary, int M = 2048, int threads = 1) {
    if (M < 64) throw std::invalid_argument("need at least 64 boundary nodes");
    const std::size_t m = static_cast<std::size_t>(M);
    std::vector<cplx> ga(m), gb(m);
    std::vector<double> denom(m);
    for (std::size_t k = 0; k < m; ++k) {
        ga[k] = boundary(two_pi * (static_cast<double>(k) + 0.5) / M);
        gb[k] = boundary(two_pi * static_cast<double>(k) / M);
        const double s = std::sin(std::numbers::pi * (static_cast<double>(k) + 0.5) / M);
        denom[k] = 4.0 * s * s;
    }
    std::vector<double> row(m);
    run_tiles(m, threads, [&](std::size_t j) {
        std::vector<double> terms(m);
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t t = j >= k ? j - k : j + m - k;
            terms[k] = std::norm(ga[j] - gb[k]) / denom[t];
        }
        row[j] = pairwise_sum(terms);
    });
    return pairwise_sum(row) * (two_pi / (static_cast<double>(M) * M));
}

struct WirtingerSample {
    cplx fz;
    cplx fzb;
};

using DerivField = std::function<WirtingerSample(cplx)>;
using ValueField = std::function<cplx(cplx)>;

[[nodiscard]] inline DerivField deriv_field(const HarmonicMap& map) {
    return [&map](cplx z) {
        const HarmonicMap::Wirtinger w = map.wirtinger(z);
        return WirtingerSample{w.fz, w.fzb};
    };
}

[[nodiscard]] inline ValueField value_field(const HarmonicMap& map) {
    return [&map](cplx z) { return map.evaluate(z); };
}

/// Midpoint quadrature of 2 (|f_z|^2 + |f_zbar|^2) over the polar grid.
/// One tile per radius ring, partials reduced in ring order.
[[nodiscard]] inline double dirichlet_energy_grid(const DerivField& df, const PolarGrid& grid,
                                                  int threads = 1) {
    grid.validate();
    std::vector<double> ring(static_cast<std::size_t>(grid.n_r));
    run_tiles(ring.size(), threads, [&](std::size_t i) {
        const double r = grid.radius(static_cast<int>(i));
        std::vector<double> terms(static_cast<std::size_t>(grid.n_theta));
        for (int j = 0; j < grid.n_theta; ++j) {
            const WirtingerSample w = df(std::polar(r, grid.angle(j)));
            terms[static_cast<std::size_t>(j)] = 2.0 * (std::norm(w.fz) + std::norm(w.fzb));
        }
        ring[i] = pairwise_sum(terms);
    });
    return pairwise_sum(ring) * grid.cell_area();
}

/// sup |g| + sqrt(E[g]): the sup runs over the quadrature nodes plus
/// `boundary_samples` points of the unit circle, the energy over the grid.
[[nodiscard]] inline double royden_norm(const ValueField& g, const DerivField& dg,
                                        const PolarGrid& grid, int boundary_samples = 1024,
                                        int threads = 1) {
    grid.validate();
    if (boundary_samples < 1) throw std::invalid_argument("need at least one boundary sample");
    std::vector<double> ring_sup(static_cast<std::size_t>(grid.n_r), 0.0);
    run_tiles(ring_sup.size(), threads, [&](std::size_t i) {
        const double r = grid.radius(static_cast<int>(i));
        double s = 0.0;
        for (int j = 0; j < grid.n_theta; ++j)
            s = std::max(s, std::abs(g(std::polar(r, grid.angle(j)))));
        ring_sup[i] = s;
    });
    double sup = 0.0;
    for (double v : ring_sup) sup = std::max(sup, v);
    for (int k = 0; k < boundary_samples; ++k) {
        const double a = two_pi * k / boundary_samples;
        sup = std::max(sup, std::abs(g(cplx{std::cos(a), std::sin(a)})));
    }
    return sup + std::sqrt(dirichlet_energy_grid(dg, grid, threads));
}

// ------------------------------------------------------- replacement check

// Energies entering E[g] = E[h] + E[g - h], where h is the harmonic
// extension of g's boundary values. The residual measures how far the
// computed quantities are from that orthogonality identity.
struct ReplacementReport {
    double energy_g = 0.0;
    double energy_h = 0.0;
    double energy_diff = 0.0;
    double residual = 0.0;      // energy_diff - (energy_g - energy_h)
    double residual_rel = 0.0;  // |residual| / max(energy_g, 1e-12)
};

[[nodiscard]] inline ReplacementReport harmonic_replacement_check(
    const ValueField& g, const DerivField& dg, int N = 64, int M = 0,
    PolarGrid grid = {1.0, 256, 512}, int threads = 1) {
    const HarmonicMap h = harmonic_extension(
        [&g](double t) { return g(cplx{std::cos(t), std::sin(t)}); }, N, M);
    ReplacementReport rep;
    rep.energy_g = dirichlet_energy_grid(dg, grid, threads);
    rep.energy_h = dirichlet_energy_fourier(h);
    DerivField diff = [&dg, &h](cplx z) {
        const WirtingerSample a = dg(z);
        const HarmonicMap::Wirtinger b = h.wirtinger(z);
        return WirtingerSample{a.fz - b.fz, a.fzb - b.fzb};
    };
    rep.energy_diff = dirichlet_energy_grid(diff, grid, threads);
    rep.residual = rep.energy_diff - (rep.energy_g - rep.energy_h);
    rep.residual_rel = std::abs(rep.residual) / std::max(rep.energy_g, 1e-12);
    return rep;
}

// ---------------------------------------------------------- combined report

// All estimators applied to one harmonic map, with the two cross-checks as
// relative residuals against the spectral value.
struct EnergyReport {
    double dirichlet_fourier = 0.0;
    double dirichlet_grid = 0.0;
    double douglas = 0.0;
    double royden = 0.0;
    double residual_grid = 0.0;     // |fourier - grid| / max(fourier, 1e-12)
    double residual_douglas = 0.0;  // |fourier - douglas| / max(fourier, 1e-12)
};

template <class Fn>
[[nodiscard]] EnergyReport make_energy_report(const HarmonicMap& map, Fn&& boundary,
                                              int douglas_nodes = 2048,
                                              PolarGrid grid = {0.999, 128, 256},
                                              int threads = 1) {
    EnergyReport r;
    r.dirichlet_fourier = dirichlet_energy_fourier(map);
    r.dirichlet_grid = dirichlet_energy_grid(deriv_field(map), grid, threads);
    r.douglas = douglas_energy(boundary, douglas_nodes, threads);
    r.royden = royden_norm(value_field(map), deriv_field(map), grid, 1024, threads);
    const double denom = std::max(r.dirichlet_fourier, 1e-12);
    r.residual_grid = std::abs(r.dirichlet_fourier - r.dirichlet_grid) / denom;
    r.residual_douglas = std::abs(r.dirichlet_fourier - r.douglas) / denom;
    return r;
}

[[nodiscard]] inline bool energy_report_within(const EnergyReport& r,
                                               double douglas_tol = 1e-4,
                                               double grid_tol = 1e-2) {
    return r.residual_douglas <= douglas_tol && r.residual_grid <= grid_tol;
}

}  // namespace segmap
