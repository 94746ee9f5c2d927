#pragma once
// Harmonic extension of circle data by truncated Fourier synthesis, complex
// derivatives of the extension, and a Jacobian positivity scan.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "segmap/numerics.hpp"

namespace segmap {

// Truncated harmonic map of the closed unit disk,
//   f(r e^{i t}) = sum_{|n| <= N} c_n r^{|n|} e^{i n t},
// with coefficients stored at index n + N.
struct HarmonicMap {
    int N = 0;
    std::vector<cplx> coeff;  // size 2N + 1

    [[nodiscard]] const cplx& c(int n) const { return coeff[static_cast<std::size_t>(n + N)]; }

    [[nodiscard]] cplx evaluate(cplx z) const {
        if (std::abs(z) > 1.0 + 1e-12)
            throw std::invalid_argument("evaluation point must lie in the closed unit disk");
        if (N == 0) return c(0);
        // Horner in z for n >= 0 and in conj(z) for n < 0; r^{|n|} e^{int} = z^n.
        cplx pos = c(N);
        for (int n = N - 1; n >= 0; --n) pos = pos * z + c(n);
        const cplx zb = std::conj(z);
        cplx neg = c(-N);
        for (int n = N - 1; n >= 1; --n) neg = neg * zb + c(-n);
        return pos + neg * zb;
    }

    struct Wirtinger {
        cplx fz;
        cplx fzb;
    };

    // d/dz and d/dzbar of the synthesis: f_z = sum_{n>0} n c_n z^{n-1},
    // f_zbar = sum_{n<0} |n| c_n conj(z)^{|n|-1}. Interior points only.
    [[nodiscard]] Wirtinger wirtinger(cplx z) const {
        if (std::abs(z) >= 1.0)
            throw std::invalid_argument("derivative point must lie in the open unit disk");
        cplx fz = static_cast<double>(N) * c(N);
        for (int n = N - 1; n >= 1; --n) fz = fz * z + static_cast<double>(n) * c(n);
        const cplx zb = std::conj(z);
        cplx fzb = static_cast<double>(N) * c(-N);
        for (int n = N - 1; n >= 1; --n) fzb = fzb * zb + static_cast<double>(n) * c(-n);
        return {fz, fzb};
    }

    [[nodiscard]] double jacobian(cplx z) const {
        const Wirtinger w = wirtinger(z);
        return std::norm(w.fz) - std::norm(w.fzb);
    }
};

/// DFT analysis of equispaced circle samples g_k = g(2 pi k / M):
///   c_n = (1/M) sum_k g_k e^{-2 pi i n k / M},  |n| <= N,  M >= 2N + 2.
/// Twiddles come from one length-M root table indexed by (n k) mod M and each
/// coefficient is accumulated with pairwise summation, which keeps the
/// analysis of band-limited data accurate to a few ulps at any M.
[[nodiscard]] inline HarmonicMap fourier_coefficients(std::span<const cplx> samples, int N) {
    const std::size_t M = samples.size();
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    if (M < 2 * static_cast<std::size_t>(N) + 2)
        throw std::invalid_argument("need at least 2N + 2 samples");
    std::vector<cplx> root(M);
    for (std::size_t t = 0; t < M; ++t) {
        const double a = -two_pi * static_cast<double>(t) / static_cast<double>(M);
        root[t] = {std::cos(a), std::sin(a)};
    }
    HarmonicMap out;
    out.N = N;
    out.coeff.assign(2 * static_cast<std::size_t>(N) + 1, cplx{});
    std::vector<cplx> terms(M);
    for (int n = -N; n <= N; ++n) {
        const std::size_t stride = static_cast<std::size_t>((n % static_cast<int>(M) + static_cast<int>(M))) % M;
        std::size_t idx = 0;
        for (std::size_t k = 0; k < M; ++k) {
            terms[k] = samples[k] * root[idx];
            idx += stride;
            if (idx >= M) idx -= M;
        }
        out.coeff[static_cast<std::size_t>(n + N)] = pairwise_sum(std::span<const cplx>(terms)) / static_cast<double>(M);
    }
    return out;
}

/// Harmonic extension of a boundary function: samples it at M equispaced
/// angles (default M = 4N) and runs the analysis above.
template <class Fn>
[[nodiscard]] HarmonicMap harmonic_extension(Fn&& boundary, int N, int M = 0) {
    if (N <= 0) throw std::invalid_argument("N must be positive");
    if (M == 0) M = 4 * N;
    if (M < 2 * N + 2) throw std::invalid_argument("need at least 2N + 2 samples");
    std::vector<cplx> samples(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k)
        samples[static_cast<std::size_t>(k)] = boundary(two_pi * k / M);
    return fourier_coefficients(samples, N);
}

/// Minimum of the Jacobian over the polar grid, split across threads one
/// ring at a time with an ordered reduction, so the result is independent of
/// the thread count. A positive return certifies local injectivity on the
/// grid; the scan itself never throws on sign.
[[nodiscard]] inline double rkc_positivity_check(const HarmonicMap& map, const PolarGrid& grid,
                                                 int threads = 1) {
    grid.validate();
    std::vector<double> ring_min(static_cast<std::size_t>(grid.n_r),
                                 std::numeric_limits<double>::infinity());
    run_tiles(static_cast<std::size_t>(grid.n_r), threads, [&](std::size_t i) {
        const double r = grid.radius(static_cast<int>(i));
        double m = std::numeric_limits<double>::infinity();
        for (int j = 0; j < grid.n_theta; ++j) {
            const double a = grid.angle(j);
            m = std::min(m, map.jacobian(std::polar(r, a)));
        }
        ring_min[i] = m;
    });
    double m = std::numeric_limits<double>::infinity();
    for (double v : ring_min) m = std::min(m, v);
    return m;
}

}  // namespace segmap
