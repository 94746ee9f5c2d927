#include <catch2/catch_amalgamated.hpp>

#include <segmap/harmonic.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace segmap;
using Catch::Approx;

namespace {

HarmonicMap random_map(int N, std::uint64_t seed, double scale = 0.3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    HarmonicMap m;
    m.N = N;
    m.coeff.resize(2 * static_cast<std::size_t>(N) + 1);
    for (auto& c : m.coeff) c = scale * cplx(u(rng), u(rng));
    return m;
}

}  // namespace

TEST_CASE("pairwise summation and tiling primitives", "[harmonic]") {
    std::vector<double> xs(1000);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i + 1);
    REQUIRE(pairwise_sum(std::span<const double>(xs)) == 500500.0);

    REQUIRE_THROWS_WITH(run_tiles(4, 0, [](std::size_t) {}), "threads must be >= 1");

    PolarGrid bad{0.0, 8, 8};
    REQUIRE_THROWS_WITH(bad.validate(),
                        "polar grid needs r_max in (0, 1] and positive node counts");
    PolarGrid grid{1.0, 4, 8};
    // Midpoint rule in u = r^2: cells tile the disk exactly.
    REQUIRE(grid.cell_area() * grid.n_r * grid.n_theta
            == Approx(std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("analysis recovers band-limited data to rounding", "[harmonic]") {
    const int N = 8;
    HarmonicMap truth = random_map(N, 11);

    for (int M : {2 * N + 2, 64, 101}) {
        std::vector<cplx> samples(static_cast<std::size_t>(M));
        for (int k = 0; k < M; ++k)
            samples[static_cast<std::size_t>(k)] = truth.evaluate(std::polar(1.0, two_pi * k / M));
        HarmonicMap got = fourier_coefficients(samples, N);
        for (int n = -N; n <= N; ++n)
            REQUIRE(std::abs(got.c(n) - truth.c(n)) < 1e-12);
    }
}

TEST_CASE("analysis of pure harmonics", "[harmonic]") {
    const int M = 32;
    std::vector<cplx> samples(M);
    for (int k = 0; k < M; ++k) {
        double t = two_pi * k / M;
        samples[static_cast<std::size_t>(k)] = std::polar(1.0, 3.0 * t) + 0.25 * std::polar(1.0, -t);
    }
    HarmonicMap got = fourier_coefficients(samples, 5);
    REQUIRE(std::abs(got.c(3) - 1.0) < 1e-14);
    REQUIRE(std::abs(got.c(-1) - 0.25) < 1e-14);
    REQUIRE(std::abs(got.c(0)) < 1e-14);
    REQUIRE(std::abs(got.c(5)) < 1e-14);

    REQUIRE_THROWS_WITH(fourier_coefficients(std::span<const cplx>(samples), 16),
                        "need at least 2N + 2 samples");
    REQUIRE_THROWS_WITH(fourier_coefficients(std::span<const cplx>(samples), -1),
                        "N must be nonnegative");
    REQUIRE_THROWS_WITH(harmonic_extension([](double) { return cplx{}; }, 0),
                        "N must be positive");
}

TEST_CASE("evaluation: closed forms, mean value, domain", "[harmonic]") {
    HarmonicMap id;  // f(z) = z
    id.N = 1;
    id.coeff = {cplx{}, cplx{}, cplx{1.0, 0.0}};
    cplx w{0.3, 0.4};
    REQUIRE(id.evaluate(w) == w);
    REQUIRE(id.evaluate(cplx{}) == cplx{});

    HarmonicMap conj_map;  // f(z) = conj(z)
    conj_map.N = 1;
    conj_map.coeff = {cplx{1.0, 0.0}, cplx{}, cplx{}};
    REQUIRE(conj_map.evaluate(w) == std::conj(w));

    HarmonicMap constant;  // N = 0 degenerate case
    constant.N = 0;
    constant.coeff = {cplx{2.0, -1.0}};
    REQUIRE(constant.evaluate(w) == cplx(2.0, -1.0));

    // f(0) = c_0 exactly; the mean of the boundary samples equals c_0 too.
    HarmonicMap m = random_map(6, 5);
    REQUIRE(m.evaluate(cplx{}) == m.c(0));

    REQUIRE_THROWS_WITH(m.evaluate(cplx{1.2, 0.0}),
                        "evaluation point must lie in the closed unit disk");
    REQUIRE_THROWS_WITH(m.wirtinger(cplx{1.0, 0.0}),
                        "derivative point must lie in the open unit disk");
}

TEST_CASE("complex derivatives: closed forms", "[harmonic]") {
    // f(z) = 2 z^3 + 0.5 conj(z)^2: f_z = 6 z^2, f_zbar = conj(z).
    HarmonicMap m;
    m.N = 3;
    m.coeff.assign(7, cplx{});
    m.coeff[static_cast<std::size_t>(3 + 3)] = 2.0;
    m.coeff[static_cast<std::size_t>(-2 + 3)] = 0.5;
    cplx z{0.4, -0.2};
    auto w = m.wirtinger(z);
    REQUIRE(std::abs(w.fz - 6.0 * z * z) < 1e-15);
    REQUIRE(std::abs(w.fzb - std::conj(z)) < 1e-15);

    HarmonicMap mix;  // f(z) = z + 0.3 conj(z): J = 1 - 0.09
    mix.N = 1;
    mix.coeff = {cplx{0.3, 0.0}, cplx{}, cplx{1.0, 0.0}};
    REQUIRE(mix.jacobian(z) == Approx(0.91).margin(1e-15));
}

TEST_CASE("complex derivatives agree with centered differences", "[harmonic]") {
    HarmonicMap m = random_map(8, 23);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> rad(0.0, 0.9), ang(0.0, two_pi);
    const double h = 1e-5;
    for (int i = 0; i < 20; ++i) {
        cplx z = std::polar(rad(rng), ang(rng));
        cplx fx = (m.evaluate(z + h) - m.evaluate(z - h)) / (2.0 * h);
        cplx fy = (m.evaluate(z + cplx(0.0, h)) - m.evaluate(z - cplx(0.0, h))) / (2.0 * h);
        auto w = m.wirtinger(z);
        REQUIRE(std::abs(w.fz - 0.5 * (fx - cplx(0.0, 1.0) * fy)) < 1e-7);
        REQUIRE(std::abs(w.fzb - 0.5 * (fx + cplx(0.0, 1.0) * fy)) < 1e-7);
    }
}

TEST_CASE("interior modulus never exceeds the boundary modulus", "[harmonic]") {
    HarmonicMap m = random_map(4, 41);
    double boundary_sup = 0.0;
    for (int k = 0; k < 4096; ++k)
        boundary_sup = std::max(boundary_sup,
                                std::abs(m.evaluate(std::polar(1.0, two_pi * k / 4096))));
    PolarGrid grid{0.95, 48, 128};
    double interior_sup = 0.0;
    for (int i = 0; i < grid.n_r; ++i)
        for (int j = 0; j < grid.n_theta; ++j)
            interior_sup = std::max(
                interior_sup,
                std::abs(m.evaluate(std::polar(grid.radius(i), grid.angle(j)))));
    REQUIRE(interior_sup <= 1.01 * boundary_sup);
}

TEST_CASE("jacobian scan: exact signs and thread invariance", "[harmonic]") {
    PolarGrid grid{0.95, 32, 64};

    HarmonicMap id;
    id.N = 1;
    id.coeff = {cplx{}, cplx{}, cplx{1.0, 0.0}};
    REQUIRE(rkc_positivity_check(id, grid) == 1.0);

    HarmonicMap flip;  // f(z) = conj(z): J = -1 everywhere
    flip.N = 1;
    flip.coeff = {cplx{1.0, 0.0}, cplx{}, cplx{}};
    REQUIRE(rkc_positivity_check(flip, grid) == -1.0);

    HarmonicMap mix;
    mix.N = 1;
    mix.coeff = {cplx{0.3, 0.0}, cplx{}, cplx{1.0, 0.0}};
    REQUIRE(rkc_positivity_check(mix, grid) == Approx(0.91).margin(1e-15));

    HarmonicMap m = random_map(8, 57);
    double one = rkc_positivity_check(m, grid, 1);
    double four = rkc_positivity_check(m, grid, 4);
    REQUIRE(one == four);
}

TEST_CASE("positive boundary data can still fold the disk", "[harmonic]") {
    // A non-convex star-shaped image: the harmonic extension of
    // (1 + 0.5 cos 3t) e^{it} has strongly negative Jacobian spots, so a
    // positivity scan must reject it.
    HarmonicMap m = harmonic_extension(
        [](double t) { return (1.0 + 0.5 * std::cos(3.0 * t)) * std::polar(1.0, t); }, 256, 1024);
    double minj = rkc_positivity_check(m, PolarGrid{0.95, 128, 256}, 2);
    REQUIRE(minj == Approx(-0.20281660707222404).epsilon(1e-9));
    REQUIRE(minj < -0.1);
}
