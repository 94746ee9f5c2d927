#pragma once
// Deterministic reduction and quadrature-grid helpers shared across modules.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace segmap {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925287;

// Pairwise (cascade) summation. Keeps rounding error at O(eps log n) even for
// sums whose running partials are much larger than the result, and gives the
// same bits for the same input order regardless of the caller's threading.
template <class T>
[[nodiscard]] T pairwise_sum(std::span<const T> v) {
    if (v.size() <= 8) {
        T acc{};
        for (const T& x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <class T>
[[nodiscard]] T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v));
}

// Runs body(0..tiles-1) on at most `threads` workers. Tile boundaries do not
// depend on the worker count, so callers that store one partial result per
// tile and reduce in tile order get bit-identical totals for any `threads`.
inline void run_tiles(std::size_t tiles, int threads,
                      const std::function<void(std::size_t)>& body) {
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), tiles);
    if (workers <= 1) {
        for (std::size_t t = 0; t < tiles; ++t) body(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= tiles) return;
                body(t);
            }
        });
    }
    for (auto& th : pool) th.join();
}

// Polar quadrature grid over {|z| <= r_max}: midpoint rule in u = r^2 and in
// theta. Exact for integrands with constant |gradient|^2, and it never places
// a node on r = 0 or r = r_max, so evaluators restricted to the open disk are
// safe even at r_max = 1.
struct PolarGrid {
    double r_max = 0.95;
    int n_r = 128;
    int n_theta = 256;

    [[nodiscard]] double cell_area() const {
        return (r_max * r_max / n_r) * (two_pi / n_theta) * 0.5;
    }
    [[nodiscard]] double radius(int i) const {
        return std::sqrt(r_max * r_max * (i + 0.5) / n_r);
    }
    [[nodiscard]] double angle(int j) const {
        return two_pi * (j + 0.5) / n_theta;
    }
    [[nodiscard]] bool valid() const {
        return r_max > 0.0 && r_max <= 1.0 && n_r >= 1 && n_theta >= 1;
    }
    void validate() const {
        if (!valid())
            throw std::invalid_argument(
                "polar grid needs r_max in (0, 1] and positive node counts");
    }
};

}  // namespace segmap
