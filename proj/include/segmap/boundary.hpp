#pragma once
// Boundary correspondences of the unit circle onto a circular segment, and
// the piecewise-linear repair operator that turns a monotone boundary map
// with flat stretches into a boundary homeomorphism while moving it by at
// most O(1/m) uniformly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "segmap/geometry.hpp"

namespace segmap {

// ---------------------------------------------------------------- MonotonePhi

// Piecewise-linear nondecreasing angle correspondence, stored as parallel
// node arrays. Evaluation clamps to the node range.
struct MonotonePhi {
    std::vector<double> theta;
    std::vector<double> phi;

    [[nodiscard]] std::size_t size() const { return theta.size(); }

    [[nodiscard]] double operator()(double t) const {
        if (theta.empty()) throw std::invalid_argument("empty node list");
        if (t <= theta.front()) return phi.front();
        if (t >= theta.back()) return phi.back();
        const auto it = std::upper_bound(theta.begin(), theta.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - theta.begin()) - 1;
        const double dt = theta[i + 1] - theta[i];
        if (dt <= 0.0) return phi[i];
        return phi[i] + (t - theta[i]) * ((phi[i + 1] - phi[i]) / dt);
    }

    // Smallest slope over the linear pieces; 0 for flat stretches.
    [[nodiscard]] double min_slope() const {
        double s = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < theta.size(); ++i)
            s = std::min(s, (phi[i + 1] - phi[i]) / (theta[i + 1] - theta[i]));
        return s;
    }
};

struct PhiDiagnostics {
    bool ok = true;
    std::size_t index = 0;  // first offending node when !ok
    std::string message;
};

/// Checks the fixture invariants: at least two nodes, strictly increasing
/// theta running exactly from -omega to omega, nondecreasing phi with the
/// endpoints pinned to -omega and omega. Reports the first violation.
[[nodiscard]] inline PhiDiagnostics validate_monotone(const MonotonePhi& p, const Segment& seg) {
    const double om = seg.omega();
    auto fail = [](std::size_t i, std::string msg) {
        return PhiDiagnostics{false, i, std::move(msg)};
    };
    if (p.theta.size() != p.phi.size())
        return fail(0, "node arrays have different lengths");
    if (p.size() < 2) return fail(0, "need at least two nodes");
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!std::isfinite(p.theta[i]) || !std::isfinite(p.phi[i]))
            return fail(i, "non-finite node");
    for (std::size_t i = 1; i < p.size(); ++i)
        if (!(p.theta[i] > p.theta[i - 1]))
            return fail(i, "theta nodes must be strictly increasing");
    if (std::abs(p.theta.front() + om) > geometric_slack)
        return fail(0, "first theta node must equal -omega");
    if (std::abs(p.theta.back() - om) > geometric_slack)
        return fail(p.size() - 1, "last theta node must equal omega");
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p.phi[i] < p.phi[i - 1])
            return fail(i, "phi nodes must be nondecreasing");
    if (std::abs(p.phi.front() + om) > geometric_slack)
        return fail(0, "phi must equal -omega at the first node");
    if (std::abs(p.phi.back() - om) > geometric_slack)
        return fail(p.size() - 1, "phi must equal omega at the last node");
    return {};
}

// ---------------------------------------------------------------------- ArcSet

// Finite union of closed arcs inside [-omega, omega] on which the boundary
// map is kept verbatim. Components must be sorted and separated by gaps of
// positive length; shared endpoints are rejected.
struct ArcSet {
    std::vector<ArcInterval> components;
    [[nodiscard]] bool empty() const { return components.empty(); }
};

[[nodiscard]] inline PhiDiagnostics validate_arcset(const ArcSet& k, const Segment& seg) {
    const double om = seg.omega();
    for (std::size_t i = 0; i < k.components.size(); ++i) {
        const ArcInterval& c = k.components[i];
        if (!std::isfinite(c.lo) || !std::isfinite(c.hi) || c.lo > c.hi)
            return {false, i, "arc must satisfy lo <= hi"};
        if (c.lo < -om - geometric_slack || c.hi > om + geometric_slack)
            return {false, i, "arc must lie inside [-omega, omega]"};
        if (i > 0 && !(c.lo > k.components[i - 1].hi))
            return {false, i, "arcs must be disjoint with positive gaps"};
    }
    return {};
}

// Closures of the complementary arcs of K in [-omega, omega], in order.
// Empty edge pieces (K touching an endpoint) are dropped.
[[nodiscard]] inline std::vector<ArcInterval> complement_components(const ArcSet& k,
                                                                    const Segment& seg) {
    const double om = seg.omega();
    std::vector<ArcInterval> out;
    double lo = -om;
    for (const ArcInterval& c : k.components) {
        if (c.lo > lo) out.push_back({lo, c.lo});
        lo = c.hi;
    }
    if (om > lo) out.push_back({lo, om});
    return out;
}

// ---------------------------------------------------- segment boundary map

// Full-circle boundary correspondence built from an angle map phi on the arc
// side. Angles inside [-omega, omega] land on the arc at e^{i phi(theta)};
// the remaining angles are carried affinely onto the vertical chord,
//   theta in [omega, 2 pi - omega] -> cos(omega) + i sin(omega) (pi - theta)/(pi - omega),
// so theta = pi hits the chord midpoint and the corners glue continuously.
struct SegmentBoundaryMap {
    Segment segment;
    MonotonePhi phi;

    [[nodiscard]] cplx value(double angle) const {
        const double om = segment.omega();
        double t = std::fmod(angle + om, two_pi);
        if (t < 0.0) t += two_pi;
        t -= om;  // now in [-omega, 2 pi - omega)
        if (t <= om) {
            const double f = phi(t);
            return {std::cos(f), std::sin(f)};
        }
        const double tau = std::sin(om) * (std::numbers::pi - t) / (std::numbers::pi - om);
        return {std::cos(om), tau};
    }
};

/// Validates phi against the segment and wraps it into the full-circle map.
[[nodiscard]] inline SegmentBoundaryMap canonical_fixture_boundary(const Segment& seg,
                                                                   MonotonePhi phi) {
    if (const PhiDiagnostics d = validate_monotone(phi, seg); !d.ok) {
        std::ostringstream os;
        os << "invalid boundary map at node " << d.index << ": " << d.message;
        throw std::invalid_argument(os.str());
    }
    return {seg, std::move(phi)};
}

// ------------------------------------------------------------- repair operator

namespace detail {

// Index of an exact node match, or the insertion point with a fresh
// interpolated node. Returns the index of x's node.
inline std::size_t ensure_node(MonotonePhi& p, double x) {
    const auto it = std::lower_bound(p.theta.begin(), p.theta.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - p.theta.begin());
    if (i < p.theta.size() && p.theta[i] == x) return i;
    const double v = p(x);
    p.theta.insert(p.theta.begin() + static_cast<std::ptrdiff_t>(i), x);
    p.phi.insert(p.phi.begin() + static_cast<std::ptrdiff_t>(i), v);
    return i;
}

// In-place rewrite of the nodes inside [alpha, beta] (which must both be
// nodes). The blend
//   phi_m = (1 - (beta-alpha)/m) (phi - phi(alpha))
//           + ((phi(beta)-phi(alpha))/m) (theta - alpha) + phi(alpha)
// is evaluated in the equivalent correction form
//   phi_m = phi + v (theta - alpha) - u (phi - phi(alpha)),
// u = (beta-alpha)/m, v = (phi(beta)-phi(alpha))/m, so identity input stays
// bitwise identical. Endpoint values are snapped to phi(alpha), phi(beta)
// (the formula fixes them exactly; snapping removes product-order rounding).
// Returns the smallest slope over the rewritten pieces.
inline double rewrite_component(MonotonePhi& p, std::size_t ia, std::size_t ib, int m) {
    const double alpha = p.theta[ia], beta = p.theta[ib];
    const double pa = p.phi[ia], pb = p.phi[ib];
    const double u = (beta - alpha) / m;
    const double v = (pb - pa) / m;
    for (std::size_t j = ia; j <= ib; ++j)
        p.phi[j] = p.phi[j] + (v * (p.theta[j] - alpha) - u * (p.phi[j] - pa));
    p.phi[ia] = pa;
    p.phi[ib] = pb;
    double slope = std::numeric_limits<double>::infinity();
    for (std::size_t j = ia; j < ib; ++j)
        slope = std::min(slope, (p.phi[j + 1] - p.phi[j]) / (p.theta[j + 1] - p.theta[j]));
    return slope;
}

}  // namespace detail

/// Single-component repair: restricts phi to [alpha, beta] and applies the
/// blend above. Requires m >= 4 and strictly separated endpoint values
/// phi(alpha) < phi(beta); the result is strictly increasing with slope at
/// least (phi(beta) - phi(alpha))/m, and agrees with phi at both endpoints.
[[nodiscard]] inline MonotonePhi homeomorphize_component(const MonotonePhi& phi, double alpha,
                                                         double beta, int m) {
    if (m < 4) throw std::invalid_argument("m must be at least 4");
    if (!(alpha < beta)) throw std::invalid_argument("need alpha < beta");
    if (phi.size() < 2 || alpha < phi.theta.front() - geometric_slack ||
        beta > phi.theta.back() + geometric_slack)
        throw std::invalid_argument("[alpha, beta] must lie inside the node range");
    MonotonePhi work = phi;
    const std::size_t ia = detail::ensure_node(work, alpha);
    const std::size_t ib = detail::ensure_node(work, beta);
    if (!(work.phi[ia] < work.phi[ib]))
        throw std::invalid_argument("phi(alpha) == phi(beta): endpoint values must be distinct");
    detail::rewrite_component(work, ia, ib, m);
    MonotonePhi out;
    out.theta.assign(work.theta.begin() + static_cast<std::ptrdiff_t>(ia),
                     work.theta.begin() + static_cast<std::ptrdiff_t>(ib) + 1);
    out.phi.assign(work.phi.begin() + static_cast<std::ptrdiff_t>(ia),
                   work.phi.begin() + static_cast<std::ptrdiff_t>(ib) + 1);
    return out;
}

struct ReplacedComponent {
    std::size_t index = 0;     // position among the complementary arcs
    double alpha = 0.0, beta = 0.0;
    double phi_alpha = 0.0, phi_beta = 0.0;
    double slope_floor = 0.0;  // (phi(beta) - phi(alpha)) / m
    double min_slope = 0.0;    // achieved minimum over the rewritten pieces
};

struct Homeomorphized {
    SegmentBoundaryMap map;
    std::vector<ReplacedComponent> components;
};

/// Applies the repair on every complementary arc of K and keeps the map
/// verbatim on K and on the chord side. Fails if some complementary arc has
/// equal phi values at its endpoints (then no strictly monotone blend with
/// the same endpoints exists), naming the offending component.
[[nodiscard]] inline Homeomorphized homeomorphize(const SegmentBoundaryMap& f, const ArcSet& k,
                                                  int m) {
    if (m < 4) throw std::invalid_argument("m must be at least 4");
    if (const PhiDiagnostics d = validate_arcset(k, f.segment); !d.ok) {
        std::ostringstream os;
        os << "invalid arc set at component " << d.index << ": " << d.message;
        throw std::invalid_argument(os.str());
    }
    const std::vector<ArcInterval> comps = complement_components(k, f.segment);

    MonotonePhi work = f.phi;
    for (const ArcInterval& c : comps) {
        detail::ensure_node(work, c.lo);
        detail::ensure_node(work, c.hi);
    }
    // Node insertion shifts indices, so locate the spans only after every
    // endpoint is present.
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    spans.reserve(comps.size());
    for (const ArcInterval& c : comps) {
        const auto lo = std::lower_bound(work.theta.begin(), work.theta.end(), c.lo);
        const auto hi = std::lower_bound(work.theta.begin(), work.theta.end(), c.hi);
        spans.emplace_back(static_cast<std::size_t>(lo - work.theta.begin()),
                           static_cast<std::size_t>(hi - work.theta.begin()));
    }
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (!(work.phi[spans[i].first] < work.phi[spans[i].second])) {
            std::ostringstream os;
            os << "injectivity witness fails on complementary component " << i << " = ["
               << comps[i].lo << ", " << comps[i].hi << "]: phi takes the value "
               << work.phi[spans[i].first] << " at both endpoints";
            throw std::invalid_argument(os.str());
        }
    }

    Homeomorphized out{{f.segment, {}}, {}};
    out.components.reserve(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        ReplacedComponent rc;
        rc.index = i;
        rc.alpha = work.theta[spans[i].first];
        rc.beta = work.theta[spans[i].second];
        rc.phi_alpha = work.phi[spans[i].first];
        rc.phi_beta = work.phi[spans[i].second];
        rc.slope_floor = (rc.phi_beta - rc.phi_alpha) / m;
        rc.min_slope = detail::rewrite_component(work, spans[i].first, spans[i].second, m);
        out.components.push_back(rc);
    }
    out.map.phi = std::move(work);
    return out;
}

// --------------------------------------------------------------- comparisons

/// sup |f - g| over the whole circle, taken over the union of both node sets,
/// `samples` extra points per linear piece (at least 2), and a sweep of the
/// chord side. Piecewise-linear data attains its extremes near difference
/// breakpoints, so this is exact up to the sampling of the smooth factor.
[[nodiscard]] inline double sup_distance(const SegmentBoundaryMap& f,
                                         const SegmentBoundaryMap& g, int samples) {
    if (f.segment.omega() != g.segment.omega())
        throw std::invalid_argument("segment mismatch");
    if (samples < 2) throw std::invalid_argument("need at least 2 samples per piece");
    std::vector<double> knots;
    knots.reserve(f.phi.size() + g.phi.size());
    knots.insert(knots.end(), f.phi.theta.begin(), f.phi.theta.end());
    knots.insert(knots.end(), g.phi.theta.begin(), g.phi.theta.end());
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    double sup = 0.0;
    auto probe = [&](double t) { sup = std::max(sup, std::abs(f.value(t) - g.value(t))); };
    for (std::size_t i = 0; i < knots.size(); ++i) {
        probe(knots[i]);
        if (i + 1 < knots.size()) {
            const double a = knots[i], b = knots[i + 1];
            for (int j = 1; j <= samples; ++j)
                probe(a + (b - a) * j / (samples + 1));
        }
    }
    const double om = f.segment.omega();
    const int chord_sweep = 4 * samples + 1;
    for (int j = 0; j <= chord_sweep; ++j)
        probe(om + (two_pi - 2 * om) * j / chord_sweep);
    return sup;
}

/// Minimum of
///   (5 / sin(omega/4)) |f(xi1) - f(xi2)| + 4 |xi1 - xi2| - |f_m(xi1) - f_m(xi2)|
/// over `pairs` seeded random circle pairs plus every pair of repair nodes.
/// The repaired map satisfies this with a nonnegative margin; the check
/// reports the worst sampled value so callers can assert it stays above a
/// small negative slack.
[[nodiscard]] inline double quasi_lipschitz_check(const SegmentBoundaryMap& f,
                                                  const SegmentBoundaryMap& fm,
                                                  const Segment& seg, int pairs,
                                                  std::uint64_t seed = 1) {
    if (f.segment.omega() != seg.omega() || fm.segment.omega() != seg.omega())
        throw std::invalid_argument("segment mismatch");
    if (pairs < 0) throw std::invalid_argument("pairs must be nonnegative");
    const double c5 = 5.0 / std::sin(seg.omega() / 4);
    auto margin = [&](double t1, double t2) {
        const cplx x1 = {std::cos(t1), std::sin(t1)}, x2 = {std::cos(t2), std::sin(t2)};
        return c5 * std::abs(f.value(t1) - f.value(t2)) + 4.0 * std::abs(x1 - x2) -
               std::abs(fm.value(t1) - fm.value(t2));
    };
    double worst = std::numeric_limits<double>::infinity();
    const std::vector<double>& nodes = fm.phi.theta;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            worst = std::min(worst, margin(nodes[i], nodes[j]));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    for (int i = 0; i < pairs; ++i) {
        const double t1 = ang(rng), t2 = ang(rng);
        worst = std::min(worst, margin(t1, t2));
    }
    return worst;
}

}  // namespace segmap
