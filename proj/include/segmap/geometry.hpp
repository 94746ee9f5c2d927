#pragma once
// Circular-segment geometry: the region cut from the unit disk by a vertical
// chord, its counterclockwise boundary parametrization, and the corner-angle
// estimates that drive the boundary repair bounds.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "segmap/numerics.hpp"

namespace segmap {

inline constexpr double geometric_slack = 1e-12;

// S = { |z| < 1, cos(omega) < Re z < 1 } for an opening half-angle
// omega in (0, pi/2). The curved side is the arc {e^{it} : |t| <= omega},
// the flat side is the chord x = cos(omega), and the corners are e^{+-i omega}.
class Segment {
public:
    explicit Segment(double omega) : omega_(omega) {
        if (!(omega > 0.0 && omega < std::numbers::pi / 2))
            throw std::invalid_argument("omega must lie in (0, pi/2)");
    }

    [[nodiscard]] double omega() const noexcept { return omega_; }
    [[nodiscard]] cplx corner_upper() const { return {std::cos(omega_), std::sin(omega_)}; }
    [[nodiscard]] cplx corner_lower() const { return {std::cos(omega_), -std::sin(omega_)}; }
    [[nodiscard]] double base_abscissa() const { return std::cos(omega_); }
    [[nodiscard]] double base_half_height() const { return std::sin(omega_); }
    // Farthest point pair is the two corners.
    [[nodiscard]] double diameter() const { return 2.0 * std::sin(omega_); }
    [[nodiscard]] double arc_length() const { return 2.0 * omega_; }
    [[nodiscard]] double boundary_length() const { return 2.0 * omega_ + 2.0 * std::sin(omega_); }

private:
    double omega_;
};

// Point of the unit circle stored by its angle.
struct CirclePoint {
    double angle = 0.0;
    [[nodiscard]] cplx value() const { return {std::cos(angle), std::sin(angle)}; }
};

// Closed arc [lo, hi] in angle coordinates, lo <= hi. A single point
// (lo == hi) is a legitimate degenerate arc.
struct ArcInterval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] double length() const { return hi - lo; }
};

[[nodiscard]] inline std::pair<cplx, cplx> segment_corners(const Segment& seg) {
    return {seg.corner_upper(), seg.corner_lower()};
}

/// Arclength-proportional boundary point for t in [0, 1): counterclockwise
/// from the lower corner e^{-i omega}, first along the arc through 1, then
/// down the chord from the upper corner back to the start.
[[nodiscard]] inline cplx parametrize_segment_boundary(const Segment& seg, double t) {
    if (!(t >= 0.0 && t < 1.0))
        throw std::invalid_argument("boundary parameter must lie in [0, 1)");
    const double om = seg.omega();
    const double s = t * seg.boundary_length();
    if (s <= seg.arc_length()) {
        const double ang = -om + s;
        return {std::cos(ang), std::sin(ang)};
    }
    const double down = s - seg.arc_length();  // distance travelled along the chord
    return {std::cos(om), std::sin(om) - down};
}

/// c^2 - (a+b)^2 sin^2(omega/4) where c^2 = a^2 + b^2 - 2ab cos(gamma).
/// Nonnegative whenever gamma >= omega/2, because
///   a^2 + b^2 - 2ab cos(omega/2) = (a+b)^2 - 4ab cos^2(omega/4)
/// and 4ab <= (a+b)^2. Equality exactly at a = b, gamma = omega/2.
[[nodiscard]] inline double law_of_cosines_bound(double a, double b, double gamma,
                                                 double omega) {
    if (!(a > 0.0 && b > 0.0))
        throw std::invalid_argument("side lengths must be positive");
    if (!(omega > 0.0 && omega < std::numbers::pi / 2))
        throw std::invalid_argument("omega must lie in (0, pi/2)");
    if (!(gamma >= omega / 2 && gamma <= std::numbers::pi))
        throw std::invalid_argument("gamma must lie in [omega/2, pi]");
    const double c2 = a * a + b * b - 2.0 * a * b * std::cos(gamma);
    const double s = std::sin(omega / 4);
    return c2 - (a + b) * (a + b) * s * s;
}

struct AngleRangeResult {
    double gamma = 0.0;       // angle at the upper corner subtended by A and B
    bool in_range = false;    // omega/2 - slack <= gamma <= omega + slack
    bool upper_edge = false;  // |gamma - omega| <= slack
};

/// Angle at the upper corner e^{i omega} in the triangle (A, B, corner),
/// for A on the upper half of the arc and B on the upper half of the chord.
/// The angle always lands in [omega/2, omega): omega/2 at the midpoints,
/// approaching omega as both points collapse into the corner (the interior
/// corner angle of the segment equals omega by the inscribed-angle relation).
[[nodiscard]] inline AngleRangeResult angle_range_check(cplx arc_point, cplx base_point,
                                                        const Segment& seg) {
    const double om = seg.omega();
    const double tol = 1e-9;  // membership tolerance for the two inputs
    if (std::abs(std::abs(arc_point) - 1.0) > tol)
        throw std::invalid_argument("arc point must lie on the unit circle");
    const double th = std::atan2(arc_point.imag(), arc_point.real());
    if (!(th >= -tol && th <= om + tol))
        throw std::invalid_argument("arc point must lie on the upper half of the arc");
    if (std::abs(base_point.real() - seg.base_abscissa()) > tol)
        throw std::invalid_argument("base point must lie on the chord");
    if (!(base_point.imag() >= -tol && base_point.imag() <= seg.base_half_height() + tol))
        throw std::invalid_argument("base point must lie on the upper half of the chord");

    const cplx corner = seg.corner_upper();
    const cplx da = arc_point - corner;
    const cplx db = base_point - corner;
    if (std::abs(da) < geometric_slack || std::abs(db) < geometric_slack)
        throw std::invalid_argument("degenerate triangle: point coincides with the corner");

    AngleRangeResult r;
    r.gamma = std::abs(std::arg(da / db));
    r.in_range = (r.gamma >= om / 2 - geometric_slack) && (r.gamma <= om + geometric_slack);
    r.upper_edge = std::abs(r.gamma - om) <= geometric_slack;
    return r;
}

}  // namespace segmap
