#pragma once

// Deterministic geometry of the facing line-segment obstacle model around a
// target at the origin: shadow sectors, their azimuthal overlap, per-point
// visibility, and the exact visible area of one realization.

#include <numbers>
#include <span>
#include <vector>

namespace blindspot {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2pi).
double wrap_angle(double a);

/// Reduce an angle difference to (-pi, pi].
double angle_diff(double a, double b);

/// Environment parameters: obstacle midpoint intensity, obstacle length and
/// communication radius.
struct EnvParams {
    double lambda0 = 0.0;
    double L = 0.0;
    double R = 1.0;

    EnvParams() = default;
    EnvParams(double lambda0_, double L_, double R_);

    /// Builds the normalized parameterization used throughout the tools:
    /// mean obstacle count lambda0*pi*R^2 and relative length L/R, with R = 1
    /// unless given.
    static EnvParams from_normalized(double mean_obstacles, double L_over_R, double R = 1.0);

    double mean_obstacle_count() const { return lambda0 * kPi * R * R; }
    double disc_area() const { return kPi * R * R; }
    /// Radius beyond which an obstacle chord is clipped by the disc rim.
    double branch_radius() const;
    /// Same parameters with the disc radius replaced.
    EnvParams with_radius(double radius) const;
};

struct PolarPoint {
    double r = 0.0;
    double phi = 0.0;  // always in [0, 2pi)

    PolarPoint() = default;
    PolarPoint(double r_, double phi_);
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Segment {
    Vec2 a;
    Vec2 b;
};

Vec2 to_cartesian(const PolarPoint& p);

struct ShadowSector {
    double theta = 0.0;  // angular width in [0, pi]
    double l = 0.0;      // lower end, [0, 2pi)
    double u = 0.0;      // upper end, [0, 2pi)

    bool wraps() const { return l > u; }
    /// Closed arc membership, wrap-aware.
    bool contains(double azimuth) const;
};

struct Obstacle {
    PolarPoint mid;

    Obstacle() = default;
    explicit Obstacle(PolarPoint p) : mid(p) {}
    Obstacle(double r, double phi) : mid(r, phi) {}
};

/// Angular width of the shadow cast by an obstacle centered at p.
double theta(const PolarPoint& p, const EnvParams& z);

/// Length of the blocking part of the chord (clipped at the disc rim).
double chord_x(const PolarPoint& p, const EnvParams& z);

/// Area of D_o(R) hidden by a single obstacle centered at p.
double shadow_area_single(const PolarPoint& p, const EnvParams& z);

ShadowSector sector(const PolarPoint& p, const EnvParams& z);

/// Signed azimuthal overlap between two sectors; negative when disjoint.
/// s1 must belong to the nearer obstacle (its width is at least s2's).
double epsilon_overlap(const ShadowSector& s1, const ShadowSector& s2);

/// Fraction of the farther obstacle's sector covered by the nearer one.
double alpha_overlap(const PolarPoint& p1, const PolarPoint& p2, const EnvParams& z);

/// The facing chord of length L centered at p.
Segment obstacle_segment(const PolarPoint& p, const EnvParams& z);

/// Line-of-sight test by segment intersection against every chord.
/// Points on a chord or a shadow boundary are blocked.
bool is_visible(const PolarPoint& q, std::span<const Obstacle> obstacles, const EnvParams& z);

/// Same predicate evaluated through the shadow sectors (|dphi| <= theta/2 and
/// q beyond the chord line). Kept as an independent cross-check.
bool is_visible_sector(const PolarPoint& q, std::span<const Obstacle> obstacles,
                       const EnvParams& z);

/// A closed azimuthal interval [begin, end] with 0 <= begin <= end <= 2pi.
struct AzimuthRange {
    double begin = 0.0;
    double end = 0.0;
};

/// Splits a sector into one or two non-wrapping ranges.
std::vector<AzimuthRange> sector_ranges(const ShadowSector& s);

/// Union of sectors as sorted, disjoint ranges; and its complement.
std::vector<AzimuthRange> union_ranges(std::span<const ShadowSector> sectors);
std::vector<AzimuthRange> complement_ranges(std::span<const AzimuthRange> ranges);

inline constexpr AzimuthRange kFullCircle{0.0, kTwoPi};

/// Distance from the origin to the first obstacle (or the rim) along azimuth phi.
double visibility_radius(double phi, std::span<const Obstacle> obstacles, const EnvParams& z);

/// Exact area of the visible part of D_o(R).
double exact_visible_area(std::span<const Obstacle> obstacles, const EnvParams& z);

/// Visible area restricted to radii above inner_radius and to the given
/// azimuth ranges.
double exact_visible_area(std::span<const Obstacle> obstacles, const EnvParams& z,
                          double inner_radius, std::span<const AzimuthRange> ranges);

}  // namespace blindspot
