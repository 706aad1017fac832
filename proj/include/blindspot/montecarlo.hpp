#pragma once

// Ground-truth simulation of the typical target: Poisson obstacles and
// anchors in D_o(R), exact per-scene visibility, and estimators built on
// independent replications.

#include <cstdint>
#include <vector>

#include "blindspot/analytic.hpp"
#include "blindspot/geometry.hpp"
#include "blindspot/parallel.hpp"
#include "blindspot/random.hpp"

namespace blindspot {

struct Scene {
    EnvParams z;
    std::vector<Obstacle> obstacles;
    std::vector<PolarPoint> anchors;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Uniform point in the disc of radius R (r = R sqrt(u), phi = 2 pi v).
PolarPoint sample_uniform_disc(double R, RandomStream& rng);

/// Poisson draw; zero mean gives zero.
int sample_poisson(double mean, RandomStream& rng);

/// Obstacles first, then anchors, both from the same stream.
Scene sample_scene(const EnvParams& z, double lambda, RandomStream& rng);

/// Obstacles sorted by distance from the target.
std::vector<Obstacle> sorted_by_distance(std::vector<Obstacle> obstacles);

bool is_blind(const Scene& scene, int kv);

/// is_blind through the sector predicate; used to cross-check.
bool is_blind_sector(const Scene& scene, int kv);

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample standard deviation / sqrt(n)
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// Mean and standard error of per-replication values, summed in index order.
Estimate summarize(const std::vector<double>& values, std::uint64_t seed);

struct MonteCarloOptions {
    std::size_t replications = 50000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

Estimate estimate_b(const BlindSpotParams& bp, const MonteCarloOptions& opt);

/// E[A_f / A_v] over scenes with at least two obstacles, where A_f is the
/// visible area beyond the second-nearest obstacle.
Estimate estimate_gamma(const EnvParams& z, const MonteCarloOptions& opt);

/// Share of the shadowed area not explained by the nearest two obstacles:
/// E[1 - shadow(nearest two) / shadow(all)] over scenes with two or more
/// obstacles.
Estimate estimate_far_shadow_fraction(const EnvParams& z, const MonteCarloOptions& opt);

/// Mean visible area beyond r2 inside the azimuth span of the two nearest
/// shadows, over scenes with at least two obstacles.
Estimate estimate_Vin_area(const EnvParams& z, const MonteCarloOptions& opt);

/// Mean exact visible area; optionally only over scenes with two or more
/// obstacles (rejection sampled).
Estimate estimate_mean_visible_area(const EnvParams& z, const MonteCarloOptions& opt,
                                    bool at_least_two = false);

struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
    std::size_t total = 0;

    double bin_center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
    double mean() const;
    /// Riemann sum of g against the bin masses.
    double blind_spot_probability(double lambda, int kv) const;
};

/// Histogram of the exact visible area over [0, pi R^2].
Histogram estimate_Av_histogram(const EnvParams& z, std::size_t bins, const MonteCarloOptions& opt);

/// One scene conditioned on at least two obstacles, drawn by rejection from
/// the given stream.
Scene sample_scene_at_least_two(const EnvParams& z, RandomStream& rng);

}  // namespace blindspot
