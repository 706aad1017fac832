#include "blindspot/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace blindspot {

PolarPoint sample_uniform_disc(double R, RandomStream& rng) {
    const double r = R * std::sqrt(rng.uniform());
    const double phi = kTwoPi * rng.uniform();
    return {r, phi};
}

int sample_poisson(double mean, RandomStream& rng) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<int> dist(mean);
    return dist(rng);
}

Scene sample_scene(const EnvParams& z, double lambda, RandomStream& rng) {
    Scene s;
    s.z = z;
    const int k = sample_poisson(z.mean_obstacle_count(), rng);
    s.obstacles.reserve(k);
    for (int i = 0; i < k; ++i) s.obstacles.emplace_back(sample_uniform_disc(z.R, rng));
    const int n = sample_poisson(lambda * z.disc_area(), rng);
    s.anchors.reserve(n);
    for (int i = 0; i < n; ++i) s.anchors.push_back(sample_uniform_disc(z.R, rng));
    return s;
}

Scene sample_scene_at_least_two(const EnvParams& z, RandomStream& rng) {
    if (z.lambda0 <= 0.0) throw std::domain_error("cannot condition on two obstacles when lambda0 = 0");
    for (;;) {
        Scene s = sample_scene(z, 0.0, rng);
        if (s.obstacles.size() >= 2) return s;
    }
}

std::vector<Obstacle> sorted_by_distance(std::vector<Obstacle> obstacles) {
    std::sort(obstacles.begin(), obstacles.end(),
              [](const Obstacle& a, const Obstacle& b) { return a.mid.r < b.mid.r; });
    return obstacles;
}

namespace {

template <class Visible>
bool count_below(const Scene& scene, int kv, const Visible& visible) {
    int seen = 0;
    for (const PolarPoint& a : scene.anchors) {
        if (visible(a) && ++seen >= kv) return false;
    }
    return true;
}

}  // namespace

bool is_blind(const Scene& scene, int kv) {
    return count_below(scene, kv, [&](const PolarPoint& a) {
        return is_visible(a, scene.obstacles, scene.z);
    });
}

bool is_blind_sector(const Scene& scene, int kv) {
    return count_below(scene, kv, [&](const PolarPoint& a) {
        return is_visible_sector(a, scene.obstacles, scene.z);
    });
}

Estimate summarize(const std::vector<double>& values, std::uint64_t seed) {
    Estimate e;
    e.n = values.size();
    e.seed = seed;
    if (values.empty()) return e;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / static_cast<double>(e.n);
    if (e.n < 2) return e;
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.stderr_ = std::sqrt(ss / static_cast<double>(e.n - 1) / static_cast<double>(e.n));
    return e;
}

Estimate estimate_b(const BlindSpotParams& bp, const MonteCarloOptions& opt) {
    if (opt.replications < 1) throw std::invalid_argument("estimate_b needs at least one replication");
    const auto values = parallel_map<double>(opt.replications, opt.workers, [&](std::size_t i) {
        RandomStream rng(opt.seed, i);
        const Scene s = sample_scene(bp.z, bp.lambda, rng);
        return is_blind(s, bp.kv) ? 1.0 : 0.0;
    });
    return summarize(values, opt.seed);
}

Estimate estimate_gamma(const EnvParams& z, const MonteCarloOptions& opt) {
    const AzimuthRange full[] = {kFullCircle};
    const auto values = parallel_map<double>(opt.replications, opt.workers, [&](std::size_t i) {
        RandomStream rng(opt.seed, i);
        const auto obstacles = sorted_by_distance(sample_scene_at_least_two(z, rng).obstacles);
        const double total = exact_visible_area(obstacles, z);
        if (total <= 0.0) return 0.0;
        const double beyond = exact_visible_area(obstacles, z, obstacles[1].mid.r, full);
        return beyond / total;
    });
    return summarize(values, opt.seed);
}

Estimate estimate_far_shadow_fraction(const EnvParams& z, const MonteCarloOptions& opt) {
    const double disc = z.disc_area();
    const auto values = parallel_map<double>(opt.replications, opt.workers, [&](std::size_t i) {
        RandomStream rng(opt.seed, i);
        const auto obstacles = sorted_by_distance(sample_scene_at_least_two(z, rng).obstacles);
        const double shadow_all = disc - exact_visible_area(obstacles, z);
        if (shadow_all <= 0.0) return 0.0;
        const std::span<const Obstacle> nearest(obstacles.data(), 2);
        const double shadow_near = disc - exact_visible_area(nearest, z);
        return std::clamp(1.0 - shadow_near / shadow_all, 0.0, 1.0);
    });
    return summarize(values, opt.seed);
}

Estimate estimate_Vin_area(const EnvParams& z, const MonteCarloOptions& opt) {
    const auto values = parallel_map<double>(opt.replications, opt.workers, [&](std::size_t i) {
        RandomStream rng(opt.seed, i);
        const auto obstacles = sorted_by_distance(sample_scene_at_least_two(z, rng).obstacles);
        const ShadowSector sectors[] = {sector(obstacles[0].mid, z), sector(obstacles[1].mid, z)};
        const auto span = union_ranges(sectors);
        return exact_visible_area(obstacles, z, obstacles[1].mid.r, span);
    });
    return summarize(values, opt.seed);
}

Estimate estimate_mean_visible_area(const EnvParams& z, const MonteCarloOptions& opt,
                                    bool at_least_two) {
    const auto values = parallel_map<double>(opt.replications, opt.workers, [&](std::size_t i) {
        RandomStream rng(opt.seed, i);
        const Scene s = at_least_two ? sample_scene_at_least_two(z, rng) : sample_scene(z, 0.0, rng);
        return exact_visible_area(s.obstacles, z);
    });
    return summarize(values, opt.seed);
}

double Histogram::mean() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) sum += bin_center(i) * counts[i];
    return total > 0 ? sum / static_cast<double>(total) : 0.0;
}

double Histogram::blind_spot_probability(double lambda, int kv) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) sum += g(bin_center(i), lambda, kv) * counts[i];
    }
    return total > 0 ? sum / static_cast<double>(total) : 0.0;
}

Histogram estimate_Av_histogram(const EnvParams& z, std::size_t bins, const MonteCarloOptions& opt) {
    if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
    const double top = z.disc_area();
    const auto values = parallel_map<double>(opt.replications, opt.workers, [&](std::size_t i) {
        RandomStream rng(opt.seed, i);
        const Scene s = sample_scene(z, 0.0, rng);
        return exact_visible_area(s.obstacles, z);
    });
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = top * static_cast<double>(i) / bins;
    h.counts.assign(bins, 0);
    for (double v : values) {
        auto bin = static_cast<std::size_t>(std::clamp(v, 0.0, top) / top * bins);
        h.counts[std::min(bin, bins - 1)] += 1;
    }
    h.total = values.size();
    return h;
}

}  // namespace blindspot
