#include "blindspot/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "blindspot/design.hpp"
#include "blindspot/montecarlo.hpp"

namespace blindspot {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size() || !std::isfinite(v)) {
        throw std::invalid_argument("bad number for " + key + ": '" + text + "'");
    }
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        if (!t.empty() && t[0] != '-') v = std::stoull(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) {
        throw std::invalid_argument("bad unsigned integer for " + key + ": '" + text + "'");
    }
    return v;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Shortest round-trip form, for echoing configuration values.
std::string short_num(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += short_num(xs[i]);
    }
    return out;
}

void check_grid(const char* name, const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
    if (!std::is_sorted(xs.begin(), xs.end())) {
        throw std::invalid_argument(std::string(name) + " grid is not sorted");
    }
}

std::vector<double> step_grid(double start, double stop, double step) {
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    // Snap to 12 decimals so 0.1:1:0.1 yields 0.3 rather than 0.30000000000000004.
    for (long i = 0; i <= n; ++i) {
        out.push_back(std::round((start + step * static_cast<double>(i)) * 1e12) / 1e12);
    }
    return out;
}

MonteCarloOptions mc_options(const ExperimentConfig& cfg) {
    return {cfg.replications, cfg.seed, cfg.workers};
}

void write_header(const ExperimentConfig& cfg, std::ostream& os, bool timestamp) {
    os << "# blindspot " << to_string(cfg.mode) << '\n';
    os << "# mean_obstacles=" << short_num(cfg.mean_obstacles) << " R=" << short_num(cfg.R)
       << " kv=" << cfg.kv << '\n';
    os << "# L_over_R=" << join(cfg.L_grid()) << '\n';
    os << "# mean_anchors=" << join(cfg.anchor_grid()) << '\n';
    os << "# obstacle_counts=" << join(cfg.obstacle_counts) << " mu=" << short_num(cfg.mu)
       << " tol=" << short_num(cfg.tol) << '\n';
    os << "# reps=" << cfg.replications << " seed=" << cfg.seed << '\n';
    if (timestamp) {
        const std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        os << "# generated " << buf << '\n';
    }
}

void write_sweep(const ExperimentConfig& cfg, std::ostream& os, bool timestamp) {
    const auto rows = run_sweep(cfg);
    os << "L_over_R,mean_anchors,b_mc,b_mc_stderr,b_ind,b_2plus\n";
    std::vector<double> wall;
    for (const SweepRow& r : rows) {
        os << num(r.L_over_R) << ',' << num(r.mean_anchors) << ',' << num(r.b_mc) << ','
           << num(r.b_mc_stderr) << ',' << num(r.b_ind) << ',' << num(r.b_2plus) << '\n';
        wall.push_back(r.wall_seconds);
    }
    if (timestamp) {
        os << "# wall_seconds=";
        for (std::size_t i = 0; i < wall.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%s%.3f", i ? "," : "", wall[i]);
            os << buf;
        }
        os << '\n';
    }
}

void write_gamma(const ExperimentConfig& cfg, std::ostream& os) {
    os << "mean_obstacles,L_over_R,gamma,gamma_stderr,af_over_av,af_over_av_stderr\n";
    for (double count : cfg.obstacle_counts) {
        for (double LR : cfg.L_grid()) {
            const EnvParams z = EnvParams::from_normalized(count, LR, cfg.R);
            const Estimate shadow = estimate_far_shadow_fraction(z, mc_options(cfg));
            const Estimate ratio = estimate_gamma(z, mc_options(cfg));
            os << num(count) << ',' << num(LR) << ',' << num(shadow.mean) << ','
               << num(shadow.stderr_) << ',' << num(ratio.mean) << ',' << num(ratio.stderr_) << '\n';
        }
    }
}

void write_design(const ExperimentConfig& cfg, std::ostream& os) {
    os << "L_over_R,mu,lambda_star,mean_anchors_star,b_2plus,b_mc,b_mc_stderr,iterations\n";
    for (double LR : cfg.L_grid()) {
        const EnvParams z = EnvParams::from_normalized(cfg.mean_obstacles, LR, cfg.R);
        const DesignResult d = required_anchor_intensity(z, cfg.mu, cfg.kv, cfg.tol);
        const Estimate mc = estimate_b(BlindSpotParams(d.lambda_star, cfg.kv, z), mc_options(cfg));
        os << num(LR) << ',' << num(cfg.mu) << ',' << num(d.lambda_star) << ','
           << num(d.lambda_star * z.disc_area()) << ',' << num(d.achieved) << ',' << num(mc.mean) << ','
           << num(mc.stderr_) << ',' << d.iterations << '\n';
    }
}

void write_estimate(const ExperimentConfig& cfg, std::ostream& os) {
    os << "L_over_R,mean_anchors,b_mc,b_mc_stderr,b_ind,b_2plus,mean_visible_area,"
          "mean_visible_area_mc,mean_visible_area_mc_stderr\n";
    for (double LR : cfg.L_grid()) {
        const EnvParams z = EnvParams::from_normalized(cfg.mean_obstacles, LR, cfg.R);
        for (double anchors : cfg.anchor_grid()) {
            const auto bp = BlindSpotParams::from_mean_anchors(anchors, cfg.kv, z);
            const Estimate mc = estimate_b(bp, mc_options(cfg));
            const Estimate area = estimate_mean_visible_area(z, mc_options(cfg));
            os << num(LR) << ',' << num(anchors) << ',' << num(mc.mean) << ',' << num(mc.stderr_) << ','
               << num(b_ind(bp)) << ',' << num(b_2plus(bp)) << ',' << num(mean_visible_area(z)) << ','
               << num(area.mean) << ',' << num(area.stderr_) << '\n';
        }
    }
}

}  // namespace

std::string to_string(Mode m) {
    switch (m) {
        case Mode::SweepL: return "sweep-l";
        case Mode::SweepLambda: return "sweep-lambda";
        case Mode::Gamma: return "gamma";
        case Mode::Design: return "design";
        case Mode::Estimate: return "estimate";
    }
    return "?";
}

Mode parse_mode(const std::string& s) {
    for (Mode m : {Mode::SweepL, Mode::SweepLambda, Mode::Gamma, Mode::Design, Mode::Estimate}) {
        if (to_string(m) == s) return m;
    }
    throw std::invalid_argument("unknown mode '" + s + "'");
}

std::vector<double> ExperimentConfig::L_grid() const {
    if (L_over_R) return *L_over_R;
    switch (mode) {
        case Mode::SweepLambda: return {0.1, 0.5, 1.0};
        case Mode::SweepL:
        case Mode::Gamma: return step_grid(0.1, 1.0, 0.1);
        default: return {0.5};
    }
}

std::vector<double> ExperimentConfig::anchor_grid() const {
    if (mean_anchors) return *mean_anchors;
    if (mode == Mode::SweepLambda) return step_grid(4.0, 24.0, 2.0);
    return {15.0};
}

void ExperimentConfig::validate() const {
    check_grid("L_over_R", L_grid());
    check_grid("mean_anchors", anchor_grid());
    check_grid("obstacle_counts", obstacle_counts);
    for (double x : L_grid()) {
        if (x < 0.0) throw std::invalid_argument("L_over_R must be >= 0");
    }
    for (double x : anchor_grid()) {
        if (x < 0.0) throw std::invalid_argument("mean_anchors must be >= 0");
    }
    if (obstacle_counts.front() < 0.0) throw std::invalid_argument("obstacle_counts must be >= 0");
    if (!(mean_obstacles >= 0.0)) throw std::invalid_argument("mean_obstacles must be >= 0");
    if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
    if (kv < 1) throw std::invalid_argument("kv must be >= 1");
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (replications < 2) throw std::invalid_argument("reps must be >= 2");
}

std::vector<double> parse_grid(const std::string& text) {
    const std::string t = trim(text);
    if (std::count(t.begin(), t.end(), ':') == 2) {
        const auto a = t.find(':');
        const auto b = t.find(':', a + 1);
        const double start = to_double("grid", t.substr(0, a));
        const double stop = to_double("grid", t.substr(a + 1, b - a - 1));
        const double step = to_double("grid", t.substr(b + 1));
        if (!(step > 0.0) || stop < start) throw std::invalid_argument("bad range '" + text + "'");
        return step_grid(start, stop, step);
    }
    std::vector<double> out;
    std::stringstream ss(t);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(to_double("grid", item));
    if (out.empty()) throw std::invalid_argument("empty grid");
    return out;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key_in, const std::string& value) {
    const std::string key = trim(key_in);
    if (key == "mode") {
        cfg.mode = parse_mode(trim(value));
    } else if (key == "mean_obstacles") {
        cfg.mean_obstacles = to_double(key, value);
    } else if (key == "R") {
        cfg.R = to_double(key, value);
    } else if (key == "L_over_R") {
        cfg.L_over_R = parse_grid(value);
    } else if (key == "mean_anchors") {
        cfg.mean_anchors = parse_grid(value);
    } else if (key == "obstacle_counts") {
        cfg.obstacle_counts = parse_grid(value);
    } else if (key == "kv") {
        cfg.kv = static_cast<int>(to_u64(key, value));
    } else if (key == "mu") {
        cfg.mu = to_double(key, value);
    } else if (key == "tol") {
        cfg.tol = to_double(key, value);
    } else if (key == "reps") {
        cfg.replications = to_u64(key, value);
    } else if (key == "seed") {
        cfg.seed = to_u64(key, value);
    } else if (key == "workers") {
        cfg.workers = static_cast<unsigned>(to_u64(key, value));
    } else if (key == "out") {
        cfg.out = trim(value);
    } else {
        throw std::invalid_argument("unknown key '" + key + "'");
    }
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<std::pair<double, double>> points;
    if (cfg.mode == Mode::SweepLambda) {
        for (double LR : cfg.L_grid())
            for (double a : cfg.anchor_grid()) points.emplace_back(LR, a);
    } else {
        for (double a : cfg.anchor_grid())
            for (double LR : cfg.L_grid()) points.emplace_back(LR, a);
    }
    std::vector<SweepRow> rows;
    for (const auto& [LR, anchors] : points) {
        const auto start = std::chrono::steady_clock::now();
        const EnvParams z = EnvParams::from_normalized(cfg.mean_obstacles, LR, cfg.R);
        const auto bp = BlindSpotParams::from_mean_anchors(anchors, cfg.kv, z);
        const Estimate mc = estimate_b(bp, mc_options(cfg));
        SweepRow r;
        r.L_over_R = LR;
        r.mean_anchors = anchors;
        r.b_mc = mc.mean;
        r.b_mc_stderr = mc.stderr_;
        r.b_ind = b_ind(bp);
        r.b_2plus = b_2plus(bp);
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(r);
    }
    return rows;
}

void run_experiment(const ExperimentConfig& cfg, std::ostream& os, bool timestamp) {
    cfg.validate();
    write_header(cfg, os, timestamp);
    switch (cfg.mode) {
        case Mode::SweepL:
        case Mode::SweepLambda: write_sweep(cfg, os, timestamp); break;
        case Mode::Gamma: write_gamma(cfg, os); break;
        case Mode::Design: write_design(cfg, os); break;
        case Mode::Estimate: write_estimate(cfg, os); break;
    }
    os.flush();
    if (!os) throw std::runtime_error("failed writing experiment output");
}

void run_experiment(const ExperimentConfig& cfg) {
    if (cfg.out.empty()) {
        run_experiment(cfg, std::cout);
        return;
    }
    std::ofstream file(cfg.out);
    if (!file) throw std::runtime_error("cannot open output file " + cfg.out);
    run_experiment(cfg, file);
}

}  // namespace blindspot
