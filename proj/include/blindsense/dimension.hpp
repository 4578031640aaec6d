#pragma once

// Scaling-dimension estimators.
//
// Fractal (box/covering) dimension: slope of the epsilon-entropy
// H_eps = log L_eps against -log eps over a decreasing scale schedule.
// The dilation-doubling diagnostic compares the dimension of the Minkowski
// sum X + X against that of X: unions of low-dimensional pieces double,
// a single convex piece does not.
//
// Information dimension of a scalar source: slope of the Shannon entropy of
// the eps-quantized samples against -log eps, with the Miller-Madow
// occupancy correction.  For a mixture (1 - gamma) * atom + gamma * uniform
// the slope recovers the continuous weight gamma.
//
// All logarithms are natural.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cover.hpp"
#include "rng.hpp"

namespace blindsense {

struct DimensionEstimate {
    double dim = 0.0;        // clamped slope (>= 0)
    double slope = 0.0;      // raw least-squares slope
    double intercept = 0.0;
    double max_residual = 0.0;            // worst |fit - data| over the schedule
    std::vector<double> epsilons;         // scales actually used
    std::vector<double> entropies;        // H at each used scale
    bool truncated = false;               // some schedule entries were dropped
};

namespace detail {

// Least squares line through (x_i, y_i); a constant-x degenerate fit has
// slope 0 by convention.
inline void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                     double& intercept, double& max_resid) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    slope = (det > 0.0) ? (n * sxy - sx * sy) / det : 0.0;
    intercept = (sy - slope * sx) / n;
    max_resid = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        max_resid = std::max(max_resid, std::abs(slope * x[i] + intercept - y[i]));
}

inline void check_schedule(const std::vector<double>& schedule, std::size_t min_points) {
    if (schedule.size() < min_points)
        throw std::invalid_argument("scale schedule needs at least " + std::to_string(min_points) +
                                    " entries");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0))
            throw std::invalid_argument("scale schedule entries must be positive");
        if (i > 0 && !(schedule[i] < schedule[i - 1]))
            throw std::invalid_argument("scale schedule must be strictly decreasing");
    }
}

} // namespace detail

// Covering-number growth rate of a finite cloud over the given scales.
inline DimensionEstimate fractal_dim(const PointCloud& cloud, const std::vector<double>& schedule,
                                     CoverMethod method = CoverMethod::greedy) {
    detail::check_schedule(schedule, 2);
    DimensionEstimate est;
    std::vector<double> x;
    for (double eps : schedule) {
        const CoverReport rep = epsilon_cover(cloud, eps, method);
        est.epsilons.push_back(eps);
        est.entropies.push_back(std::log(static_cast<double>(rep.size)));
        x.push_back(-std::log(eps));
    }
    detail::fit_line(x, est.entropies, est.slope, est.intercept, est.max_residual);
    est.dim = std::max(0.0, est.slope);
    return est;
}

// Pairwise-sum cloud {a + b}; above `cap` pairs a seeded uniform subsample
// of exactly `cap` pairs is taken instead.
inline PointCloud minkowski_sum(const PointCloud& a, const PointCloud& b, std::size_t cap,
                                std::uint64_t seed) {
    if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("minkowski_sum: empty cloud");
    if (a.dim() != b.dim())
        throw std::invalid_argument("minkowski_sum: ambient dimensions differ");
    if (cap == 0) throw std::invalid_argument("minkowski_sum: cap must be positive");
    const std::size_t total = static_cast<std::size_t>(a.size()) * b.size();
    PointCloud sum;
    sum.provenance = a.provenance + "+" + b.provenance;
    if (total <= cap) {
        sum.points.resize(static_cast<int>(total), a.dim());
        int r = 0;
        for (int i = 0; i < a.size(); ++i)
            for (int j = 0; j < b.size(); ++j) sum.points.row(r++) = a.points.row(i) + b.points.row(j);
    } else {
        sum.points.resize(static_cast<int>(cap), a.dim());
        std::mt19937_64 g = make_engine(seed, 0x4d4b53ULL);
        for (std::size_t r = 0; r < cap; ++r) {
            const int i = static_cast<int>(g() % a.size());
            const int j = static_cast<int>(g() % b.size());
            sum.points.row(static_cast<int>(r)) = a.points.row(i) + b.points.row(j);
        }
    }
    return sum;
}

struct DoublingReport {
    DimensionEstimate base;
    DimensionEstimate dilated;
    double ratio = 0.0;
};

// dim(X + X) / dim(X) with both dimensions measured on the same schedule.
// A base dimension below 0.1 makes the ratio meaningless and is rejected.
inline DoublingReport dilation_doubling_ratio(const PointCloud& cloud,
                                              const std::vector<double>& schedule,
                                              std::size_t cap = 4000, std::uint64_t seed = 1) {
    DoublingReport rep;
    rep.base = fractal_dim(cloud, schedule);
    if (rep.base.dim < 0.1)
        throw std::domain_error("dilation_doubling_ratio: base dimension too small for a ratio");
    const PointCloud sum = minkowski_sum(cloud, cloud, cap, seed);
    rep.dilated = fractal_dim(sum, schedule);
    rep.ratio = rep.dilated.dim / rep.base.dim;
    return rep;
}

// Band-occupancy fraction of a sparse spectrum inside the full band.
inline double sparsity_fraction(double omega, double omega_prime) {
    if (!(omega > 0.0)) throw std::invalid_argument("sparsity_fraction: omega must be positive");
    if (omega_prime < 0.0 || omega_prime > omega)
        throw std::invalid_argument("sparsity_fraction: need 0 <= omega_prime <= omega");
    return omega_prime / omega;
}

// Scalar source: an atom at 0 with weight 1 - gamma plus a uniform[0, 1]
// continuous part with weight gamma.
struct MixtureSource {
    double gamma = 0.0;
    std::uint64_t seed = 0;

    std::vector<double> sample(std::size_t n) const {
        if (gamma < 0.0 || gamma > 1.0)
            throw std::invalid_argument("MixtureSource: gamma must lie in [0, 1]");
        std::vector<double> out(n);
        std::mt19937_64 g = make_engine(seed, 0x4d4958ULL);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = uniform01(g);
            out[i] = (u < gamma) ? uniform01(g) : 0.0;
        }
        return out;
    }
};

// Information-dimension estimate: Shannon entropy of the eps-quantized
// samples (Miller-Madow corrected) regressed against -log eps.  Scales
// whose average occupancy per occupied bin falls below 5 are dropped (the
// plug-in entropy is unreliable there); the estimate is flagged truncated.
inline DimensionEstimate renyi_dim(const MixtureSource& source,
                                   const std::vector<double>& schedule, std::size_t samples) {
    detail::check_schedule(schedule, 3);
    if (samples < 100) throw std::invalid_argument("renyi_dim: need at least 100 samples");
    const std::vector<double> xs = source.sample(samples);

    DimensionEstimate est;
    std::vector<double> logs;
    for (double eps : schedule) {
        std::unordered_map<long long, std::size_t> bins;
        for (double v : xs) bins[static_cast<long long>(std::floor(v / eps))]++;
        const double occupancy = static_cast<double>(samples) / bins.size();
        if (occupancy < 5.0) {
            est.truncated = true;
            continue;
        }
        double h = 0.0;
        for (const auto& [bin, count] : bins) {
            const double p = static_cast<double>(count) / samples;
            h -= p * std::log(p);
        }
        h += (static_cast<double>(bins.size()) - 1.0) / (2.0 * samples);
        est.epsilons.push_back(eps);
        est.entropies.push_back(h);
        logs.push_back(-std::log(eps));
    }
    if (est.epsilons.size() < 2)
        throw std::runtime_error("renyi_dim: occupancy guard left fewer than two usable scales");
    detail::fit_line(logs, est.entropies, est.slope, est.intercept, est.max_residual);
    est.dim = std::max(0.0, est.slope);
    return est;
}

} // namespace blindsense
