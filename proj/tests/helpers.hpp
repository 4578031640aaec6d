#pragma once

// Shared fixtures and independent oracles for the test suite.
//
// Oracles deliberately avoid the code paths they check: kernel values are
// re-derived by brute quadrature, eigenvalue knees are re-counted at doubled
// grid resolution, allocation counts come from a bitmask sweep, and minimum
// covers come from a popcount-ordered subset search.

#include <blindsense/blindsense.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace bs = blindsense;

// Small, fast lab: N = 10 canonical modes, S = 3 allocation modes,
// 4 nonempty single-cell allocations.
inline bs::ExperimentConfig small_config() {
    bs::ExperimentConfig cfg;
    cfg.omega = bs::detail::kPi;
    cfg.omega_prime = bs::detail::kPi / 4.0;
    cfg.delta = bs::detail::kPi / 4.0;
    cfg.horizon = 8.0;
    cfg.grid = 64;
    cfg.nu = 0.25;
    return cfg;
}

// Brute quadrature of the band-limiting kernel: (1/pi) * integral of
// cos(omega * tau) over the positive-frequency part of the support.
inline double oracle_kernel_value(const bs::BandSet& band, double tau, int nodes = 200001) {
    double total = 0.0;
    for (const auto& iv : band.positive_part()) {
        const double h = iv.length() / (nodes - 1);
        double acc = 0.5 * (std::cos(iv.lo * tau) + std::cos(iv.hi * tau));
        for (int i = 1; i < nodes - 1; ++i) acc += std::cos((iv.lo + i * h) * tau);
        total += acc * h;
    }
    return total / bs::detail::kPi;
}

// Independent allocation counter: sweep every subset of the positive-half
// cells, read off its maximal runs, and apply the budget directly.
inline std::size_t oracle_allocation_count(int cells, int budget_cells, int max_subbands) {
    std::size_t count = 0;
    for (std::uint32_t mask = 0; mask < (1u << cells); ++mask) {
        int used = 0, runs = 0;
        bool in_run = false;
        for (int c = 0; c < cells; ++c) {
            if (mask & (1u << c)) {
                ++used;
                if (!in_run) ++runs;
                in_run = true;
            } else {
                in_run = false;
            }
        }
        if (used <= budget_cells && runs <= max_subbands) ++count;
    }
    return count;  // includes the empty subset = empty allocation
}

// Independent minimum-cover search: try all center subsets in increasing
// popcount order and return the first size that covers the cloud.
inline int oracle_min_cover(const bs::PointCloud& cloud, double eps) {
    const int n = cloud.size();
    std::vector<std::uint32_t> ball(n, 0);
    for (int c = 0; c < n; ++c)
        for (int p = 0; p < n; ++p)
            if ((cloud.points.row(c) - cloud.points.row(p)).squaredNorm() <= eps * eps)
                ball[c] |= (1u << p);
    const std::uint32_t full = (1u << n) - 1;
    for (int size = 1; size <= n; ++size) {
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) != size) continue;
            std::uint32_t covered = 0;
            for (int c = 0; c < n; ++c)
                if (mask & (1u << c)) covered |= ball[c];
            if (covered == full) return size;
        }
    }
    return n;
}
