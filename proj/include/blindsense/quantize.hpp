#pragma once

// Quantized frequency grids and symmetric band allocations.
//
// Occupied sub-bands are restricted to a uniform endpoint grid
// J = {-Omega, -Omega + Delta, ..., Omega}.  An Allocation is a symmetric
// union of grid-aligned sub-bands whose total measure fits the sparsity
// budget 2 * Omega'.  Symmetry halves the bookkeeping: every allocation is
// represented by its positive-frequency cells and mirrored on demand.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "band.hpp"

namespace blindsense {

// Endpoint grid.  Delta must divide 2*Omega (within 1e-9 relative); with
// allow_rounding the band edge is nudged to the nearest multiple instead.
class QuantizedGrid {
  public:
    QuantizedGrid(double omega, double delta, bool allow_rounding = false) : delta_(delta) {
        if (!(omega > 0.0) || !(delta > 0.0))
            throw std::invalid_argument("QuantizedGrid: omega and delta must be positive");
        if (delta > 2.0 * omega)
            throw std::invalid_argument("QuantizedGrid: delta exceeds the full band width");
        const double steps = 2.0 * omega / delta;
        const long long n = std::llround(steps);
        if (std::abs(steps - static_cast<double>(n)) > 1e-9 * steps) {
            if (!allow_rounding)
                throw std::invalid_argument("QuantizedGrid: delta must divide 2*omega");
            rounded_ = true;
        }
        steps_ = static_cast<int>(n < 1 ? 1 : n);
        omega_ = 0.5 * steps_ * delta_;
    }

    double omega() const { return omega_; }
    double delta() const { return delta_; }
    int steps() const { return steps_; }          // number of cells across [-Omega, Omega]
    bool was_rounded() const { return rounded_; }

    int size() const { return steps_ + 1; }
    double point(int k) const { return -omega_ + k * delta_; }

    // Grid points in [0, Omega].  When the cell count is odd, 0 itself is
    // not a grid point and the list starts at Delta/2.
    std::vector<double> positive_points() const {
        std::vector<double> p;
        if (steps_ % 2 == 0) {
            for (int i = 0; i <= steps_ / 2; ++i) p.push_back(i * delta_);
        } else {
            for (int i = 0; i <= steps_ / 2; ++i) p.push_back((i + 0.5) * delta_);
        }
        return p;
    }

  private:
    double omega_ = 0.0;
    double delta_ = 0.0;
    int steps_ = 0;
    bool rounded_ = false;
};

// A symmetric, grid-aligned candidate support.  positive_cells lists the
// occupied sub-bands of the positive-frequency half as index pairs (i, j)
// into QuantizedGrid::positive_points(), i < j, non-touching.  An interval
// starting at index 0 of an even grid touches 0 and mirrors onto itself.
struct Allocation {
    BandSet band;
    std::vector<std::pair<int, int>> positive_cells;

    double measure() const { return band.measure(); }
    bool empty() const { return band.empty(); }
};

// Two-sided support from positive-frequency interval indices.
inline BandSet mirror_positive_intervals(const QuantizedGrid& grid,
                                         const std::vector<std::pair<int, int>>& cells) {
    const std::vector<double> p = grid.positive_points();
    std::vector<Interval> negative, positive;
    for (const auto& [i, j] : cells) {
        const double lo = p[static_cast<std::size_t>(i)];
        const double hi = p[static_cast<std::size_t>(j)];
        if (lo == 0.0) {
            positive.push_back({-hi, hi});  // self-mirrored central band
        } else {
            positive.push_back({lo, hi});
            negative.push_back({-hi, -lo});
        }
    }
    std::vector<Interval> all(negative.rbegin(), negative.rend());
    all.insert(all.end(), positive.begin(), positive.end());
    return BandSet(all);
}

// All symmetric allocations with at most max_subbands positive-frequency
// sub-bands and total measure at most 2 * omega_prime.  The empty allocation
// is always first; the rest follow in lexicographic order of their interval
// index lists.  Throws when the result would exceed `cap` entries.
inline std::vector<Allocation> enumerate_allocations(const QuantizedGrid& grid, double omega_prime,
                                                     int max_subbands,
                                                     std::size_t cap = 1u << 20) {
    if (max_subbands < 1)
        throw std::invalid_argument("enumerate_allocations: max_subbands must be at least 1");
    if (omega_prime < 0.0)
        throw std::invalid_argument("enumerate_allocations: omega_prime must be nonnegative");

    const std::vector<double> p = grid.positive_points();
    const int npts = static_cast<int>(p.size());
    // Total measure of a symmetric allocation is exactly twice its
    // positive-part measure, so the budget in grid cells is floor(W'/Delta).
    const int budget_cells =
        static_cast<int>(std::floor(omega_prime / grid.delta() + 1e-9));

    std::vector<Allocation> out;
    std::vector<std::pair<int, int>> current;

    auto emit = [&]() {
        if (out.size() >= cap)
            throw std::runtime_error("enumerate_allocations: allocation count exceeds cap");
        out.push_back({mirror_positive_intervals(grid, current), current});
    };

    // Depth-first over interval lists in lexicographic order; `start` is the
    // lowest admissible left endpoint index (one past the previous interval's
    // right endpoint, so runs never touch).
    auto recurse = [&](auto&& self, int start, int cells_left, int bands_left) -> void {
        if (bands_left == 0) return;
        for (int i = start; i + 1 < npts; ++i) {
            for (int j = i + 1; j < npts && j - i <= cells_left; ++j) {
                current.emplace_back(i, j);
                emit();
                self(self, j + 1, cells_left - (j - i), bands_left - 1);
                current.pop_back();
            }
        }
    };

    emit();  // empty allocation
    recurse(recurse, 0, budget_cells, max_subbands);
    return out;
}

// Ordering used for decoder tie-breaks: total measure first, then the
// two-sided interval list lexicographically.
inline bool allocation_less(const Allocation& a, const Allocation& b) {
    const double ma = a.measure(), mb = b.measure();
    if (ma != mb) return ma < mb;
    const auto& ia = a.band.intervals();
    const auto& ib = b.band.intervals();
    for (std::size_t k = 0; k < ia.size() && k < ib.size(); ++k) {
        if (ia[k].lo != ib[k].lo) return ia[k].lo < ib[k].lo;
        if (ia[k].hi != ib[k].hi) return ia[k].hi < ib[k].hi;
    }
    return ia.size() < ib.size();
}

// --- text serialization ------------------------------------------------
//
// One allocation per line; semicolon-separated "lo,hi" pairs in rad/s; the
// empty allocation is an empty line.  %.17g keeps write -> read -> write
// byte-stable.

inline std::string format_allocation(const Allocation& alloc) {
    std::string line;
    char buf[64];
    for (std::size_t k = 0; k < alloc.band.intervals().size(); ++k) {
        const auto& iv = alloc.band.intervals()[k];
        if (k) line += ';';
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", iv.lo, iv.hi);
        line += buf;
    }
    return line;
}

inline Allocation parse_allocation_line(const std::string& line) {
    std::vector<Interval> intervals;
    std::size_t pos = 0;
    while (pos < line.size()) {
        std::size_t end = line.find(';', pos);
        if (end == std::string::npos) end = line.size();
        const std::string item = line.substr(pos, end - pos);
        const std::size_t comma = item.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("parse_allocation_line: missing comma in interval");
        char* tail = nullptr;
        const double lo = std::strtod(item.c_str(), &tail);
        const double hi = std::strtod(item.c_str() + comma + 1, &tail);
        intervals.push_back({lo, hi});
        pos = end + 1;
    }
    return {BandSet(intervals), {}};
}

} // namespace blindsense
