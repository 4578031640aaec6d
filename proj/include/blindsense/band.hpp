#pragma once

// Frequency supports and time grids.
//
// A BandSet is a finite union of disjoint closed intervals on the angular
// frequency axis.  Supports used by the lab are symmetric about 0 (real
// signals), but the type itself only requires sorted disjoint intervals.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blindsense {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

class BandSet {
  public:
    BandSet() = default;

    // Intervals must be nonempty, sorted, and pairwise disjoint (touching
    // endpoints are rejected too: adjacent intervals should be merged by the
    // caller, otherwise set identity becomes ambiguous).
    explicit BandSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
        for (const auto& iv : intervals_) {
            if (!(iv.lo < iv.hi))
                throw std::invalid_argument("BandSet: interval endpoints must satisfy lo < hi");
        }
        for (std::size_t i = 1; i < intervals_.size(); ++i) {
            if (!(intervals_[i - 1].hi < intervals_[i].lo))
                throw std::invalid_argument("BandSet: intervals must be sorted and disjoint");
        }
    }

    static BandSet single(double lo, double hi) { return BandSet({{lo, hi}}); }

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }

    // Lebesgue measure of the union.
    double measure() const {
        double m = 0.0;
        for (const auto& iv : intervals_) m += iv.length();
        return m;
    }

    // Largest |endpoint|; 0 for the empty set.
    double max_abs_frequency() const {
        double m = 0.0;
        for (const auto& iv : intervals_) m = std::max({m, std::abs(iv.lo), std::abs(iv.hi)});
        return m;
    }

    // Mirror symmetry about 0 within an absolute endpoint tolerance.
    bool is_symmetric(double tol = 1e-12) const {
        const std::size_t n = intervals_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = intervals_[i];
            const auto& b = intervals_[n - 1 - i];
            if (std::abs(a.lo + b.hi) > tol || std::abs(a.hi + b.lo) > tol) return false;
        }
        return true;
    }

    // Intervals intersected with [0, inf).  For symmetric sets this is the
    // non-redundant half used by the band-limiting kernel.
    std::vector<Interval> positive_part() const {
        std::vector<Interval> pos;
        for (const auto& iv : intervals_) {
            if (iv.hi <= 0.0) continue;
            pos.push_back({std::max(iv.lo, 0.0), iv.hi});
        }
        return pos;
    }

    bool operator==(const BandSet& other) const {
        if (intervals_.size() != other.intervals_.size()) return false;
        for (std::size_t i = 0; i < intervals_.size(); ++i)
            if (intervals_[i].lo != other.intervals_[i].lo ||
                intervals_[i].hi != other.intervals_[i].hi)
                return false;
        return true;
    }

  private:
    std::vector<Interval> intervals_;
};

// Uniform grid of G points spanning [-T/2, T/2]; trapezoid quadrature.
class TimeGrid {
  public:
    TimeGrid(double horizon, int points) : horizon_(horizon), points_(points) {
        if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
        if (points < 2) throw std::invalid_argument("TimeGrid: need at least two grid points");
    }

    double horizon() const { return horizon_; }
    int size() const { return points_; }
    double step() const { return horizon_ / (points_ - 1); }
    double point(int i) const { return -0.5 * horizon_ + i * step(); }

    // Trapezoid weight of node i (includes the step factor).
    double weight(int i) const {
        const double h = step();
        return (i == 0 || i == points_ - 1) ? 0.5 * h : h;
    }

    bool operator==(const TimeGrid& other) const {
        return horizon_ == other.horizon_ && points_ == other.points_;
    }

  private:
    double horizon_;
    int points_;
};

// Minimum admissible grid size for a support reaching |omega| = omega_max:
// at least 8 points per shortest period keeps the Nystrom eigensolve in the
// regime where the reported spectrum is grid-stable.
inline int min_grid_points(double omega_max, double horizon) {
    const double n0 = omega_max * horizon / 3.14159265358979323846;
    return 8 * static_cast<int>(std::ceil(n0));
}

} // namespace blindsense
