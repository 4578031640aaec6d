#pragma once

// Time-frequency concentration analysis on a finite grid.
//
// For a symmetric frequency support Q and horizon [-T/2, T/2] the
// concentration operator (time-limit, band-limit to Q, time-limit again)
// is compact with kernel
//
//     k_Q(t - s) = (1/pi) sum_i [sin(b_i (t-s)) - sin(a_i (t-s))] / (t-s)
//
// summed over the positive-frequency intervals [a_i, b_i] of Q.  Its
// eigenfunctions generalize the classical prolate spheroidal family and its
// eigenvalue staircase drops from ~1 to ~0 around measure(Q) * T / (2 pi).
//
// Discretization is Nystrom on a uniform grid with trapezoid weights.  With
// D = diag(sqrt(w_i)) the symmetric pencil D K D is solved instead of K W;
// both have the same eigenvalues, and the recovered grid functions are then
// exactly orthogonal in the trapezoid inner product, which keeps the
// orthogonality law <psi_n, psi_m>_T = lambda_n delta_nm at solver precision
// instead of quadrature precision.
//
// Basis functions are normalized to unit energy on the whole line.  Only
// grid samples exist, so the normalization uses the concentration identity
// (line energy) = (window energy) / lambda: each eigenvector is scaled so
// its trapezoid energy over the window equals its eigenvalue.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "band.hpp"

namespace blindsense {

namespace detail {
inline constexpr double kPi = 3.14159265358979323846;
}

// Kernel value k_Q(tau); the tau -> 0 limit is measure(positive part) / pi.
inline double bandlimit_kernel_value(const BandSet& band, double tau) {
    double v = 0.0;
    if (tau == 0.0) {
        for (const auto& iv : band.positive_part()) v += iv.length();
    } else {
        for (const auto& iv : band.positive_part())
            v += (std::sin(iv.hi * tau) - std::sin(iv.lo * tau)) / tau;
    }
    return v / detail::kPi;
}

// Dense kernel matrix K[i][j] = k_Q(t_i - t_j).  Filled from a 1-D table
// indexed by |i - j| (the grid is uniform), so the result is exactly
// symmetric and Toeplitz.
inline Eigen::MatrixXd bandlimit_kernel(const BandSet& band, const TimeGrid& grid) {
    if (!band.empty() && !band.is_symmetric())
        throw std::invalid_argument("bandlimit_kernel: support must be symmetric about 0");
    const int g = grid.size();
    const double h = grid.step();
    std::vector<double> table(g);
    for (int d = 0; d < g; ++d) table[d] = bandlimit_kernel_value(band, d * h);
    Eigen::MatrixXd k(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) k(i, j) = table[std::abs(i - j)];
    return k;
}

// Leading eigenpairs of the discretized concentration operator.
struct ProlateBasis {
    TimeGrid grid;
    BandSet band;
    Eigen::VectorXd lambda;   // descending, clipped to [0, 1]
    Eigen::MatrixXd samples;  // grid.size() x count; column n holds psi_n on the grid

    int count() const { return static_cast<int>(lambda.size()); }

    // Trapezoid inner product of basis columns a and b over the window.
    double window_inner(int a, int b) const {
        double s = 0.0;
        for (int i = 0; i < grid.size(); ++i)
            s += grid.weight(i) * samples(i, a) * samples(i, b);
        return s;
    }
};

inline ProlateBasis solve_concentration(const BandSet& band, const TimeGrid& grid, int count) {
    const int g = grid.size();
    if (count < 1 || count > g)
        throw std::invalid_argument("solve_concentration: count must be in [1, grid size]");
    if (!band.empty()) {
        const int gmin = min_grid_points(band.max_abs_frequency(), grid.horizon());
        if (g < gmin)
            throw std::invalid_argument("solve_concentration: grid too coarse for this support (need >= " +
                                        std::to_string(gmin) + " points)");
    }

    Eigen::MatrixXd k = bandlimit_kernel(band, grid);

    Eigen::VectorXd sqw(g);
    for (int i = 0; i < g; ++i) sqw(i) = std::sqrt(grid.weight(i));
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) k(i, j) *= sqw(i) * sqw(j);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("solve_concentration: eigensolver failed to converge");

    ProlateBasis basis{grid, band, Eigen::VectorXd(count), Eigen::MatrixXd(g, count)};
    for (int n = 0; n < count; ++n) {
        const int src = g - 1 - n;  // Eigen sorts ascending
        double lam = solver.eigenvalues()(src);
        lam = std::min(1.0, std::max(0.0, lam));
        basis.lambda(n) = lam;

        Eigen::VectorXd v = solver.eigenvectors().col(src).cwiseQuotient(sqw);
        // Fix the sign: first component that is clearly nonzero is positive.
        const double floor = 1e-12 * v.cwiseAbs().maxCoeff();
        for (int i = 0; i < g; ++i) {
            if (std::abs(v(i)) > floor) {
                if (v(i) < 0.0) v = -v;
                break;
            }
        }
        // v has unit trapezoid energy; rescale so window energy is lambda.
        basis.samples.col(n) = std::sqrt(lam) * v;
    }
    return basis;
}

struct OrthogonalityReport {
    double max_offdiag = 0.0;    // max |<psi_n, psi_m>_T|, n != m
    double max_diag_error = 0.0; // max |<psi_n, psi_n>_T - lambda_n|
};

inline OrthogonalityReport verify_orthogonality(const ProlateBasis& basis) {
    OrthogonalityReport rep;
    for (int a = 0; a < basis.count(); ++a) {
        for (int b = a; b < basis.count(); ++b) {
            const double ip = basis.window_inner(a, b);
            if (a == b)
                rep.max_diag_error = std::max(rep.max_diag_error, std::abs(ip - basis.lambda(a)));
            else
                rep.max_offdiag = std::max(rep.max_offdiag, std::abs(ip));
        }
    }
    return rep;
}

// Number of eigenvalues at or above `threshold`; with the default 0.5 this
// locates the staircase knee.
inline int significant_count(const Eigen::VectorXd& lambda, double threshold = 0.5) {
    int c = 0;
    for (int i = 0; i < lambda.size(); ++i)
        if (lambda(i) >= threshold) ++c;
    return c;
}

} // namespace blindsense
