#pragma once

// Multi-band signal synthesis and coefficient extraction.
//
// A lab signal is a finite combination f = sum_n alpha_n psi_n^Q of the
// leading concentration basis functions of its allocation Q.  Its sensing
// coefficients are plain window inner products against the canonical
// (full-band) family: x_k = <f, psi_k>_T.  Both directions are linear maps
// of the stored grid samples.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "band.hpp"
#include "prolate.hpp"

namespace blindsense {

// Coefficient vector in the canonical concentration basis (length N).
using PswfCoefficients = Eigen::VectorXd;

// Truncation sizes: N canonical modes cover the full band [-Omega, Omega],
// S modes cover one allocation; nu is the oversampling margin.
inline int nyquist_count(double omega, double horizon, double nu) {
    return static_cast<int>(std::ceil((1.0 + nu) * omega * horizon / detail::kPi));
}

inline int sparsity_count(double omega_prime, double horizon, double nu) {
    return static_cast<int>(std::ceil((1.0 + nu) * omega_prime * horizon / detail::kPi));
}

struct MultibandSignal {
    BandSet band;             // allocation the signal was synthesized from
    Eigen::VectorXd coeffs;   // alpha, in the allocation's basis
    Eigen::VectorXd samples;  // f on the time grid

    bool in_unit_ball(double tol = 1e-12) const { return coeffs.norm() <= 1.0 + tol; }
};

inline MultibandSignal synthesize(const ProlateBasis& basis, const Eigen::VectorXd& alpha) {
    if (alpha.size() != basis.count())
        throw std::invalid_argument("synthesize: coefficient count must match basis size");
    return {basis.band, alpha, basis.samples * alpha};
}

// Window inner products of the sampled signal against every canonical mode.
inline PswfCoefficients analyze(const Eigen::VectorXd& samples, const ProlateBasis& canonical) {
    const int g = canonical.grid.size();
    if (samples.size() != g)
        throw std::invalid_argument("analyze: sample count must match the basis grid");
    Eigen::VectorXd weighted(g);
    for (int i = 0; i < g; ++i) weighted(i) = canonical.grid.weight(i) * samples(i);
    return canonical.samples.transpose() * weighted;
}

inline PswfCoefficients analyze(const MultibandSignal& f, const ProlateBasis& canonical) {
    return analyze(f.samples, canonical);
}

// Trapezoid energy of a sampled signal over the window.
inline double window_energy(const Eigen::VectorXd& samples, const TimeGrid& grid) {
    if (samples.size() != grid.size())
        throw std::invalid_argument("window_energy: sample count must match the grid");
    double e = 0.0;
    for (int i = 0; i < grid.size(); ++i) e += grid.weight(i) * samples(i) * samples(i);
    return e;
}

} // namespace blindsense
