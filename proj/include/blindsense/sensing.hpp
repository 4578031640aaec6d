#pragma once

// Linear measurement ensembles and dictionary cross-Grams.
//
// Measurements act on the canonical coefficient vector x (length N):
// y = A x + e.  The matrix A is the kernel-coefficient array of the
// measurement functionals; the lab mainly uses i.i.d. Gaussian ensembles
// and row-orthonormal random projections.
//
// The cross-Gram of an allocation basis against the canonical basis,
// Phi[k][n] = <psi_n^Q, psi_k>_T, maps allocation coefficients alpha to
// sensing coefficients: x = Phi alpha + zeta.  The tail zeta (energy of the
// allocation's modes outside the first N canonical modes) is measured, not
// assumed away, and reported with the Gram.

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <string>

#include "prolate.hpp"
#include "rng.hpp"

namespace blindsense {

enum class NoiseKind { none, gaussian };

struct MeasurementEnsemble {
    Eigen::MatrixXd a;          // M x N
    std::uint64_t seed = 0;
    NoiseKind noise = NoiseKind::none;
    double sigma = 0.0;

    int rows() const { return static_cast<int>(a.rows()); }
    int cols() const { return static_cast<int>(a.cols()); }
};

// i.i.d. standard normal entries, filled row by row; the same seed gives
// the same matrix on every platform (see rng.hpp).
inline MeasurementEnsemble gaussian_ensemble(int m, int n, std::uint64_t seed,
                                             NoiseKind noise = NoiseKind::none,
                                             double sigma = 0.0) {
    if (m < 1 || n < 1)
        throw std::invalid_argument("gaussian_ensemble: dimensions must be positive");
    if (noise == NoiseKind::gaussian && !(sigma > 0.0))
        throw std::invalid_argument("gaussian_ensemble: gaussian noise needs sigma > 0");
    MeasurementEnsemble ens{Eigen::MatrixXd(m, n), seed, noise, sigma};
    std::mt19937_64 g = make_engine(seed, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) ens.a(i, j) = normal(g);
    return ens;
}

// Row-orthonormal projection ensemble: A = Q^T for a thin QR factor Q of an
// N x m Gaussian draw, i.e. a uniformly random rank-m projection with the
// projected image expressed in m orthonormal coordinates.
inline MeasurementEnsemble projection_ensemble(int m, int n, std::uint64_t seed) {
    if (m < 1 || n < 1 || m > n)
        throw std::invalid_argument("projection_ensemble: need 1 <= m <= n");
    Eigen::MatrixXd gauss(n, m);
    std::mt19937_64 g = make_engine(seed, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) gauss(i, j) = normal(g);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
    return {q.transpose(), seed, NoiseKind::none, 0.0};
}

struct Measurement {
    Eigen::VectorXd y;      // A x + e
    Eigen::VectorXd noise;  // the realized e (zero vector when noiseless)
};

// `draw` selects the noise sub-stream so repeated trials on one ensemble
// stay reproducible without shared state.
inline Measurement measure(const Eigen::VectorXd& x, const MeasurementEnsemble& ens,
                           std::uint64_t draw = 0) {
    if (x.size() != ens.a.cols())
        throw std::invalid_argument("measure: coefficient length must match ensemble columns");
    Measurement out{ens.a * x, Eigen::VectorXd::Zero(ens.a.rows())};
    if (ens.noise == NoiseKind::gaussian) {
        std::mt19937_64 g = make_engine(ens.seed, 0x9e55'0000ULL + draw);
        for (int i = 0; i < out.noise.size(); ++i) out.noise(i) = ens.sigma * normal(g);
        out.y += out.noise;
    }
    return out;
}

struct CrossGram {
    Eigen::MatrixXd phi;    // N x S, entry (k, n) = <psi_n^Q, psi_k>_T
    double tail = 0.0;      // measured ||zeta|| for a uniform probe alpha
};

// Window inner products of every allocation mode against every canonical
// mode, plus the measured truncation tail.  Both bases must share one grid.
inline CrossGram cross_gram(const ProlateBasis& alloc_basis, const ProlateBasis& canonical) {
    if (!(alloc_basis.grid == canonical.grid))
        throw std::invalid_argument("cross_gram: bases must share the same time grid");
    const int g = canonical.grid.size();
    Eigen::MatrixXd weighted = alloc_basis.samples;  // G x S
    for (int i = 0; i < g; ++i) weighted.row(i) *= canonical.grid.weight(i);
    CrossGram out;
    out.phi = canonical.samples.transpose() * weighted;  // N x S

    // Tail of a uniform-coefficient probe: window energy of f = sum_n c psi_n^Q
    // minus its projection onto span{psi_k}_T (the psi_k / sqrt(lambda_k) are
    // orthonormal over the window).  Modes with negligible lambda_k carry no
    // usable projection and are skipped.
    const int s = static_cast<int>(alloc_basis.count());
    if (s > 0) {
        Eigen::VectorXd alpha = Eigen::VectorXd::Constant(s, 1.0 / std::sqrt(double(s)));
        Eigen::VectorXd f = alloc_basis.samples * alpha;
        double energy = 0.0;
        for (int i = 0; i < g; ++i) energy += canonical.grid.weight(i) * f(i) * f(i);
        Eigen::VectorXd proj = out.phi * alpha;  // <f, psi_k>_T
        for (int k = 0; k < canonical.count(); ++k) {
            const double lam = canonical.lambda(k);
            if (lam > 1e-13) energy -= proj(k) * proj(k) / lam;
        }
        out.tail = std::sqrt(std::max(0.0, energy));
    }
    return out;
}

// --- flat binary serialization ------------------------------------------
//
// Layout: magic "BSNS1" (5 bytes), then rows and cols as 64-bit little-
// endian integers, then the row-major float64 payload.  Used for both
// ensembles and cross-Grams.

namespace detail {
static_assert(std::endian::native == std::endian::little,
              "matrix serialization assumes a little-endian host");

struct FileCloser {
    std::FILE* f;
    ~FileCloser() {
        if (f) std::fclose(f);
    }
};
} // namespace detail

inline void save_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("save_matrix: cannot open " + path);
    detail::FileCloser closer{f};
    const std::int64_t dims[2] = {m.rows(), m.cols()};
    std::fwrite("BSNS1", 1, 5, f);
    std::fwrite(dims, sizeof(std::int64_t), 2, f);
    for (std::int64_t i = 0; i < m.rows(); ++i) {
        for (std::int64_t j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            if (std::fwrite(&v, sizeof v, 1, f) != 1)
                throw std::runtime_error("save_matrix: short write to " + path);
        }
    }
}

inline Eigen::MatrixXd load_matrix(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("load_matrix: cannot open " + path);
    detail::FileCloser closer{f};
    char magic[5];
    if (std::fread(magic, 1, 5, f) != 5 || std::memcmp(magic, "BSNS1", 5) != 0)
        throw std::runtime_error("load_matrix: bad magic in " + path);
    std::int64_t dims[2];
    if (std::fread(dims, sizeof(std::int64_t), 2, f) != 2)
        throw std::runtime_error("load_matrix: truncated header in " + path);
    if (dims[0] < 0 || dims[1] < 0 || dims[0] > (1 << 24) || dims[1] > (1 << 24))
        throw std::runtime_error("load_matrix: implausible dimensions in " + path);
    Eigen::MatrixXd m(dims[0], dims[1]);
    for (std::int64_t i = 0; i < dims[0]; ++i) {
        for (std::int64_t j = 0; j < dims[1]; ++j) {
            double v;
            if (std::fread(&v, sizeof v, 1, f) != 1)
                throw std::runtime_error("load_matrix: truncated payload in " + path);
            m(i, j) = v;
        }
    }
    return m;
}

} // namespace blindsense
