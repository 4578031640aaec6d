#pragma once

// Blind recovery and its identifiability certificates.
//
// The decoder knows the dictionary of candidate allocations but not which
// one produced the signal.  It solves one least-squares problem per
// candidate subspace A Phi_Q and keeps the smallest residual.  Whether that
// is guaranteed to work is a rank question: a measurement ensemble is
// one-to-one on the union of candidate subspaces exactly when it preserves
// the rank of every stacked pair [Phi_1, Phi_2]; below the maximal pair rank
// two allocations share a measurement (a collision), and an explicit witness
// can be extracted from the null space of A [Phi_1, -Phi_2].

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quantize.hpp"
#include "rng.hpp"
#include "sensing.hpp"
#include "signal.hpp"

namespace blindsense {

// Candidate supports with their cross-Grams, in enumeration order.
struct Dictionary {
    std::vector<Allocation> allocations;
    std::vector<CrossGram> grams;

    int size() const { return static_cast<int>(allocations.size()); }
};

// Singular values above `gap` relative to the largest one.
inline int numerical_rank(const Eigen::MatrixXd& m, double gap = 1e-8) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > gap * s(0)) ++r;
    return r;
}

enum class RecoveryStatus { unique, ambiguous, failed };

inline const char* to_string(RecoveryStatus s) {
    switch (s) {
        case RecoveryStatus::unique: return "unique";
        case RecoveryStatus::ambiguous: return "ambiguous";
        default: return "failed";
    }
}

struct RecoveryResult {
    int chosen = -1;             // dictionary index of the selected allocation
    Eigen::VectorXd alpha;       // coefficients in the selected subspace
    Eigen::VectorXd x;           // recovered coefficient vector, Phi alpha
    double residual = std::numeric_limits<double>::infinity();
    RecoveryStatus status = RecoveryStatus::failed;
    std::vector<int> ties;       // all indices within the tie tolerance
};

struct RecoveryOptions {
    double tie_tol = 1e-6;     // relative (scaled by ||y||) tie window
    double fail_floor = 1e-6;  // absolute residual floor for noiseless failure
};

// Exhaustive dictionary search: least squares against every candidate
// subspace.  Ties are broken toward the smallest-measure allocation, then
// lexicographically; with noiseless ensembles a best residual above the
// absolute floor means y fits no candidate and the decode fails.
inline RecoveryResult blind_recover(const Eigen::VectorXd& y, const MeasurementEnsemble& ens,
                                    const Dictionary& dict,
                                    const RecoveryOptions& opts = {}) {
    if (dict.size() == 0) throw std::invalid_argument("blind_recover: empty dictionary");
    if (y.size() != ens.a.rows())
        throw std::invalid_argument("blind_recover: measurement length must match ensemble rows");

    const int k = dict.size();
    std::vector<Eigen::VectorXd> alphas(k);
    std::vector<double> residuals(k);
    for (int i = 0; i < k; ++i) {
        const Eigen::MatrixXd& phi = dict.grams[i].phi;
        if (phi.rows() != ens.a.cols())
            throw std::invalid_argument("blind_recover: cross-Gram rows must match ensemble columns");
        if (phi.cols() == 0) {
            alphas[i] = Eigen::VectorXd();
            residuals[i] = y.norm();
            continue;
        }
        Eigen::MatrixXd b = ens.a * phi;  // M x S
        Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
        alphas[i] = svd.solve(y);  // minimum-norm least squares
        residuals[i] = (y - b * alphas[i]).norm();
    }

    int best = 0;
    for (int i = 1; i < k; ++i)
        if (residuals[i] < residuals[best]) best = i;

    RecoveryResult out;
    const double window = residuals[best] + opts.tie_tol * y.norm();
    for (int i = 0; i < k; ++i)
        if (residuals[i] <= window) out.ties.push_back(i);

    int chosen = out.ties.front();
    for (int i : out.ties)
        if (allocation_less(dict.allocations[i], dict.allocations[chosen])) chosen = i;

    out.chosen = chosen;
    out.alpha = alphas[chosen];
    out.residual = residuals[chosen];
    out.x = dict.grams[chosen].phi.cols() > 0
                ? Eigen::VectorXd(dict.grams[chosen].phi * alphas[chosen])
                : Eigen::VectorXd::Zero(ens.a.cols());
    if (ens.noise == NoiseKind::none && residuals[best] > opts.fail_floor)
        out.status = RecoveryStatus::failed;
    else
        out.status = out.ties.size() > 1 ? RecoveryStatus::ambiguous : RecoveryStatus::unique;
    return out;
}

struct RankCertificate {
    int pair_rank = 0;      // rank [Phi_1, Phi_2]
    int measured_rank = 0;  // rank A [Phi_1, Phi_2]
    bool preserved = false;
    double gap = 0.0;
};

inline RankCertificate certify_rank_preservation(const MeasurementEnsemble& ens,
                                                 const Eigen::MatrixXd& phi1,
                                                 const Eigen::MatrixXd& phi2,
                                                 double gap = 1e-8) {
    if (phi1.rows() != phi2.rows() || phi1.rows() != ens.a.cols())
        throw std::invalid_argument("certify_rank_preservation: incompatible shapes");
    Eigen::MatrixXd stacked(phi1.rows(), phi1.cols() + phi2.cols());
    stacked << phi1, phi2;
    RankCertificate cert;
    cert.gap = gap;
    cert.pair_rank = numerical_rank(stacked, gap);
    cert.measured_rank = numerical_rank(ens.a * stacked, gap);
    cert.preserved = (cert.measured_rank == cert.pair_rank);
    return cert;
}

struct PairRank {
    int rank = 0;
    int first = -1;
    int second = -1;
};

// Maximal stacked rank over all dictionary pairs (i <= j); this is the
// measurement count at which rank preservation starts to guarantee
// one-to-one decoding.
inline PairRank max_pair_rank(const Dictionary& dict, double gap = 1e-8) {
    if (dict.size() == 0) throw std::invalid_argument("max_pair_rank: empty dictionary");
    PairRank best;
    for (int i = 0; i < dict.size(); ++i) {
        for (int j = i; j < dict.size(); ++j) {
            Eigen::MatrixXd stacked(dict.grams[i].phi.rows(),
                                    dict.grams[i].phi.cols() + dict.grams[j].phi.cols());
            stacked << dict.grams[i].phi, dict.grams[j].phi;
            const int r = numerical_rank(stacked, gap);
            if (r > best.rank) best = {r, i, j};
        }
    }
    return best;
}

struct CollisionPair {
    Eigen::VectorXd x1;  // in the range of Phi_1
    Eigen::VectorXd x2;  // in the range of Phi_2, with A x1 = A x2
};

// Explicit two-signal witness that the ensemble is not one-to-one on the
// pair of subspaces.  Requires M below the stacked pair rank (otherwise the
// call is rejected: Gaussian rows preserve the rank almost surely and no
// witness exists).  Returns nothing when every null direction of
// A [Phi_1, -Phi_2] collapses to x1 = x2.
inline std::optional<CollisionPair> construct_collision(const MeasurementEnsemble& ens,
                                                        const Eigen::MatrixXd& phi1,
                                                        const Eigen::MatrixXd& phi2,
                                                        double gap = 1e-8) {
    if (phi1.rows() != phi2.rows() || phi1.rows() != ens.a.cols())
        throw std::invalid_argument("construct_collision: incompatible shapes");
    Eigen::MatrixXd c(phi1.rows(), phi1.cols() + phi2.cols());
    c << phi1, -phi2;
    const int pair_rank = numerical_rank(c, gap);
    if (ens.a.rows() >= pair_rank)
        throw std::invalid_argument(
            "construct_collision: measurement count is not below the pair rank");

    Eigen::MatrixXd b = ens.a * c;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    int rank_b = 0;
    for (int i = 0; i < s.size(); ++i)
        if (smax > 0.0 && s(i) > gap * smax) ++rank_b;

    Eigen::VectorXd bestv;
    double best_sep = 0.0;
    for (int i = rank_b; i < c.cols(); ++i) {
        Eigen::VectorXd v = svd.matrixV().col(i);
        const double sep = (c * v).norm();
        if (sep > best_sep) {
            best_sep = sep;
            bestv = v;
        }
    }
    if (best_sep <= 1e-12) return std::nullopt;

    bestv /= best_sep;  // normalize the witness separation: ||x1 - x2|| = 1
    CollisionPair pair;
    pair.x1 = phi1 * bestv.head(phi1.cols());
    pair.x2 = phi2 * bestv.tail(phi2.cols());
    return pair;
}

// Smallest measured norm over a set of probe directions; probes are
// normalized defensively.  This estimates (from above) the inverse
// Lipschitz constant of the ensemble on the difference set the probes
// sample, so recovery errors obey ||x - x_hat|| <= 2 ||e|| / beta whenever
// the probes include the realized difference direction's subspace minimum.
inline double inverse_lipschitz(const MeasurementEnsemble& ens,
                                const std::vector<Eigen::VectorXd>& probes) {
    if (probes.empty()) throw std::invalid_argument("inverse_lipschitz: no probes");
    double beta = std::numeric_limits<double>::infinity();
    for (const auto& z : probes) {
        const double n = z.norm();
        if (!(n > 0.0)) throw std::invalid_argument("inverse_lipschitz: zero probe");
        beta = std::min(beta, (ens.a * z).norm() / n);
    }
    return beta;
}

// Probe directions spanning the dictionary's pairwise difference set:
// per pair, random normalized differences Phi_i a1 - Phi_j a2, plus the
// deterministic worst direction of A restricted to span [Phi_i, Phi_j]
// (the right singular vector of A U_pair with the smallest singular value).
// The deterministic probes make the reported beta the exact minimum of
// ||A z|| over the union of pair spans.
inline std::vector<Eigen::VectorXd> build_difference_probes(const Dictionary& dict,
                                                            const MeasurementEnsemble& ens,
                                                            int draws_per_pair,
                                                            std::uint64_t seed) {
    if (dict.size() == 0)
        throw std::invalid_argument("build_difference_probes: empty dictionary");
    std::vector<Eigen::VectorXd> probes;
    std::mt19937_64 g = make_engine(seed, 0x50524f42ULL);
    for (int i = 0; i < dict.size(); ++i) {
        for (int j = i; j < dict.size(); ++j) {
            const Eigen::MatrixXd& p1 = dict.grams[i].phi;
            const Eigen::MatrixXd& p2 = dict.grams[j].phi;
            if (p1.cols() + p2.cols() == 0) continue;
            Eigen::MatrixXd stacked(p1.rows(), p1.cols() + p2.cols());
            stacked << p1, p2;

            // Orthonormal basis of the pair span.
            Eigen::JacobiSVD<Eigen::MatrixXd> espan(stacked, Eigen::ComputeThinU);
            const auto& sv = espan.singularValues();
            int r = 0;
            for (int t = 0; t < sv.size(); ++t)
                if (sv(0) > 0.0 && sv(t) > 1e-12 * sv(0)) ++r;
            if (r > 0) {
                Eigen::MatrixXd u = espan.matrixU().leftCols(r);
                Eigen::JacobiSVD<Eigen::MatrixXd> worst(ens.a * u, Eigen::ComputeThinV);
                probes.push_back(u * worst.matrixV().col(worst.matrixV().cols() - 1));
            }

            for (int d = 0; d < draws_per_pair; ++d) {
                Eigen::VectorXd a1(p1.cols()), a2(p2.cols());
                for (int t = 0; t < a1.size(); ++t) a1(t) = normal(g);
                for (int t = 0; t < a2.size(); ++t) a2(t) = normal(g);
                Eigen::VectorXd z = Eigen::VectorXd::Zero(p1.rows());
                if (p1.cols() > 0) z += p1 * a1;
                if (p2.cols() > 0) z -= p2 * a2;
                const double n = z.norm();
                if (n > 1e-12) probes.push_back(z / n);
            }
        }
    }
    if (probes.empty())
        throw std::invalid_argument("build_difference_probes: dictionary spans nothing");
    return probes;
}

struct TrialRecord {
    std::uint64_t seed = 0;
    int m = 0;
    int allocation_index = -1;
    double residual = 0.0;
    double err_norm = 0.0;
    RecoveryStatus status = RecoveryStatus::failed;
};

struct TrialBatch {
    double success_rate = 0.0;
    std::vector<TrialRecord> records;
};

// Noiseless decoding under uniformly random rank-m projections: each trial
// draws a fresh projection and a fresh unit-coefficient dictionary signal,
// then decodes blind.  Success means the coefficient vector is reproduced
// to 1e-6.
inline TrialBatch random_projection_recovery_trial(int m, const Dictionary& dict, int trials,
                                                   std::uint64_t seed,
                                                   const RecoveryOptions& opts = {}) {
    if (trials < 1) throw std::invalid_argument("random_projection_recovery_trial: trials < 1");
    std::vector<int> usable;
    for (int i = 0; i < dict.size(); ++i)
        if (dict.grams[i].phi.cols() > 0 && !dict.allocations[i].empty()) usable.push_back(i);
    if (usable.empty())
        throw std::invalid_argument("random_projection_recovery_trial: no nonempty allocations");

    const int n = static_cast<int>(dict.grams[usable[0]].phi.rows());
    TrialBatch batch;
    int successes = 0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(t);
        MeasurementEnsemble ens = projection_ensemble(m, n, trial_seed);

        std::mt19937_64 g = make_engine(trial_seed, 0x5349'474eULL);
        const int idx = usable[static_cast<int>(g() % usable.size())];
        Eigen::VectorXd alpha(dict.grams[idx].phi.cols());
        for (int i = 0; i < alpha.size(); ++i) alpha(i) = normal(g);
        alpha /= alpha.norm();
        Eigen::VectorXd x = dict.grams[idx].phi * alpha;

        RecoveryResult rec = blind_recover(ens.a * x, ens, dict, opts);
        const double err = (rec.x - x).norm();
        if (err < 1e-6) ++successes;
        batch.records.push_back({trial_seed, m, rec.chosen, rec.residual, err, rec.status});
    }
    batch.success_rate = static_cast<double>(successes) / trials;
    return batch;
}

} // namespace blindsense
