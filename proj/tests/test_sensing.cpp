#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"

using Catch::Approx;

namespace {
constexpr double kPi = bs::detail::kPi;

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& stem) {
        path = (std::filesystem::temp_directory_path() / stem).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("gaussian ensembles are seed-deterministic") {
    const auto a = bs::gaussian_ensemble(10, 40, 7);
    const auto b = bs::gaussian_ensemble(10, 40, 7);
    const auto c = bs::gaussian_ensemble(10, 40, 8);
    REQUIRE(a.a.rows() == 10);
    REQUIRE(a.a.cols() == 40);
    CHECK(a.a == b.a);
    CHECK(a.a != c.a);

    // crude moments over 400 entries
    const double mean = a.a.mean();
    const double var = (a.a.array() - mean).square().mean();
    CHECK(std::abs(mean) < 0.2);
    CHECK(var == Approx(1.0).epsilon(0.25));

    CHECK_THROWS_AS(bs::gaussian_ensemble(0, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(bs::gaussian_ensemble(4, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(bs::gaussian_ensemble(4, 8, 1, bs::NoiseKind::gaussian, 0.0),
                    std::invalid_argument);
}

TEST_CASE("projection ensembles have orthonormal rows") {
    const auto p = bs::projection_ensemble(6, 24, 3);
    const Eigen::MatrixXd g = p.a * p.a.transpose();
    CHECK((g - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
    const auto p2 = bs::projection_ensemble(6, 24, 3);
    CHECK(p.a == p2.a);
}

TEST_CASE("generic wide ensembles have full row rank") {
    const auto ens = bs::gaussian_ensemble(10, 40, 11);
    CHECK(bs::numerical_rank(ens.a) == 10);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ens.a);
    CHECK(svd.singularValues()(9) > 1e-6);
}

TEST_CASE("noiseless measurement is exactly the matrix action") {
    const auto ens = bs::gaussian_ensemble(5, 12, 2);
    Eigen::VectorXd x(12);
    for (int i = 0; i < 12; ++i) x(i) = std::sin(1.0 + i);
    const auto m = bs::measure(x, ens);
    CHECK(m.y == ens.a * x);
    CHECK(m.noise.size() == m.y.size());
    CHECK(m.noise.norm() == 0.0);
}

TEST_CASE("measurement noise has the advertised energy and draw indexing") {
    auto ens = bs::gaussian_ensemble(8, 12, 5, bs::NoiseKind::gaussian, 0.05);
    const Eigen::VectorXd x = Eigen::VectorXd::Ones(12);

    double total = 0.0;
    const int reps = 2000;
    for (int t = 0; t < reps; ++t) total += bs::measure(x, ens, t).noise.squaredNorm();
    const double per_draw = total / reps;
    CHECK(per_draw == Approx(8 * 0.05 * 0.05).epsilon(0.1));

    const auto m1 = bs::measure(x, ens, 42);
    const auto m2 = bs::measure(x, ens, 42);
    const auto m3 = bs::measure(x, ens, 43);
    CHECK(m1.y == m2.y);
    CHECK(m1.y != m3.y);
    // y is assembled as (A x) + e, so subtracting A x back off recovers the
    // noise draw only up to one rounding per entry, not bitwise.
    CHECK((m1.y - ens.a * x - m1.noise).norm() < 1e-12);
}

TEST_CASE("full-band cross-Gram collapses to the eigenvalue diagonal") {
    const auto cfg = small_config();
    const bs::TimeGrid grid(cfg.horizon, cfg.grid);
    const bs::BandSet full = bs::BandSet::single(-cfg.omega, cfg.omega);
    const bs::ProlateBasis canonical = bs::solve_concentration(full, grid, cfg.nyquist());
    const bs::ProlateBasis sub = bs::solve_concentration(full, grid, 4);

    const bs::CrossGram gram = bs::cross_gram(sub, canonical);
    REQUIRE(gram.phi.rows() == cfg.nyquist());
    REQUIRE(gram.phi.cols() == 4);
    double worst = 0.0;
    for (int k = 0; k < gram.phi.rows(); ++k) {
        for (int n = 0; n < 4; ++n) {
            const double want = (k == n) ? canonical.lambda(k) : 0.0;
            worst = std::max(worst, std::abs(gram.phi(k, n) - want));
        }
    }
    CHECK(worst < 1e-5 * canonical.lambda(0));
    CHECK(std::abs(gram.tail) < 1e-8);
}

TEST_CASE("cross-Gram columns satisfy the Bessel energy bound") {
    const auto cfg = small_config();
    const bs::TimeGrid grid(cfg.horizon, cfg.grid);
    const bs::ProlateBasis canonical =
        bs::solve_concentration(bs::BandSet::single(-cfg.omega, cfg.omega), grid, cfg.nyquist());
    const bs::QuantizedGrid qg(cfg.omega, cfg.delta);
    const auto allocs = bs::enumerate_allocations(qg, cfg.omega_prime, 1);
    for (std::size_t ai = 1; ai < allocs.size(); ++ai) {
        const bs::ProlateBasis ab =
            bs::solve_concentration(allocs[ai].band, grid, cfg.sparsity());
        const bs::CrossGram gram = bs::cross_gram(ab, canonical);
        for (int n = 0; n < gram.phi.cols(); ++n) {
            double energy = 0.0;
            for (int k = 0; k < gram.phi.rows(); ++k) {
                if (canonical.lambda(k) > 1e-13)
                    energy += gram.phi(k, n) * gram.phi(k, n) / canonical.lambda(k);
            }
            CHECK(energy <= ab.lambda(n) + 1e-8);
        }
        CHECK(gram.tail >= -1e-10);
    }
}

TEST_CASE("cross-Gram rejects mismatched grids") {
    const auto cfg = small_config();
    const bs::TimeGrid grid(cfg.horizon, cfg.grid);
    const bs::TimeGrid other(cfg.horizon, cfg.grid * 2);
    const bs::BandSet full = bs::BandSet::single(-cfg.omega, cfg.omega);
    const bs::ProlateBasis canonical = bs::solve_concentration(full, grid, 6);
    const bs::ProlateBasis wrong = bs::solve_concentration(full, other, 4);
    CHECK_THROWS_AS(bs::cross_gram(wrong, canonical), std::invalid_argument);
}

TEST_CASE("matrix files round-trip bitwise") {
    Eigen::MatrixXd m(3, 5);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 5; ++j) m(i, j) = std::exp(0.3 * i) * std::cos(1.7 * j) / 3.0;

    TempFile f("bsns_roundtrip.bin");
    bs::save_matrix(f.path, m);
    const Eigen::MatrixXd back = bs::load_matrix(f.path);
    REQUIRE(back.rows() == 3);
    REQUIRE(back.cols() == 5);
    CHECK(back == m);
}

TEST_CASE("matrix loader rejects corrupt files") {
    TempFile f("bsns_corrupt.bin");
    {
        std::ofstream out(f.path, std::ios::binary);
        out << "XXXX1";
        const std::int64_t dims[2] = {3, 5};
        out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    }
    CHECK_THROWS_AS(bs::load_matrix(f.path), std::runtime_error);

    Eigen::MatrixXd m = Eigen::MatrixXd::Ones(4, 4);
    bs::save_matrix(f.path, m);
    {
        // chop the payload
        std::filesystem::resize_file(f.path, 40);
    }
    CHECK_THROWS_AS(bs::load_matrix(f.path), std::runtime_error);

    {
        std::ofstream out(f.path, std::ios::binary);
        out << "BSNS1";
        const std::int64_t dims[2] = {-2, 5};
        out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    }
    CHECK_THROWS_AS(bs::load_matrix(f.path), std::runtime_error);
    CHECK_THROWS_AS(bs::load_matrix("/nonexistent/bsns_nope.bin"), std::runtime_error);
}
