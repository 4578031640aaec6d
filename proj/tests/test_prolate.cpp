#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using Catch::Approx;

TEST_CASE("kernel value: full band pins") {
    const bs::BandSet full = bs::BandSet::single(-bs::detail::kPi, bs::detail::kPi);
    CHECK(bs::bandlimit_kernel_value(full, 0.0) == Approx(1.0).margin(1e-15));
    CHECK(std::abs(bs::bandlimit_kernel_value(full, 1.0)) < 1e-12);
    // tau -> 0 limit equals measure(positive part) / pi for a two-piece set
    const bs::BandSet duo({{-2.0, -1.0}, {1.0, 2.0}});
    CHECK(bs::bandlimit_kernel_value(duo, 0.0) == Approx(1.0 / bs::detail::kPi));
}

TEST_CASE("kernel value matches brute quadrature") {
    const bs::BandSet duo(
        {{-bs::detail::kPi / 2, -bs::detail::kPi / 4}, {bs::detail::kPi / 4, bs::detail::kPi / 2}});
    for (double tau : {0.3, 1.0, 2.7}) {
        CHECK(bs::bandlimit_kernel_value(duo, tau) ==
              Approx(oracle_kernel_value(duo, tau)).margin(1e-9));
    }
    // closed form at tau = 1: (sin(pi/2) - sin(pi/4)) / pi
    CHECK(bs::bandlimit_kernel_value(duo, 1.0) ==
          Approx((1.0 - std::sqrt(0.5)) / bs::detail::kPi).epsilon(1e-12));
}

TEST_CASE("kernel matrix is exactly symmetric; empty support gives zero") {
    const bs::TimeGrid grid(8.0, 64);
    const bs::BandSet duo(
        {{-bs::detail::kPi / 2, -bs::detail::kPi / 4}, {bs::detail::kPi / 4, bs::detail::kPi / 2}});
    const Eigen::MatrixXd k = bs::bandlimit_kernel(duo, grid);
    CHECK(k == k.transpose().eval());
    const Eigen::MatrixXd kz = bs::bandlimit_kernel(bs::BandSet(), grid);
    CHECK(kz.cwiseAbs().maxCoeff() == 0.0);

    const bs::BandSet asym({{0.5, 1.0}});
    CHECK_THROWS_AS(bs::bandlimit_kernel(asym, grid), std::invalid_argument);
}

TEST_CASE("concentration spectrum: range, order, knee, and refinement stability") {
    const auto cfg = small_config();
    const bs::BandSet full = bs::BandSet::single(-cfg.omega, cfg.omega);
    const bs::TimeGrid grid(cfg.horizon, cfg.grid);
    const int count = 16;
    const bs::ProlateBasis basis = bs::solve_concentration(full, grid, count);

    for (int i = 0; i < count; ++i) {
        CHECK(basis.lambda(i) >= 0.0);
        CHECK(basis.lambda(i) <= 1.0);
        if (i) CHECK(basis.lambda(i) <= basis.lambda(i - 1));
    }

    // Knee near omega * T / pi = 8, and exactly reproduced by the
    // doubled-resolution oracle.
    const int knee = bs::significant_count(basis.lambda);
    CHECK(std::abs(knee - 8) <= 2);
    const bs::ProlateBasis fine =
        bs::solve_concentration(full, bs::TimeGrid(cfg.horizon, 2 * cfg.grid), count);
    CHECK(bs::significant_count(fine.lambda) == knee);
    // Trapezoid quadrature converges at O(h^2); at the coarse 64-point grid
    // (h ~ 0.13) doubling the resolution moves eigenvalues by up to ~1.3e-3.
    for (int i = 0; i < count; ++i)
        CHECK(std::abs(basis.lambda(i) - fine.lambda(i)) < 5e-3);
}

TEST_CASE("orthogonality law over the window") {
    const auto cfg = small_config();
    const bs::TimeGrid grid(cfg.horizon, cfg.grid);
    const bs::ProlateBasis basis =
        bs::solve_concentration(bs::BandSet::single(-cfg.omega, cfg.omega), grid, 10);
    const bs::OrthogonalityReport rep = bs::verify_orthogonality(basis);
    CHECK(rep.max_offdiag < 1e-8);
    CHECK(rep.max_diag_error < 1e-8);

    // doubled-resolution quadrature of the same inner products
    const bs::ProlateBasis fine =
        bs::solve_concentration(bs::BandSet::single(-cfg.omega, cfg.omega),
                                bs::TimeGrid(cfg.horizon, 2 * cfg.grid), 10);
    const bs::OrthogonalityReport frep = bs::verify_orthogonality(fine);
    CHECK(frep.max_offdiag < 1e-8);
    CHECK(frep.max_diag_error < 1e-8);
}

TEST_CASE("eigenvalue interlacing under band growth") {
    const bs::TimeGrid grid(8.0, 64);
    const bs::ProlateBasis small_band =
        bs::solve_concentration(bs::BandSet::single(-bs::detail::kPi / 2, bs::detail::kPi / 2),
                                grid, 8);
    const bs::ProlateBasis big_band =
        bs::solve_concentration(bs::BandSet::single(-bs::detail::kPi, bs::detail::kPi), grid, 8);
    for (int i = 0; i < 8; ++i) CHECK(small_band.lambda(i) <= big_band.lambda(i) + 1e-8);
}

TEST_CASE("eigensolve determinism") {
    const bs::TimeGrid grid(8.0, 64);
    const bs::BandSet duo(
        {{-bs::detail::kPi / 2, -bs::detail::kPi / 4}, {bs::detail::kPi / 4, bs::detail::kPi / 2}});
    const bs::ProlateBasis a = bs::solve_concentration(duo, grid, 6);
    const bs::ProlateBasis b = bs::solve_concentration(duo, grid, 6);
    CHECK(a.lambda == b.lambda);
    CHECK(a.samples == b.samples);
}

TEST_CASE("solver input validation") {
    const bs::BandSet full = bs::BandSet::single(-bs::detail::kPi, bs::detail::kPi);
    CHECK_THROWS_AS(bs::solve_concentration(full, bs::TimeGrid(8.0, 64), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(bs::solve_concentration(full, bs::TimeGrid(8.0, 64), 65),
                    std::invalid_argument);
    // 8 points per period rule: omega = pi, T = 8 needs >= 64 points
    CHECK_THROWS_AS(bs::solve_concentration(full, bs::TimeGrid(8.0, 32), 4),
                    std::invalid_argument);
}

TEST_CASE("significant_count counts at-or-above threshold") {
    Eigen::VectorXd lam(4);
    lam << 1.0, 0.7, 0.5, 0.3;
    CHECK(bs::significant_count(lam) == 3);
    CHECK(bs::significant_count(lam, 0.75) == 1);
    CHECK(bs::significant_count(lam, 0.0) == 4);
}
