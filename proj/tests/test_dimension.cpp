#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using Catch::Approx;

namespace {

bs::PointCloud interval_cloud(int n, std::uint64_t seed) {
    bs::PointCloud cloud{Eigen::MatrixXd(n, 1), "interval"};
    std::mt19937_64 g = bs::make_engine(seed, 11);
    for (int i = 0; i < n; ++i) cloud.points(i, 0) = bs::uniform01(g);
    return cloud;
}

bs::PointCloud square_cloud(int n, std::uint64_t seed) {
    bs::PointCloud cloud{Eigen::MatrixXd(n, 2), "square"};
    std::mt19937_64 g = bs::make_engine(seed, 13);
    for (int i = 0; i < n; ++i) {
        cloud.points(i, 0) = bs::uniform01(g);
        cloud.points(i, 1) = bs::uniform01(g);
    }
    return cloud;
}

const std::vector<double> kSchedule{0.2, 0.1, 0.05, 0.025};

}  // namespace

TEST_CASE("fractal dimension of an interval sample is about one") {
    const auto cloud = interval_cloud(1500, 6);
    const auto est = bs::fractal_dim(cloud, kSchedule);
    CHECK(est.dim == Approx(1.0).margin(0.2));
    CHECK(est.dim == est.slope);

    // Coarse-scale sanity: a unit interval at eps = 0.2 needs a handful of
    // balls, not one and not dozens.
    const double l_coarse = std::exp(est.entropies.front());
    CHECK(l_coarse >= 3.0);
    CHECK(l_coarse <= 6.0);
}

TEST_CASE("fractal dimension of a planar sample is about two") {
    const auto cloud = square_cloud(4000, 8);
    const auto est = bs::fractal_dim(cloud, kSchedule);
    CHECK(est.dim == Approx(2.0).margin(0.4));
}

TEST_CASE("degenerate clouds have dimension zero") {
    bs::PointCloud point{Eigen::MatrixXd::Zero(1, 3), "point"};
    CHECK(bs::fractal_dim(point, kSchedule).dim == 0.0);

    bs::PointCloud repeated{Eigen::MatrixXd::Ones(40, 3), "repeated"};
    const auto est = bs::fractal_dim(repeated, kSchedule);
    CHECK(est.dim == 0.0);
    for (double h : est.entropies) CHECK(h == 0.0);
}

TEST_CASE("covering entropies are scale and translation invariant") {
    // Dyadic cloud, power-of-two dilation, integer translation: every
    // distance comparison reproduces bit for bit.
    bs::PointCloud cloud{Eigen::MatrixXd(60, 2), "dyadic"};
    std::mt19937_64 g = bs::make_engine(99, 17);
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 2; ++j)
            cloud.points(i, j) = std::round(256.0 * bs::uniform01(g)) / 256.0;

    const auto base = bs::fractal_dim(cloud, kSchedule);

    bs::PointCloud doubled{2.0 * cloud.points, "dyadic2"};
    std::vector<double> doubled_schedule;
    for (double e : kSchedule) doubled_schedule.push_back(2.0 * e);
    const auto scaled = bs::fractal_dim(doubled, doubled_schedule);
    CHECK(scaled.entropies == base.entropies);
    CHECK(scaled.dim == Approx(base.dim).margin(1e-12));

    bs::PointCloud shifted{cloud.points, "dyadicShift"};
    shifted.points.col(0).array() += 3.0;
    shifted.points.col(1).array() -= 7.0;
    const auto moved = bs::fractal_dim(shifted, kSchedule);
    CHECK(moved.entropies == base.entropies);
    CHECK(moved.dim == base.dim);
}

TEST_CASE("schedule validation") {
    const auto cloud = interval_cloud(50, 3);
    CHECK_THROWS_AS(bs::fractal_dim(cloud, {0.2}), std::invalid_argument);
    CHECK_THROWS_AS(bs::fractal_dim(cloud, {0.2, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(bs::fractal_dim(cloud, {0.1, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(bs::fractal_dim(cloud, {0.2, -0.1}), std::invalid_argument);
}

TEST_CASE("Minkowski sums: exact enumeration and capped subsampling") {
    bs::PointCloud a{Eigen::MatrixXd(2, 1), "a"};
    a.points << 0.0, 1.0;
    bs::PointCloud b{Eigen::MatrixXd(2, 1), "b"};
    b.points << 0.0, 10.0;

    const auto sum = bs::minkowski_sum(a, b, 100, 1);
    REQUIRE(sum.size() == 4);
    CHECK(sum.points(0, 0) == 0.0);
    CHECK(sum.points(1, 0) == 10.0);
    CHECK(sum.points(2, 0) == 1.0);
    CHECK(sum.points(3, 0) == 11.0);

    bs::PointCloud origin{Eigen::MatrixXd::Zero(1, 1), "origin"};
    const auto same = bs::minkowski_sum(a, origin, 100, 1);
    CHECK(same.points == a.points);

    const auto big = interval_cloud(300, 4);
    const auto capped = bs::minkowski_sum(big, big, 5000, 77);
    CHECK(capped.size() == 5000);
    const auto capped2 = bs::minkowski_sum(big, big, 5000, 77);
    CHECK(capped.points == capped2.points);
    const auto other = bs::minkowski_sum(big, big, 5000, 78);
    CHECK(capped.points != other.points);

    bs::PointCloud flat{Eigen::MatrixXd::Zero(2, 2), "flat"};
    CHECK_THROWS_AS(bs::minkowski_sum(a, flat, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(bs::minkowski_sum(a, bs::PointCloud{Eigen::MatrixXd(0, 1), ""}, 100, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(bs::minkowski_sum(a, b, 0, 1), std::invalid_argument);
}

TEST_CASE("dilation doubling separates unions from convex pieces") {
    const auto segs = bs::segment_union_cloud(400, 5);
    const auto seg_rep = bs::dilation_doubling_ratio(segs, kSchedule, 3000, 5);
    // The ideal ratio for a union of segments is 2, but finite sampling biases
    // it low (covers at the base scale are near saturation), so accept a wide
    // band that still excludes convex behavior and demand clear separation
    // from the disk below.
    CHECK(seg_rep.ratio == Approx(2.0).margin(0.7));
    CHECK(seg_rep.base.dim == Approx(1.0).margin(0.3));

    const auto disk = bs::disk_cloud(900, 5);
    const auto disk_rep = bs::dilation_doubling_ratio(disk, kSchedule, 3000, 5);
    CHECK(disk_rep.ratio == Approx(1.0).margin(0.3));
    CHECK(seg_rep.ratio > disk_rep.ratio + 0.25);

    bs::PointCloud point{Eigen::MatrixXd::Zero(30, 2), "degenerate"};
    CHECK_THROWS_AS(bs::dilation_doubling_ratio(point, kSchedule), std::domain_error);
}

TEST_CASE("occupancy fraction closed form") {
    CHECK(bs::sparsity_fraction(bs::detail::kPi, bs::detail::kPi / 8) == Approx(0.125));
    CHECK(bs::sparsity_fraction(2.0, 2.0) == 1.0);
    CHECK(bs::sparsity_fraction(2.0, 0.0) == 0.0);
    CHECK_THROWS_AS(bs::sparsity_fraction(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bs::sparsity_fraction(1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(bs::sparsity_fraction(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("information dimension recovers the continuous weight") {
    const std::vector<double> schedule{1.0 / 16, 1.0 / 32, 1.0 / 64,
                                       1.0 / 128, 1.0 / 256, 1.0 / 512};
    for (double gamma : {0.0, 0.3, 0.5, 1.0}) {
        bs::MixtureSource src{gamma, 4242 + static_cast<std::uint64_t>(gamma * 100)};
        const auto est = bs::renyi_dim(src, schedule, 100000);
        const double tol = (gamma == 0.0) ? 0.02 : 0.05;
        CHECK(est.dim == Approx(gamma).margin(tol));
        CHECK(est.dim >= 0.0);
        CHECK(est.dim <= 1.05);
    }
}

TEST_CASE("information dimension drops starved scales") {
    // 500 samples cannot fill 512 bins at 5 per bin: the fine scales must be
    // dropped and the estimate flagged.
    bs::MixtureSource src{1.0, 7};
    const std::vector<double> schedule{1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 64, 1.0 / 256};
    const auto est = bs::renyi_dim(src, schedule, 500);
    CHECK(est.truncated);
    CHECK(est.epsilons.size() < schedule.size());
    CHECK(est.epsilons.size() >= 2);

    // An atom never starves any scale: one bin holds everything.
    bs::MixtureSource atom{0.0, 7};
    const auto atom_est = bs::renyi_dim(atom, schedule, 500);
    CHECK_FALSE(atom_est.truncated);
    CHECK(atom_est.dim == 0.0);
}

TEST_CASE("information dimension argument validation") {
    bs::MixtureSource src{0.5, 1};
    const std::vector<double> ok{0.25, 0.125, 0.0625};
    CHECK_THROWS_AS(bs::renyi_dim(src, {0.25, 0.125}, 1000), std::invalid_argument);
    CHECK_THROWS_AS(bs::renyi_dim(src, {0.25, 0.25, 0.125}, 1000), std::invalid_argument);
    CHECK_THROWS_AS(bs::renyi_dim(src, ok, 99), std::invalid_argument);
    bs::MixtureSource bad{1.5, 1};
    CHECK_THROWS_AS(bs::renyi_dim(bad, ok, 1000), std::invalid_argument);
}
