#pragma once

// Epsilon-coverings of finite point clouds.
//
// Covering numbers are computed with centers restricted to cloud points.
// Two engines: an exhaustive minimum cover (bitmask dynamic program, capped
// at 20 points) and a farthest-point greedy cover.  The greedy variant
// builds one center ordering per cloud and stops when the worst residual
// distance drops to epsilon, so its count is automatically monotone in
// epsilon and never beats the exhaustive minimum.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace blindsense {

struct PointCloud {
    Eigen::MatrixXd points;  // one point per row
    std::string provenance;

    int size() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
};

enum class CoverMethod { exact, greedy };

struct CoverReport {
    double epsilon = 0.0;
    int size = 0;
    CoverMethod method = CoverMethod::greedy;
    std::vector<int> centers;  // row indices into the cloud
    bool verified = false;     // post-hoc: every point within epsilon of a center
};

namespace detail {

inline double sqdist(const Eigen::MatrixXd& pts, int a, int b) {
    return (pts.row(a) - pts.row(b)).squaredNorm();
}

// Exhaustive minimum cover over <= 20 points: dp over covered-point masks,
// extending always from the lowest uncovered point.
inline CoverReport exact_cover(const PointCloud& cloud, double eps) {
    const int n = cloud.size();
    const double eps2 = eps * eps;
    std::vector<std::uint32_t> ball(n, 0);
    for (int c = 0; c < n; ++c)
        for (int p = 0; p < n; ++p)
            if (sqdist(cloud.points, c, p) <= eps2) ball[c] |= (1u << p);

    const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
    const std::size_t states = std::size_t(1) << n;
    std::vector<std::int8_t> cost(states, std::int8_t(127));
    std::vector<std::uint32_t> prev_mask(states, 0);
    std::vector<std::int8_t> prev_center(states, -1);
    cost[0] = 0;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        if (cost[mask] == 127) continue;
        int lowest = 0;
        while (mask & (1u << lowest)) ++lowest;
        for (int c = 0; c < n; ++c) {
            if (!(ball[c] & (1u << lowest))) continue;
            const std::uint32_t next = mask | ball[c];
            if (cost[mask] + 1 < cost[next]) {
                cost[next] = static_cast<std::int8_t>(cost[mask] + 1);
                prev_mask[next] = mask;
                prev_center[next] = static_cast<std::int8_t>(c);
            }
        }
    }

    CoverReport rep{eps, cost[full], CoverMethod::exact, {}, false};
    for (std::uint32_t m = full; m != 0; m = prev_mask[m]) rep.centers.push_back(prev_center[m]);
    std::sort(rep.centers.begin(), rep.centers.end());
    return rep;
}

inline CoverReport greedy_cover(const PointCloud& cloud, double eps) {
    const int n = cloud.size();
    const double eps2 = eps * eps;
    CoverReport rep{eps, 0, CoverMethod::greedy, {}, false};

    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    int next = 0;  // start from the first point; ties below break to lowest index
    while (true) {
        rep.centers.push_back(next);
        for (int p = 0; p < n; ++p)
            best[p] = std::min(best[p], sqdist(cloud.points, next, p));
        int far = 0;
        for (int p = 1; p < n; ++p)
            if (best[p] > best[far]) far = p;
        if (best[far] <= eps2) break;
        next = far;
    }
    rep.size = static_cast<int>(rep.centers.size());
    return rep;
}

} // namespace detail

inline CoverReport epsilon_cover(const PointCloud& cloud, double eps, CoverMethod method) {
    if (cloud.size() == 0) throw std::invalid_argument("epsilon_cover: empty cloud");
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon_cover: epsilon must be positive");
    if (method == CoverMethod::exact && cloud.size() > 20)
        throw std::invalid_argument("epsilon_cover: exact method is capped at 20 points");

    CoverReport rep = (method == CoverMethod::exact) ? detail::exact_cover(cloud, eps)
                                                     : detail::greedy_cover(cloud, eps);
    // Independent re-check of the cover property.
    rep.verified = true;
    for (int p = 0; p < cloud.size() && rep.verified; ++p) {
        bool covered = false;
        for (int c : rep.centers)
            if (detail::sqdist(cloud.points, c, p) <= eps * eps) {
                covered = true;
                break;
            }
        rep.verified = covered;
    }
    return rep;
}

// --- CSV persistence ------------------------------------------------------
//
// Comma separator, '.' decimal point, LF line ends, one header row of
// coordinate labels.  %.17g keeps save -> load -> save byte-stable.

inline void save_cloud(const std::string& path, const PointCloud& cloud) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_cloud: cannot open " + path);
    for (int j = 0; j < cloud.dim(); ++j) out << (j ? ",x" : "x") << j;
    out << "\n";
    char buf[64];
    for (int i = 0; i < cloud.size(); ++i) {
        for (int j = 0; j < cloud.dim(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", cloud.points(i, j));
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
}

inline PointCloud load_cloud(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_cloud: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_cloud: missing header in " + path);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) row.push_back(std::strtod(item.c_str(), nullptr));
        if (!rows.empty() && rows.back().size() != row.size())
            throw std::runtime_error("load_cloud: ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("load_cloud: no data rows in " + path);
    PointCloud cloud{Eigen::MatrixXd(static_cast<int>(rows.size()), static_cast<int>(rows[0].size())),
                     path};
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            cloud.points(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return cloud;
}

} // namespace blindsense
