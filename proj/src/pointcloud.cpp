#include "topood/pointcloud.hpp"

#include "topood/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace topood {

std::string_view to_string(Role role) {
    switch (role) {
    case Role::Train: return "train";
    case Role::Test: return "test";
    case Role::Ood: return "ood";
    case Role::Unlabeled: return "unlabeled";
    }
    return "unlabeled";
}

Role parse_role(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "train") return Role::Train;
    if (lower == "test") return Role::Test;
    if (lower == "ood") return Role::Ood;
    if (lower == "unlabeled") return Role::Unlabeled;
    throw InputError("unknown role '" + std::string(text) + "' (expected train, test, ood or unlabeled)");
}

PointCloud::PointCloud(std::size_t n_points, std::size_t dim, std::vector<double> coords,
                       Role role, std::string source)
    : n_(n_points), dim_(dim), coords_(std::move(coords)), role_(role), source_(std::move(source)) {
    if (n_ == 0) throw InputError("point cloud must contain at least one point");
    if (dim_ == 0) throw InputError("point cloud dimension must be at least 1");
    if (coords_.size() != n_ * dim_)
        throw InputError("point cloud has " + std::to_string(coords_.size()) + " coordinates, expected " +
                         std::to_string(n_ * dim_));
    for (std::size_t k = 0; k < coords_.size(); ++k) {
        if (!std::isfinite(coords_[k]))
            throw InputError("non-finite coordinate at point " + std::to_string(k / dim_) + ", feature " +
                             std::to_string(k % dim_));
    }
}

PointCloud PointCloud::subsample(std::span<const std::size_t> indices) const {
    std::vector<double> out;
    out.reserve(indices.size() * dim_);
    for (std::size_t idx : indices) {
        auto p = point(idx);
        out.insert(out.end(), p.begin(), p.end());
    }
    return PointCloud(indices.size(), dim_, std::move(out), role_, source_);
}

PointCloud standardize_features(const PointCloud& cloud) {
    const std::size_t n = cloud.size(), d = cloud.dim();
    std::vector<double> mean(d, 0.0), var(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = cloud.point(i);
        for (std::size_t k = 0; k < d; ++k) mean[k] += p[k];
    }
    for (auto& m : mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = cloud.point(i);
        for (std::size_t k = 0; k < d; ++k) var[k] += (p[k] - mean[k]) * (p[k] - mean[k]);
    }
    std::vector<double> out(cloud.coords().begin(), cloud.coords().end());
    for (std::size_t k = 0; k < d; ++k) {
        const double sd = std::sqrt(var[k] / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            double& x = out[i * d + k];
            x -= mean[k];
            if (sd > 0.0) x /= sd;
        }
    }
    return PointCloud(n, d, std::move(out), cloud.role(), cloud.source());
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) noexcept {
    // Four independent partial sums let the compiler vectorize without reassociating.
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    const std::size_t d = a.size(), d4 = d - d % 4;
    for (std::size_t k = 0; k < d4; k += 4) {
        const double e0 = a[k] - b[k], e1 = a[k + 1] - b[k + 1];
        const double e2 = a[k + 2] - b[k + 2], e3 = a[k + 3] - b[k + 3];
        s0 += e0 * e0;
        s1 += e1 * e1;
        s2 += e2 * e2;
        s3 += e3 * e3;
    }
    for (std::size_t k = d4; k < d; ++k) {
        const double e = a[k] - b[k];
        s0 += e * e;
    }
    return std::sqrt((s0 + s1) + (s2 + s3));
}

DistanceMatrix pairwise_distances_serial(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    DistanceMatrix dm(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = euclidean_distance(cloud.point(i), cloud.point(j));
            dm(i, j) = dist;
            dm(j, i) = dist;
        }
    }
    return dm;
}

DistanceMatrix pairwise_distances(const PointCloud& cloud, Exec exec) {
    if (exec == Exec::Serial) return pairwise_distances_serial(cloud);

    const auto n = static_cast<std::ptrdiff_t>(cloud.size());
    DistanceMatrix dm(cloud.size());
    // Rows shrink with i, so hand them out dynamically.
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t j = i + 1; j < n; ++j) {
            const double dist = euclidean_distance(cloud.point(i), cloud.point(j));
            dm(i, j) = dist;
            dm(j, i) = dist;
        }
    }
    return dm;
}

scale_t enclosing_radius(const DistanceMatrix& dm) noexcept {
    const std::size_t n = dm.size();
    if (n <= 1) return 0.0;
    scale_t best = std::numeric_limits<scale_t>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        auto row = dm.row(i);
        best = std::min(best, *std::max_element(row.begin(), row.end()));
    }
    return best;
}

} // namespace topood
