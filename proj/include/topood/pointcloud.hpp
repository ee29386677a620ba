#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace topood {

/// Scale parameter of the filtration, in the same units as the distances.
/// Essential classes carry +infinity as their death.
using scale_t = double;

enum class Role : unsigned char { Train = 0, Test = 1, Ood = 2, Unlabeled = 3 };

std::string_view to_string(Role role);
/// Accepts "train", "test", "ood", "unlabeled" (case-insensitive). Throws InputError otherwise.
Role parse_role(std::string_view text);

enum class Exec { Serial, Parallel };

/// A finite set of points in Euclidean R^d, stored row-major.
/// Duplicate points are allowed; coordinates must be finite.
class PointCloud {
public:
    PointCloud(std::size_t n_points, std::size_t dim, std::vector<double> coords,
               Role role = Role::Unlabeled, std::string source = {});

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }
    Role role() const noexcept { return role_; }
    const std::string& source() const noexcept { return source_; }

    std::span<const double> point(std::size_t i) const noexcept {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<const double> coords() const noexcept { return coords_; }

    void set_role(Role role) noexcept { role_ = role; }
    void set_source(std::string source) { source_ = std::move(source); }

    /// Gather the given rows (repeats allowed) into a new cloud.
    PointCloud subsample(std::span<const std::size_t> indices) const;

private:
    std::size_t n_;
    std::size_t dim_;
    std::vector<double> coords_;
    Role role_;
    std::string source_;
};

/// Per-feature standardization (zero mean, unit variance). Constant features are only centered.
PointCloud standardize_features(const PointCloud& cloud);

/// Dense symmetric matrix of pairwise Euclidean distances.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {entries_.data() + i * n_, n_}; }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Full distance matrix. The parallel kernel produces bit-identical entries to the serial one.
DistanceMatrix pairwise_distances(const PointCloud& cloud, Exec exec = Exec::Parallel);

/// Reference kernel kept for tests and benchmarks.
DistanceMatrix pairwise_distances_serial(const PointCloud& cloud);

/// min over i of max over j of d(i, j). At this scale the Rips complex is a cone.
scale_t enclosing_radius(const DistanceMatrix& dm) noexcept;

} // namespace topood
