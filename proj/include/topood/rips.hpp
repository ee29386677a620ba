#pragma once

#include "topood/pointcloud.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace topood {

using index_t = std::int64_t;

/// Combinatorial number system index of a sorted vertex tuple (colexicographic rank).
index_t colex_index(std::span<const std::uint32_t> sorted_vertices) noexcept;

struct Simplex {
    std::array<std::uint32_t, 3> vertices{};
    int dimension = 0;
    scale_t diameter = 0.0;

    std::span<const std::uint32_t> vertex_span() const noexcept {
        return {vertices.data(), static_cast<std::size_t>(dimension) + 1};
    }
    index_t index() const noexcept { return colex_index(vertex_span()); }

    friend bool operator==(const Simplex& a, const Simplex& b) noexcept {
        return a.dimension == b.dimension && a.diameter == b.diameter && a.index() == b.index();
    }
};

/// Position of a simplex in the filtration order of its dimension: by diameter,
/// ties broken by descending colex index (reverse colexicographic).
struct SimplexKey {
    scale_t diameter;
    index_t index;
};

inline bool filtration_less(const SimplexKey& a, const SimplexKey& b) noexcept {
    return a.diameter < b.diameter || (a.diameter == b.diameter && a.index > b.index);
}

/// Max pairwise distance among 1-3 strictly increasing vertex indices.
/// Throws InputError on out-of-range or unsorted input.
scale_t simplex_diameter(std::span<const std::uint32_t> vertices, const DistanceMatrix& dm);

enum class TriangleMode {
    Eager, ///< materialize and sort every triangle up to the threshold
    Lazy,  ///< triangles are enumerated per edge during reduction
};

/// Vietoris-Rips filtration up to dimension 2 with a canonical order per dimension.
class Filtration {
public:
    std::size_t n_points() const noexcept { return dm_.size(); }
    scale_t threshold() const noexcept { return threshold_; }
    int max_dim() const noexcept { return max_dim_; }
    bool triangles_materialized() const noexcept { return triangles_materialized_; }

    const DistanceMatrix& distances() const noexcept { return dm_; }
    const std::vector<Simplex>& vertices() const noexcept { return vertices_; }
    const std::vector<Simplex>& edges() const noexcept { return edges_; }
    /// Empty unless built with TriangleMode::Eager.
    const std::vector<Simplex>& triangles() const noexcept { return triangles_; }

    /// Position of edge {i, j} in edges(), or -1 when it lies above the threshold.
    std::int32_t edge_position(std::uint32_t i, std::uint32_t j) const noexcept;

    friend Filtration build_filtration(const DistanceMatrix& dm, int max_dim, scale_t threshold,
                                       TriangleMode mode);

private:
    DistanceMatrix dm_;
    scale_t threshold_ = 0.0;
    int max_dim_ = 2;
    bool triangles_materialized_ = false;
    std::vector<Simplex> vertices_, edges_, triangles_;
    std::vector<std::int32_t> edge_position_; // indexed by colex index of the edge
};

inline constexpr scale_t kNoThreshold = std::numeric_limits<scale_t>::infinity();

/// max_dim in {0, 1, 2}. Simplices of dimension >= 1 with diameter > threshold are dropped.
/// Throws InputError for a negative or NaN threshold, ResourceError when the eager triangle
/// count would exceed the memory budget.
Filtration build_filtration(const DistanceMatrix& dm, int max_dim, scale_t threshold,
                            TriangleMode mode = TriangleMode::Eager);

/// Uses the enclosing radius as threshold.
Filtration build_filtration(const DistanceMatrix& dm, int max_dim = 2);

/// Upper bound on eagerly materialized triangles.
inline constexpr std::size_t kMaxEagerTriangles = std::size_t{1} << 26;

} // namespace topood
