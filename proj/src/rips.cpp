#include "topood/rips.hpp"

#include "topood/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace topood {

namespace {

index_t choose2(index_t n) noexcept { return n * (n - 1) / 2; }
index_t choose3(index_t n) noexcept { return n * (n - 1) * (n - 2) / 6; }

bool key_less(const Simplex& a, const Simplex& b) noexcept {
    return filtration_less({a.diameter, a.index()}, {b.diameter, b.index()});
}

} // namespace

index_t colex_index(std::span<const std::uint32_t> v) noexcept {
    switch (v.size()) {
    case 1: return v[0];
    case 2: return v[0] + choose2(v[1]);
    case 3: return v[0] + choose2(v[1]) + choose3(v[2]);
    default: return -1;
    }
}

scale_t simplex_diameter(std::span<const std::uint32_t> vertices, const DistanceMatrix& dm) {
    if (vertices.empty() || vertices.size() > 3)
        throw InputError("simplex must have 1 to 3 vertices, got " + std::to_string(vertices.size()));
    for (std::size_t a = 0; a < vertices.size(); ++a) {
        if (vertices[a] >= dm.size())
            throw InputError("vertex index " + std::to_string(vertices[a]) + " out of range for " +
                             std::to_string(dm.size()) + " points");
        if (a > 0 && vertices[a - 1] >= vertices[a])
            throw InputError("simplex vertices must be strictly increasing");
    }
    scale_t diam = 0.0;
    for (std::size_t a = 0; a < vertices.size(); ++a)
        for (std::size_t b = a + 1; b < vertices.size(); ++b)
            diam = std::max(diam, dm(vertices[a], vertices[b]));
    return diam;
}

std::int32_t Filtration::edge_position(std::uint32_t i, std::uint32_t j) const noexcept {
    if (i == j || i >= n_points() || j >= n_points() || edge_position_.empty()) return -1;
    if (i > j) std::swap(i, j);
    return edge_position_[static_cast<std::size_t>(i + choose2(j))];
}

Filtration build_filtration(const DistanceMatrix& dm, int max_dim, scale_t threshold, TriangleMode mode) {
    if (std::isnan(threshold) || threshold < 0.0)
        throw InputError("filtration threshold must be non-negative");
    if (max_dim < 0 || max_dim > 2) throw InputError("max_dim must be 0, 1 or 2");

    const auto n = static_cast<std::uint32_t>(dm.size());
    Filtration f;
    f.dm_ = dm;
    f.threshold_ = threshold;
    f.max_dim_ = max_dim;

    f.vertices_.reserve(n);
    for (std::uint32_t v = n; v-- > 0;) f.vertices_.push_back(Simplex{{v, 0, 0}, 0, 0.0});

    if (max_dim >= 1 && n >= 2) {
        for (std::uint32_t j = 1; j < n; ++j)
            for (std::uint32_t i = 0; i < j; ++i)
                if (dm(i, j) <= threshold) f.edges_.push_back(Simplex{{i, j, 0}, 1, dm(i, j)});
        std::sort(f.edges_.begin(), f.edges_.end(), key_less);
        f.edge_position_.assign(static_cast<std::size_t>(choose2(n)), -1);
        for (std::size_t p = 0; p < f.edges_.size(); ++p)
            f.edge_position_[static_cast<std::size_t>(f.edges_[p].index())] = static_cast<std::int32_t>(p);
    }

    if (max_dim >= 2 && mode == TriangleMode::Eager && n >= 3) {
        if (static_cast<std::size_t>(choose3(n)) > kMaxEagerTriangles)
            throw ResourceError("eager triangle enumeration for " + std::to_string(n) +
                                " points exceeds the budget of " + std::to_string(kMaxEagerTriangles));
        for (std::uint32_t k = 2; k < n; ++k)
            for (std::uint32_t j = 1; j < k; ++j) {
                if (dm(j, k) > threshold) continue;
                for (std::uint32_t i = 0; i < j; ++i) {
                    const scale_t diam = std::max({dm(i, j), dm(i, k), dm(j, k)});
                    if (diam <= threshold) f.triangles_.push_back(Simplex{{i, j, k}, 2, diam});
                }
            }
        std::sort(f.triangles_.begin(), f.triangles_.end(), key_less);
        f.triangles_materialized_ = true;
    }
    return f;
}

Filtration build_filtration(const DistanceMatrix& dm, int max_dim) {
    return build_filtration(dm, max_dim, enclosing_radius(dm));
}

} // namespace topood
