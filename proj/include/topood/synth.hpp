#pragma once

#include "topood/pointcloud.hpp"

#include <cstdint>
#include <string_view>

namespace topood {

enum class SynthKind { Circle, Clusters, UniformCube, Hexagon, Square, Line };

std::string_view to_string(SynthKind kind);
SynthKind parse_synth_kind(std::string_view text);

/// Parameters of a synthetic cloud. Field meaning per kind:
///   Circle       count points at uniform random angles on a circle of `radius` (first two axes)
///   Clusters     k clusters of `count` points, each uniform in a ball of `radius` around
///                (separation / sqrt 2) * e_c, so cluster centres are exactly `separation` apart
///   UniformCube  count points uniform in [0, separation / sqrt 2]^dim, the cube whose
///                corners include every Clusters centre
///   Hexagon      6 vertices of a regular hexagon of circumradius `radius`
///   Square       4 corners of an axis-aligned square of side `radius`
///   Line         count points on the first axis at radius * i (i + 1) / 2
/// Noise: every point is displaced by (sigma / sqrt dim) * N(0, I), clipped to norm 3 sigma.
struct SynthSpec {
    SynthKind kind = SynthKind::Clusters;
    std::size_t count = 20;
    std::size_t k = 3;
    double radius = 1.0;
    double separation = 10.0;
    double sigma = 0.0;
    std::size_t dim = 2;
    std::uint64_t seed = 0;
    Role role = Role::Unlabeled;

    /// Throws InputError.
    void validate() const;
};

/// Deterministic for a fixed spec.
PointCloud generate(const SynthSpec& spec);

} // namespace topood
