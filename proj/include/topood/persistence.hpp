#pragma once

#include "topood/pointcloud.hpp"
#include "topood/rips.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace topood {

struct Bar {
    int dimension = 0;
    scale_t birth = 0.0;
    scale_t death = 0.0; ///< +inf for essential classes

    bool essential() const noexcept { return std::isinf(death); }
    scale_t lifetime() const noexcept { return death - birth; }

    friend bool operator==(const Bar&, const Bar&) = default;
    friend auto operator<=>(const Bar&, const Bar&) = default;
};

/// How the filtration threshold is chosen for a point cloud.
struct ThresholdPolicy {
    enum class Kind { EnclosingRadius, Fixed } kind = Kind::EnclosingRadius;
    scale_t value = 0.0; ///< used only for Kind::Fixed

    static ThresholdPolicy enclosing() { return {}; }
    static ThresholdPolicy fixed(scale_t v) { return {Kind::Fixed, v}; }

    scale_t resolve(const DistanceMatrix& dm) const;
    /// "enclosing" or the fixed value in shortest round-trip form.
    std::string to_string() const;
    /// Inverse of to_string(). Throws InputError.
    static ThresholdPolicy parse(const std::string& text);

    friend bool operator==(const ThresholdPolicy&, const ThresholdPolicy&) = default;
};

struct PersistenceConfig {
    ThresholdPolicy threshold;
    /// Keep [0, 0) bars in H0 that come from duplicate points.
    bool include_zero_h0_bars = true;
    /// Pair a column whose leading coface is still unclaimed (apparent and emergent pairs)
    /// without materializing it. The diagram is identical either way.
    bool use_apparent_pairs = true;
    /// When false only H0 is computed and no triangles are touched.
    bool with_h1 = true;
    /// Distance kernel; bootstrap workers use Exec::Serial.
    Exec exec = Exec::Parallel;
};

struct PersistenceDiagram {
    std::size_t n_points = 0;
    scale_t threshold = 0.0;
    std::vector<Bar> h0; ///< sorted ascending
    std::vector<Bar> h1; ///< sorted ascending; zero-persistence pairs never present

    const std::vector<Bar>& bars(int dimension) const;
};

struct BettiVector {
    std::size_t beta0 = 0;
    std::size_t beta1 = 0;
    friend bool operator==(const BettiVector&, const BettiVector&) = default;
};

/// H0 by union-find over edges in filtration order (elder rule; every class is born at 0).
/// Finite deaths are exactly the minimum spanning forest edge weights below the threshold.
PersistenceDiagram compute_h0(const Filtration& filtration, bool include_zero_bars = true);

/// Unthresholded H0; always exactly one essential bar.
PersistenceDiagram compute_h0(const DistanceMatrix& dm, bool include_zero_bars = true);

/// H1 by reduction of the edge-to-triangle coboundary matrix over Z/2, with clearing of the
/// edges already paired in H0. Output equals the homology barcode. Classes alive at the
/// threshold are reported with death = +inf.
PersistenceDiagram compute_h1(const Filtration& filtration, bool use_apparent_pairs = true);

PersistenceDiagram compute_persistence(const DistanceMatrix& dm, const PersistenceConfig& config = {});
PersistenceDiagram compute_persistence(const PointCloud& cloud, const PersistenceConfig& config = {});

/// beta_k = #{dimension-k bars with birth <= eps < death}.
/// Throws InputError when eps is negative or not below the diagram threshold.
BettiVector betti_at_scale(const PersistenceDiagram& diagram, scale_t eps);

} // namespace topood
