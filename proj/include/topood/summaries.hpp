#pragma once

#include "topood/persistence.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace topood {

/// The four lifetime statistics of one homology dimension, over finite bars only.
/// An empty bar set gives all zeros.
struct DiagramSummary {
    int dimension = 0;
    double avg_lifetime = 0.0;
    double max_lifetime = 0.0;
    double avg_birth = 0.0;
    double avg_death = 0.0;
    std::size_t n_finite_bars = 0;
    std::size_t n_essential_bars = 0;

    bool empty() const noexcept { return n_finite_bars == 0; }
};

DiagramSummary summarize(const PersistenceDiagram& diagram, int dimension);

enum class StatisticKind { AvgLifetime, MaxLifetime, AvgBirth, AvgDeath };

inline constexpr std::array<StatisticKind, 4> kAllStatisticKinds{
    StatisticKind::AvgLifetime, StatisticKind::MaxLifetime, StatisticKind::AvgBirth, StatisticKind::AvgDeath};

/// A (homology dimension, statistic) pair, e.g. "h0.avg_lifetime".
struct StatisticId {
    int dimension = 0;
    StatisticKind kind = StatisticKind::AvgLifetime;

    std::string name() const;
    static StatisticId parse(std::string_view name);

    friend bool operator==(const StatisticId&, const StatisticId&) = default;
    friend auto operator<=>(const StatisticId&, const StatisticId&) = default;
};

std::string_view to_string(StatisticKind kind);

double statistic_value(const DiagramSummary& summary, StatisticKind kind) noexcept;

} // namespace topood
