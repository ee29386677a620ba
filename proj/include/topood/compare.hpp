#pragma once

#include "topood/bootstrap.hpp"
#include "topood/summaries.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace topood {

struct Interval {
    double low = 0.0;
    double high = 0.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

bool overlaps(const Interval& a, const Interval& b) noexcept;
/// Distance between two disjoint intervals; 0 when they intersect.
double interval_gap(const Interval& a, const Interval& b) noexcept;

/// Candidate interval relative to a reference interval.
struct PairComparison {
    bool overlap = true;
    double gap = 0.0;
    int direction = 0;  ///< +1 candidate strictly above, -1 strictly below, 0 overlapping
    double smd = 0.0;   ///< (mean_c - mean_r) / sqrt((sd_c^2 + sd_r^2) / 2); NaN without raw moments
};

PairComparison compare_pair(const StatisticDistribution& reference, const StatisticDistribution& candidate);

struct ComparisonEntry {
    StatisticId id;
    Interval train;
    std::optional<Interval> test;
    std::optional<Interval> ood;
    std::optional<PairComparison> test_vs_train;
    std::optional<PairComparison> ood_vs_train;
    std::optional<PairComparison> ood_vs_test;
};

struct InputSummary {
    std::string source;
    std::uint64_t seed = 0;
    std::size_t source_points = 0;
    std::size_t empty_h1_samples = 0;
};

struct ComparisonReport {
    BootstrapConfig config;
    std::map<std::string, std::string> conventions;
    InputSummary train;
    std::optional<InputSummary> test;
    std::optional<InputSummary> ood;
    std::vector<ComparisonEntry> entries;

    const ComparisonEntry* find(StatisticId id) const noexcept;
};

/// Train is required, plus at least one of test / ood. All inputs must share the bootstrap
/// configuration (seed excepted). Throws InputError otherwise.
ComparisonReport compare_distributions(const BootstrapResult& train, const BootstrapResult* test,
                                       const BootstrapResult* ood);

enum class Decision { OodIndicated, Indistinguishable };

std::string_view to_string(Decision decision);

struct OodVerdict {
    Decision decision = Decision::Indistinguishable;
    /// Statistics whose candidate interval lies strictly above the train interval.
    std::vector<StatisticId> evidence;
    /// candidate.low - train.high for H0 average lifetime; the gap when positive.
    double margin = 0.0;
};

/// OOD is indicated iff the candidate (OOD, else Test) H0 average-lifetime interval lies
/// strictly above the train interval. Other statistics are corroborating evidence only.
OodVerdict ood_verdict(const ComparisonReport& report);

} // namespace topood
