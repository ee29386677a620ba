#pragma once

#include "topood/persistence.hpp"
#include "topood/pointcloud.hpp"
#include "topood/summaries.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace topood {

/// What an H1 statistic records for a sample whose H1 diagram has no finite bars.
enum class EmptyH1Policy { Zeros, Skip };

std::string_view to_string(EmptyH1Policy policy);
EmptyH1Policy parse_empty_h1_policy(std::string_view text);

std::vector<StatisticId> all_statistics();

struct BootstrapConfig {
    std::size_t sample_size = 150;
    std::size_t iterations = 50'000;
    double ci_level = 0.95;
    std::uint64_t master_seed = 0;
    ThresholdPolicy threshold;
    bool include_zero_h0_bars = true;
    EmptyH1Policy empty_h1 = EmptyH1Policy::Zeros;
    std::vector<StatisticId> statistics = all_statistics();

    /// Throws InputError when a field is out of range.
    void validate() const;

    /// Equality of every field that shapes the distributions, seed excluded.
    bool comparable_with(const BootstrapConfig& other) const;

    friend bool operator==(const BootstrapConfig&, const BootstrapConfig&) = default;
};

struct StatisticDistribution {
    StatisticId id;
    std::vector<double> values; ///< one per contributing iteration, in iteration order
    double ci_low = 0.0;
    double ci_high = 0.0;
    double mean = 0.0;
    double std = 0.0; ///< sample standard deviation (n - 1); 0 for a single value
};

/// Builds a distribution from raw values: percentile CI at `level`, mean, std.
/// Empty input yields NaN summaries.
StatisticDistribution make_distribution(StatisticId id, std::vector<double> values, double level);

struct BootstrapResult {
    BootstrapConfig config;
    Role role = Role::Unlabeled;
    std::string source;
    std::size_t source_points = 0;
    std::size_t dim = 0;
    /// Iterations whose H1 diagram had no finite bars.
    std::size_t empty_h1_samples = 0;
    std::vector<StatisticDistribution> distributions;

    /// nullptr when the statistic was not selected.
    const StatisticDistribution* find(StatisticId id) const noexcept;
};

struct RunOptions {
    /// Worker count; 0 uses the OpenMP default.
    int threads = 0;
    /// Called from one thread with (completed, total) iteration counts.
    std::function<void(std::size_t, std::size_t)> progress;
    std::size_t progress_every = 1000;
    /// Polled between iterations; when set the run throws Cancelled.
    const std::atomic<bool>* cancel = nullptr;
};

/// Counter-based stream keyed by (seed, stream id). Output depends only on the key and
/// the draw count, never on which thread calls it.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next() noexcept;
    /// Unbiased integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// n indices drawn uniformly with replacement from [0, population), keyed by (seed, iteration).
std::vector<std::size_t> draw_sample(std::uint64_t master_seed, std::uint64_t iteration,
                                     std::size_t population, std::size_t n);

/// Subsample, persistence, summaries for each of M iterations, in parallel.
/// Bitwise identical to run_bootstrap_serial for any thread count.
BootstrapResult run_bootstrap(const PointCloud& cloud, const BootstrapConfig& config,
                              const RunOptions& options = {});

/// Single-threaded reference path.
BootstrapResult run_bootstrap_serial(const PointCloud& cloud, const BootstrapConfig& config,
                                     const RunOptions& options = {});

/// Linear interpolation between order statistics, 1-based position q = 1 + (n - 1) p.
double quantile_sorted(std::span<const double> sorted, double p);

/// Percentile interval (quantile((1-level)/2), quantile(1-(1-level)/2)); level in (0, 1].
/// Throws InputError on empty input or bad level.
std::pair<double, double> percentile_ci(std::span<const double> values, double level);

} // namespace topood
