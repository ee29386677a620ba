#include "topood/bootstrap.hpp"

#include "topood/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <new>

#include <omp.h>

namespace topood {

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Summary values of one bootstrap iteration, by (dimension, kind).
struct IterationSample {
    std::array<DiagramSummary, 2> summary;
};

IterationSample run_iteration(const PointCloud& cloud, const BootstrapConfig& config,
                              const PersistenceConfig& pconfig, std::uint64_t iteration) {
    const auto indices = draw_sample(config.master_seed, iteration, cloud.size(), config.sample_size);
    const PointCloud sample = cloud.subsample(indices);
    const PersistenceDiagram diagram = compute_persistence(sample, pconfig);
    return IterationSample{{summarize(diagram, 0), summarize(diagram, 1)}};
}

PersistenceConfig persistence_config(const BootstrapConfig& config) {
    PersistenceConfig p;
    p.threshold = config.threshold;
    p.include_zero_h0_bars = config.include_zero_h0_bars;
    p.exec = Exec::Serial;
    p.with_h1 = std::any_of(config.statistics.begin(), config.statistics.end(),
                            [](const StatisticId& id) { return id.dimension == 1; }) ||
                config.empty_h1 == EmptyH1Policy::Skip;
    return p;
}

BootstrapResult assemble(const PointCloud& cloud, const BootstrapConfig& config, const PersistenceConfig& pconfig,
                         const std::vector<IterationSample>& samples) {
    BootstrapResult result;
    result.config = config;
    result.role = cloud.role();
    result.source = cloud.source();
    result.source_points = cloud.size();
    result.dim = cloud.dim();
    // without H1 there is nothing to flag
    if (pconfig.with_h1)
        for (const auto& s : samples)
            if (s.summary[1].empty()) ++result.empty_h1_samples;

    for (const StatisticId& id : config.statistics) {
        std::vector<double> values;
        values.reserve(samples.size());
        for (const auto& s : samples) {
            const DiagramSummary& summary = s.summary[static_cast<std::size_t>(id.dimension)];
            if (id.dimension == 1 && summary.empty() && config.empty_h1 == EmptyH1Policy::Skip) continue;
            values.push_back(statistic_value(summary, id.kind));
        }
        result.distributions.push_back(make_distribution(id, std::move(values), config.ci_level));
    }
    return result;
}

} // namespace

std::string_view to_string(EmptyH1Policy policy) {
    return policy == EmptyH1Policy::Zeros ? "zeros" : "skip";
}

EmptyH1Policy parse_empty_h1_policy(std::string_view text) {
    if (text == "zeros") return EmptyH1Policy::Zeros;
    if (text == "skip") return EmptyH1Policy::Skip;
    throw InputError("empty-H1 policy must be 'zeros' or 'skip', got '" + std::string(text) + "'");
}

std::vector<StatisticId> all_statistics() {
    std::vector<StatisticId> out;
    for (int dim : {0, 1})
        for (StatisticKind k : kAllStatisticKinds) out.push_back(StatisticId{dim, k});
    return out;
}

void BootstrapConfig::validate() const {
    if (sample_size < 1) throw InputError("sample size must be at least 1");
    if (iterations < 1) throw InputError("iteration count must be at least 1");
    if (!(ci_level > 0.0 && ci_level <= 1.0)) throw InputError("confidence level must lie in (0, 1]");
    if (statistics.empty()) throw InputError("no statistics selected");
    if (threshold.kind == ThresholdPolicy::Kind::Fixed && !(threshold.value >= 0.0))
        throw InputError("fixed threshold must be non-negative");
}

bool BootstrapConfig::comparable_with(const BootstrapConfig& o) const {
    return sample_size == o.sample_size && iterations == o.iterations && ci_level == o.ci_level &&
           threshold == o.threshold && include_zero_h0_bars == o.include_zero_h0_bars &&
           empty_h1 == o.empty_h1;
}

const StatisticDistribution* BootstrapResult::find(StatisticId id) const noexcept {
    for (const auto& d : distributions)
        if (d.id == id) return &d;
    return nullptr;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next() noexcept { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection.
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t floor = (0 - bound) % bound;
        while (low < floor) {
            m = static_cast<unsigned __int128>(next()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::vector<std::size_t> draw_sample(std::uint64_t master_seed, std::uint64_t iteration,
                                     std::size_t population, std::size_t n) {
    if (population == 0) throw InputError("cannot sample from an empty population");
    CounterRng rng(master_seed, iteration);
    std::vector<std::size_t> out(n);
    for (auto& idx : out) idx = static_cast<std::size_t>(rng.below(population));
    return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw InputError("quantile of an empty sample");
    const double pos = static_cast<double>(sorted.size() - 1) * p; // 0-based form of 1 + (n-1)p
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::pair<double, double> percentile_ci(std::span<const double> values, double level) {
    if (values.empty()) throw InputError("confidence interval of an empty sample");
    if (!(level > 0.0 && level <= 1.0)) throw InputError("confidence level must lie in (0, 1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double tail = (1.0 - level) / 2.0;
    return {quantile_sorted(sorted, tail), quantile_sorted(sorted, 1.0 - tail)};
}

StatisticDistribution make_distribution(StatisticId id, std::vector<double> values, double level) {
    StatisticDistribution d;
    d.id = id;
    d.values = std::move(values);
    if (d.values.empty()) {
        d.ci_low = d.ci_high = d.mean = d.std = std::numeric_limits<double>::quiet_NaN();
        return d;
    }
    std::tie(d.ci_low, d.ci_high) = percentile_ci(d.values, level);
    double sum = 0.0;
    for (double v : d.values) sum += v;
    d.mean = sum / static_cast<double>(d.values.size());
    if (d.values.size() > 1) {
        double ss = 0.0;
        for (double v : d.values) ss += (v - d.mean) * (v - d.mean);
        d.std = std::sqrt(ss / static_cast<double>(d.values.size() - 1));
    }
    return d;
}

BootstrapResult run_bootstrap_serial(const PointCloud& cloud, const BootstrapConfig& config,
                                     const RunOptions& options) {
    config.validate();
    const PersistenceConfig pconfig = persistence_config(config);
    std::vector<IterationSample> samples;
    try {
        samples.resize(config.iterations);
        for (std::size_t i = 0; i < config.iterations; ++i) {
            if (options.cancel && options.cancel->load(std::memory_order_relaxed)) throw Cancelled();
            samples[i] = run_iteration(cloud, config, pconfig, i);
            if (options.progress && ((i + 1) % options.progress_every == 0 || i + 1 == config.iterations))
                options.progress(i + 1, config.iterations);
        }
    } catch (const std::bad_alloc&) {
        throw ResourceError("out of memory during bootstrap");
    }
    return assemble(cloud, config, pconfig, samples);
}

BootstrapResult run_bootstrap(const PointCloud& cloud, const BootstrapConfig& config, const RunOptions& options) {
    config.validate();
    const PersistenceConfig pconfig = persistence_config(config);
    std::vector<IterationSample> samples;
    try {
        samples.resize(config.iterations);
    } catch (const std::bad_alloc&) {
        throw ResourceError("out of memory allocating bootstrap results");
    }

    const auto total = static_cast<std::ptrdiff_t>(config.iterations);
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
    std::atomic<std::size_t> done{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::size_t next_report = options.progress_every; // touched by thread 0 only

#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < total; ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        if (options.cancel && options.cancel->load(std::memory_order_relaxed)) {
            failed.store(true);
            continue;
        }
        try {
            samples[static_cast<std::size_t>(i)] =
                run_iteration(cloud, config, pconfig, static_cast<std::uint64_t>(i));
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed.store(true);
            continue;
        }
        const std::size_t now = done.fetch_add(1, std::memory_order_relaxed) + 1;
        if (options.progress && omp_get_thread_num() == 0 && now >= next_report) {
            options.progress(now, config.iterations);
            next_report = now + options.progress_every;
        }
    }

    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const std::bad_alloc&) {
            throw ResourceError("out of memory during bootstrap");
        }
    }
    if (failed.load()) throw Cancelled();
    if (options.progress) options.progress(config.iterations, config.iterations);
    return assemble(cloud, config, pconfig, samples);
}

} // namespace topood
