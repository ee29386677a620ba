#include "topood/compare.hpp"

#include "topood/error.hpp"
#include "topood/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace topood {

namespace {

Interval ci_of(const StatisticDistribution& d) { return {d.ci_low, d.ci_high}; }

InputSummary summary_of(const BootstrapResult& r) {
    return {r.source, r.config.master_seed, r.source_points, r.empty_h1_samples};
}

void require_comparable(const BootstrapResult& train, const BootstrapResult& other, std::string_view label) {
    if (!train.config.comparable_with(other.config))
        throw InputError("configuration mismatch between train and " + std::string(label) +
                         " distributions (sample size, iterations, level and policies must agree)");
}

const StatisticDistribution& require_stat(const BootstrapResult& r, StatisticId id, std::string_view label) {
    const StatisticDistribution* d = r.find(id);
    if (!d) throw InputError(std::string(label) + " distributions lack statistic " + id.name());
    if (std::isnan(d->ci_low) || std::isnan(d->ci_high))
        throw InputError(std::string(label) + " statistic " + id.name() + " has no confidence interval");
    return *d;
}

} // namespace

bool overlaps(const Interval& a, const Interval& b) noexcept { return a.low <= b.high && b.low <= a.high; }

double interval_gap(const Interval& a, const Interval& b) noexcept {
    if (overlaps(a, b)) return 0.0;
    return a.low > b.high ? a.low - b.high : b.low - a.high;
}

PairComparison compare_pair(const StatisticDistribution& reference, const StatisticDistribution& candidate) {
    const Interval r = ci_of(reference), c = ci_of(candidate);
    PairComparison out;
    out.overlap = overlaps(r, c);
    out.gap = interval_gap(c, r);
    out.direction = out.overlap ? 0 : (c.low > r.high ? 1 : -1);
    const double pooled = std::sqrt((reference.std * reference.std + candidate.std * candidate.std) / 2.0);
    const double diff = candidate.mean - reference.mean;
    if (std::isnan(pooled) || std::isnan(diff))
        out.smd = std::numeric_limits<double>::quiet_NaN();
    else if (pooled == 0.0)
        out.smd = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    else
        out.smd = diff / pooled;
    return out;
}

const ComparisonEntry* ComparisonReport::find(StatisticId id) const noexcept {
    for (const auto& e : entries)
        if (e.id == id) return &e;
    return nullptr;
}

ComparisonReport compare_distributions(const BootstrapResult& train, const BootstrapResult* test,
                                       const BootstrapResult* ood) {
    if (!test && !ood) throw InputError("comparison needs a test or OOD distribution set besides train");
    if (test) require_comparable(train, *test, "test");
    if (ood) require_comparable(train, *ood, "ood");

    ComparisonReport report;
    report.config = train.config;
    report.train = summary_of(train);
    if (test) report.test = summary_of(*test);
    if (ood) report.ood = summary_of(*ood);
    report.conventions = {
        {"threshold", train.config.threshold.to_string()},
        {"include_zero_h0_bars", train.config.include_zero_h0_bars ? "true" : "false"},
        {"empty_h1", std::string(to_string(train.config.empty_h1))},
        {"ci_method", "percentile"},
        {"quantile_rule", "linear interpolation, q = 1 + (n - 1) p"},
        {"essential_bars", "excluded from statistics"},
        {"decision_rule", "ood indicated iff candidate h0.avg_lifetime interval lies strictly above train"},
    };

    for (const StatisticDistribution& td : train.distributions) {
        const StatisticId id = td.id;
        if ((test && !test->find(id)) || (ood && !ood->find(id))) continue;
        ComparisonEntry e;
        e.id = id;
        const StatisticDistribution& tr = require_stat(train, id, "train");
        e.train = ci_of(tr);
        if (test) {
            const auto& te = require_stat(*test, id, "test");
            e.test = ci_of(te);
            e.test_vs_train = compare_pair(tr, te);
        }
        if (ood) {
            const auto& oo = require_stat(*ood, id, "ood");
            e.ood = ci_of(oo);
            e.ood_vs_train = compare_pair(tr, oo);
            if (test) e.ood_vs_test = compare_pair(require_stat(*test, id, "test"), oo);
        }
        report.entries.push_back(e);
    }
    if (report.entries.empty()) throw InputError("no statistic is shared by all inputs");
    return report;
}

std::string_view to_string(Decision decision) {
    return decision == Decision::OodIndicated ? "ood_indicated" : "indistinguishable";
}

OodVerdict ood_verdict(const ComparisonReport& report) {
    const StatisticId key{0, StatisticKind::AvgLifetime};
    const ComparisonEntry* entry = report.find(key);
    if (!entry) throw InputError("verdict needs the h0.avg_lifetime statistic");

    auto candidate_of = [](const ComparisonEntry& e) { return e.ood ? e.ood : e.test; };

    OodVerdict v;
    const Interval cand = *candidate_of(*entry);
    v.margin = cand.low - entry->train.high;
    v.decision = cand.low > entry->train.high ? Decision::OodIndicated : Decision::Indistinguishable;
    for (const auto& e : report.entries) {
        const Interval c = *candidate_of(e);
        if (c.low > e.train.high) v.evidence.push_back(e.id);
    }
    return v;
}

} // namespace topood
