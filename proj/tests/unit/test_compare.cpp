#include "test_helpers.hpp"

#include "topood/compare.hpp"
#include "topood/error.hpp"
#include "topood/synth.hpp"

#include <doctest.h>

#include <cmath>

using namespace topood;

namespace {

const StatisticId kH0Life{0, StatisticKind::AvgLifetime};
const StatisticId kH0Max{0, StatisticKind::MaxLifetime};

StatisticDistribution ci_only(StatisticId id, double lo, double hi) {
    StatisticDistribution d;
    d.id = id;
    d.ci_low = lo;
    d.ci_high = hi;
    d.mean = d.std = std::nan("");
    return d;
}

BootstrapResult intervals(std::vector<StatisticDistribution> ds, Role role) {
    BootstrapResult r;
    r.config.sample_size = 150;
    r.config.iterations = 50'000;
    r.role = role;
    r.distributions = std::move(ds);
    for (auto& d : r.distributions) r.config.statistics.push_back(d.id);
    return r;
}

BootstrapResult h0_only(double lo, double hi, Role role) { return intervals({ci_only(kH0Life, lo, hi)}, role); }

} // namespace

TEST_CASE("interval relations") {
    CHECK(overlaps({0, 1}, {1, 2}));
    CHECK(overlaps({0, 3}, {1, 2}));
    CHECK_FALSE(overlaps({0, 1}, {1.5, 2}));
    CHECK(interval_gap({0, 1}, {1, 2}) == 0.0);
    CHECK(interval_gap({0, 1}, {1.5, 2}) == 0.5);
    CHECK(interval_gap({1.5, 2}, {0, 1}) == 0.5);
}

TEST_CASE("CIFAR-style train vs OOD gap") {
    const auto train = h0_only(1.452, 1.586, Role::Train);
    const auto ood = h0_only(2.272, 2.460, Role::Ood);
    const auto report = compare_distributions(train, nullptr, &ood);
    const auto* e = report.find(kH0Life);
    REQUIRE(e);
    REQUIRE(e->ood_vs_train);
    CHECK_FALSE(e->ood_vs_train->overlap);
    CHECK(e->ood_vs_train->gap == doctest::Approx(0.686).epsilon(1e-12));
    CHECK(e->ood_vs_train->direction == 1);
    CHECK(std::isnan(e->ood_vs_train->smd));
    CHECK_FALSE(e->test);
}

TEST_CASE("identical distributions overlap fully") {
    const auto cloud = testing::random_cloud(30, 3, 1);
    BootstrapConfig cfg;
    cfg.sample_size = 10;
    cfg.iterations = 40;
    const auto r = run_bootstrap(cloud, cfg);
    const auto report = compare_distributions(r, &r, nullptr);
    for (const auto& e : report.entries) {
        CHECK(e.test_vs_train->overlap);
        CHECK(e.test_vs_train->gap == 0.0);
        CHECK(e.test_vs_train->direction == 0);
        CHECK(e.test_vs_train->smd == 0.0);
        CHECK(*e.test == e.train);
    }
}

TEST_CASE("verdict on MNIST-style intervals") {
    const auto train = h0_only(1.000, 1.118, Role::Train);
    const auto test = h0_only(0.996, 1.113, Role::Test);
    const auto ood = h0_only(1.303, 1.460, Role::Ood);
    const auto report = compare_distributions(train, &test, &ood);
    const auto v = ood_verdict(report);
    CHECK(v.decision == Decision::OodIndicated);
    CHECK(v.margin == doctest::Approx(0.185).epsilon(1e-12));
    REQUIRE(v.evidence.size() == 1);
    CHECK(v.evidence[0] == kH0Life);

    const auto* e = report.find(kH0Life);
    CHECK(e->test_vs_train->overlap);
    CHECK(e->ood_vs_test->direction == 1);
}

TEST_CASE("candidate inside train is indistinguishable") {
    const auto train = h0_only(1.0, 2.0, Role::Train);
    const auto ood = h0_only(1.2, 1.8, Role::Ood);
    const auto v = ood_verdict(compare_distributions(train, nullptr, &ood));
    CHECK(v.decision == Decision::Indistinguishable);
    CHECK(v.evidence.empty());
}

TEST_CASE("candidate below train is indistinguishable") {
    const auto train = h0_only(2.0, 3.0, Role::Train);
    const auto ood = h0_only(0.5, 1.0, Role::Ood);
    const auto report = compare_distributions(train, nullptr, &ood);
    CHECK(report.find(kH0Life)->ood_vs_train->direction == -1);
    CHECK(report.find(kH0Life)->ood_vs_train->gap == 1.0);
    const auto v = ood_verdict(report);
    CHECK(v.decision == Decision::Indistinguishable);
    CHECK(v.margin == -2.5);
}

TEST_CASE("touching intervals are not separated") {
    const auto train = h0_only(1.0, 2.0, Role::Train);
    const auto ood = h0_only(2.0, 3.0, Role::Ood);
    CHECK(ood_verdict(compare_distributions(train, nullptr, &ood)).decision == Decision::Indistinguishable);
}

TEST_CASE("test stands in when OOD is absent") {
    const auto train = h0_only(1.0, 2.0, Role::Train);
    const auto test = h0_only(2.5, 3.0, Role::Test);
    const auto v = ood_verdict(compare_distributions(train, &test, nullptr));
    CHECK(v.decision == Decision::OodIndicated);
    CHECK(v.margin == 0.5);
}

TEST_CASE("max lifetime alone never decides") {
    const auto train = intervals({ci_only(kH0Life, 1.0, 2.0), ci_only(kH0Max, 1.0, 2.0)}, Role::Train);
    const auto ood = intervals({ci_only(kH0Life, 1.5, 2.5), ci_only(kH0Max, 5.0, 6.0)}, Role::Ood);
    const auto v = ood_verdict(compare_distributions(train, nullptr, &ood));
    CHECK(v.decision == Decision::Indistinguishable);
    REQUIRE(v.evidence.size() == 1);
    CHECK(v.evidence[0] == kH0Max);
}

TEST_CASE("comparison errors") {
    const auto train = h0_only(1.0, 2.0, Role::Train);
    CHECK_THROWS_AS(compare_distributions(train, nullptr, nullptr), InputError);

    auto other = h0_only(1.0, 2.0, Role::Ood);
    other.config.sample_size = 50;
    CHECK_THROWS_AS(compare_distributions(train, nullptr, &other), InputError);

    other = h0_only(1.0, 2.0, Role::Ood);
    other.config.iterations = 10;
    CHECK_THROWS_AS(compare_distributions(train, nullptr, &other), InputError);

    other = h0_only(1.0, 2.0, Role::Ood);
    other.config.master_seed = 12345;
    CHECK_NOTHROW(compare_distributions(train, nullptr, &other));

    const auto max_only = intervals({ci_only(kH0Max, 1.0, 2.0)}, Role::Ood);
    CHECK_THROWS_AS(compare_distributions(train, nullptr, &max_only), InputError);

    const auto no_h0 = intervals({ci_only(kH0Max, 1.0, 2.0)}, Role::Train);
    const auto report = compare_distributions(no_h0, nullptr, &no_h0);
    CHECK_THROWS_AS(ood_verdict(report), InputError);

    const auto nan = h0_only(std::nan(""), std::nan(""), Role::Ood);
    CHECK_THROWS_AS(compare_distributions(train, nullptr, &nan), InputError);
}

TEST_CASE("verdict is invariant under scaling") {
    for (double c : {0.001, 0.5, 3.0, 1000.0}) {
        const auto train = h0_only(1.000 * c, 1.118 * c, Role::Train);
        const auto ood = h0_only(1.303 * c, 1.460 * c, Role::Ood);
        const auto v = ood_verdict(compare_distributions(train, nullptr, &ood));
        CHECK(v.decision == Decision::OodIndicated);
        CHECK(v.margin == doctest::Approx(0.185 * c).epsilon(1e-9));
    }
}

TEST_CASE("swapping train and OOD flips the side of the gap") {
    const auto a = h0_only(1.452, 1.586, Role::Train);
    const auto b = h0_only(2.272, 2.460, Role::Ood);
    const auto forward = compare_distributions(a, nullptr, &b).find(kH0Life)->ood_vs_train;
    const auto backward = compare_distributions(b, nullptr, &a).find(kH0Life)->ood_vs_train;
    CHECK(forward->direction == 1);
    CHECK(backward->direction == -1);
    CHECK(forward->gap == backward->gap);
    CHECK(ood_verdict(compare_distributions(b, nullptr, &a)).decision == Decision::Indistinguishable);
}

TEST_CASE("standardized mean difference") {
    StatisticDistribution r = ci_only(kH0Life, 0, 1), c = ci_only(kH0Life, 0, 1);
    r.mean = 1.0;
    r.std = 1.0;
    c.mean = 3.0;
    c.std = 1.0;
    CHECK(compare_pair(r, c).smd == 2.0);
    r.std = c.std = 0.0;
    CHECK(std::isinf(compare_pair(r, c).smd));
    c.mean = 1.0;
    CHECK(compare_pair(r, c).smd == 0.0);
}

TEST_CASE("clusters against a cube, small pipeline") {
    SynthSpec id;
    id.kind = SynthKind::Clusters;
    id.k = 3;
    id.count = 40;
    id.radius = 0.5;
    id.dim = 8;
    id.seed = 1;
    id.role = Role::Train;
    SynthSpec cube = id;
    cube.kind = SynthKind::UniformCube;
    cube.count = 120;
    cube.seed = 2;
    cube.role = Role::Ood;

    BootstrapConfig cfg;
    cfg.sample_size = 30;
    cfg.iterations = 300;
    cfg.master_seed = 7;
    const auto train = run_bootstrap(generate(id), cfg);
    const auto ood = run_bootstrap(generate(cube), cfg);
    const auto report = compare_distributions(train, nullptr, &ood);
    const auto v = ood_verdict(report);
    CHECK(v.decision == Decision::OodIndicated);
    CHECK(v.margin > 0.0);
    CHECK(report.find(kH0Life)->ood_vs_train->smd > 0.0);
    CHECK(report.conventions.at("threshold") == "enclosing");
}
