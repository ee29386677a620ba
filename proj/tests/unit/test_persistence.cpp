#include "test_helpers.hpp"

#include "topood/error.hpp"
#include "topood/persistence.hpp"
#include "topood/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

using namespace topood;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PointCloud hexagon() {
    SynthSpec s;
    s.kind = SynthKind::Hexagon;
    return generate(s);
}

PointCloud square() { return testing::make_cloud({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

} // namespace

TEST_CASE("H0 of three collinear points") {
    const auto d = compute_h0(pairwise_distances(testing::make_cloud({{0}, {1}, {3}})));
    REQUIRE(d.h0.size() == 3);
    CHECK(d.h0[0] == Bar{0, 0.0, 1.0});
    CHECK(d.h0[1] == Bar{0, 0.0, 2.0});
    CHECK(d.h0[2] == Bar{0, 0.0, kInf});
}

TEST_CASE("H0 of identical points") {
    const auto cloud = testing::make_cloud({{2, 2}, {2, 2}, {2, 2}, {2, 2}, {2, 2}});
    const auto d = compute_h0(pairwise_distances(cloud));
    REQUIRE(d.h0.size() == 5);
    CHECK(std::count(d.h0.begin(), d.h0.end(), Bar{0, 0.0, 0.0}) == 4);
    CHECK(d.h0.back().essential());

    const auto without = compute_h0(pairwise_distances(cloud), false);
    REQUIRE(without.h0.size() == 1);
    CHECK(without.h0[0].essential());
}

TEST_CASE("H0 of two separated clusters") {
    SynthSpec s;
    s.kind = SynthKind::Clusters;
    s.k = 2;
    s.count = 5;
    s.radius = 0.04;
    s.separation = 10.0;
    s.dim = 3;
    s.seed = 12;
    const auto cloud = generate(s);
    const auto d = compute_h0(pairwise_distances(cloud));
    const auto deaths = testing::finite_h0_deaths(d);
    REQUIRE(deaths.size() == 9);
    for (std::size_t i = 0; i < 8; ++i) CHECK(deaths[i] < 0.1);
    CHECK(deaths[8] == doctest::Approx(10.0).epsilon(0.02));
    const auto mst = oracle::kruskal_mst_weights(testing::to_matrix(pairwise_distances(cloud)));
    CHECK(deaths == mst);
}

TEST_CASE("H1 analytic fixtures") {
    SUBCASE("unit square") {
        const auto d = compute_persistence(square());
        REQUIRE(d.h1.size() == 1);
        CHECK(d.h1[0].birth == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.h1[0].death == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("regular hexagon") {
        const auto d = compute_persistence(hexagon());
        REQUIRE(d.h1.size() == 1);
        CHECK(d.h1[0].birth == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.h1[0].death == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
        REQUIRE(d.h0.size() == 6);
        for (std::size_t i = 0; i < 5; ++i) CHECK(d.h0[i].death == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.h0[5].essential());
    }
    SUBCASE("equilateral triangle has no loop") {
        const auto d = compute_persistence(testing::make_cloud({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}));
        CHECK(d.h1.empty());
    }
    SUBCASE("compute_h1 on an eager filtration") {
        const auto f = build_filtration(pairwise_distances(square()));
        const auto d = compute_h1(f);
        REQUIRE(d.h1.size() == 1);
        CHECK(d.h0.empty());
        CHECK_THROWS_AS(compute_h1(build_filtration(pairwise_distances(square()), 1)), InputError);
    }
}

TEST_CASE("single point") {
    const auto d = compute_persistence(testing::make_cloud({{1, 2, 3}}));
    REQUIRE(d.h0.size() == 1);
    CHECK(d.h0[0].essential());
    CHECK(d.h1.empty());
}

TEST_CASE("oracle equivalence on random small clouds") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t n = 4 + seed % 9;
        const std::size_t dim = std::array<std::size_t, 3>{2, 8, 16}[seed % 3];
        const auto dm = pairwise_distances(testing::random_cloud(n, dim, 1000 + seed));
        const auto expected = oracle::naive_rips_persistence(testing::to_matrix(dm), enclosing_radius(dm));
        for (bool apparent : {true, false}) {
            PersistenceConfig cfg;
            cfg.use_apparent_pairs = apparent;
            CHECK(testing::engine_bars(compute_persistence(dm, cfg)) == expected);
        }
        ++checked;
    }
    CHECK(checked == 60);
}

TEST_CASE("oracle equivalence on clouds with duplicates and ties") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        // integer lattice points: many equal distances and repeated points
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> coord(0, 2);
        std::vector<double> xs(10 * 2);
        for (auto& x : xs) x = coord(rng);
        const PointCloud cloud(10, 2, xs);
        const auto dm = pairwise_distances(cloud);
        const auto expected = oracle::naive_rips_persistence(testing::to_matrix(dm), enclosing_radius(dm));
        CHECK(testing::engine_bars(compute_persistence(dm)) == expected);
    }
}

TEST_CASE("150-point embedding sample agrees with the oracle on a 12-point subsample") {
    const auto cloud = testing::random_cloud(150, 512, 2024);
    const auto full = compute_persistence(cloud);
    CHECK(full.h0.size() == 150);
    CHECK(std::count_if(full.h0.begin(), full.h0.end(), [](const Bar& b) { return b.essential(); }) == 1);
    for (const auto& b : full.h1) CHECK_FALSE(b.essential());

    std::vector<std::size_t> idx(12);
    std::iota(idx.begin(), idx.end(), 0);
    const auto sub = cloud.subsample(idx);
    const auto dm = pairwise_distances(sub);
    CHECK(testing::engine_bars(compute_persistence(sub)) ==
          oracle::naive_rips_persistence(testing::to_matrix(dm), enclosing_radius(dm)));
}

TEST_CASE("enclosing radius threshold does not change H1") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto dm = pairwise_distances(testing::random_cloud(5 + seed % 8, 3, 300 + seed));
        const auto unthresholded = oracle::naive_rips_persistence(testing::to_matrix(dm));
        std::vector<oracle::OracleBar> h1_ref;
        for (const auto& b : unthresholded)
            if (b.dimension == 1) h1_ref.push_back(b);
        std::vector<oracle::OracleBar> h1;
        for (const auto& b : compute_persistence(dm).h1) h1.push_back({1, b.birth, b.death});
        CHECK(h1 == h1_ref);

        PersistenceConfig cfg;
        cfg.threshold = ThresholdPolicy::fixed(kInf);
        CHECK(testing::engine_bars(compute_persistence(dm, cfg)) == unthresholded);
    }
}

TEST_CASE("a threshold below the enclosing radius reports essential classes") {
    // square: loop born at 1 dies at sqrt 2; cut the filtration at 1.2
    PersistenceConfig cfg;
    cfg.threshold = ThresholdPolicy::fixed(1.2);
    const auto d = compute_persistence(square(), cfg);
    REQUIRE(d.h1.size() == 1);
    CHECK(d.h1[0].essential());
    CHECK(d.h1[0].birth == 1.0);

    const auto dm = pairwise_distances(testing::make_cloud({{0}, {1}, {5}}));
    cfg.threshold = ThresholdPolicy::fixed(2.0);
    const auto split = compute_persistence(dm, cfg);
    CHECK(std::count_if(split.h0.begin(), split.h0.end(), [](const Bar& b) { return b.essential(); }) == 2);
    CHECK(testing::engine_bars(split) == oracle::naive_rips_persistence(testing::to_matrix(dm), 2.0));
}

TEST_CASE("H0 deaths equal minimum spanning tree weights") {
    for (std::size_t n : {2u, 17u, 80u, 200u}) {
        const auto dm = pairwise_distances(testing::random_cloud(n, 32, n));
        const auto deaths = testing::finite_h0_deaths(compute_h0(dm));
        const auto mst = oracle::kruskal_mst_weights(testing::to_matrix(dm));
        REQUIRE(deaths.size() == mst.size());
        for (std::size_t i = 0; i < mst.size(); ++i) CHECK(std::abs(deaths[i] - mst[i]) <= 1e-12);
    }
}

TEST_CASE("scale equivariance") {
    const auto cloud = testing::random_cloud(25, 6, 55);
    const double c = 3.7;
    std::vector<double> scaled(cloud.coords().begin(), cloud.coords().end());
    for (auto& x : scaled) x *= c;
    const auto a = compute_persistence(cloud);
    const auto b = compute_persistence(PointCloud(25, 6, scaled));
    REQUIRE(a.h0.size() == b.h0.size());
    REQUIRE(a.h1.size() == b.h1.size());
    for (std::size_t i = 0; i < a.h0.size(); ++i)
        if (!a.h0[i].essential()) CHECK(std::abs(b.h0[i].death - c * a.h0[i].death) <= 1e-9);
    for (std::size_t i = 0; i < a.h1.size(); ++i) {
        CHECK(std::abs(b.h1[i].birth - c * a.h1[i].birth) <= 1e-9);
        CHECK(std::abs(b.h1[i].death - c * a.h1[i].death) <= 1e-9);
    }
}

TEST_CASE("permutation invariance") {
    const auto cloud = testing::random_cloud(40, 10, 9);
    std::vector<std::size_t> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(17);
    for (int round = 0; round < 5; ++round) {
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto a = compute_persistence(cloud);
        const auto b = compute_persistence(cloud.subsample(perm));
        CHECK(a.h0 == b.h0);
        CHECK(a.h1 == b.h1);
    }
}

TEST_CASE("apparent-pair shortcut does not change the diagram") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto cloud = testing::random_cloud(60, 4 + seed, 70 + seed);
        PersistenceConfig on, off;
        off.use_apparent_pairs = false;
        const auto a = compute_persistence(cloud, on);
        const auto b = compute_persistence(cloud, off);
        CHECK(a.h0 == b.h0);
        CHECK(a.h1 == b.h1);
    }
}

TEST_CASE("Betti numbers at a scale") {
    const auto line = compute_persistence(testing::make_cloud({{0}, {1}, {3}}));
    CHECK(betti_at_scale(line, 1.5).beta0 == 2);

    const auto hex = compute_persistence(hexagon());
    CHECK(betti_at_scale(hex, 1.2) == BettiVector{1, 1});

    const auto cloud = testing::random_cloud(30, 3, 1);
    CHECK(betti_at_scale(compute_persistence(cloud), 0.0) == BettiVector{30, 0});

    CHECK_THROWS_AS(betti_at_scale(hex, hex.threshold), InputError);
    CHECK_THROWS_AS(betti_at_scale(hex, 5.0), InputError);
    CHECK_THROWS_AS(betti_at_scale(hex, -0.1), InputError);
}

TEST_CASE("well-separated clusters have beta0 = k at an intermediate scale") {
    for (std::size_t k : {2u, 3u, 5u}) {
        SynthSpec s;
        s.kind = SynthKind::Clusters;
        s.k = k;
        s.count = 12;
        s.radius = 0.1;
        s.separation = 10.0;
        s.dim = 16;
        s.seed = k;
        const auto d = compute_persistence(generate(s));
        CHECK(betti_at_scale(d, 1.0) == BettiVector{k, 0});
    }
}

TEST_CASE("threshold policy strings") {
    CHECK(ThresholdPolicy::parse("enclosing") == ThresholdPolicy::enclosing());
    CHECK(ThresholdPolicy::parse("2.5") == ThresholdPolicy::fixed(2.5));
    CHECK(ThresholdPolicy::fixed(2.5).to_string() == "2.5");
    CHECK_THROWS_AS(ThresholdPolicy::parse("-1"), InputError);
    CHECK_THROWS_AS(ThresholdPolicy::parse("wide"), InputError);
}
