#include "pcdefect/subdivision.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace pcdefect;

TEST_SUITE("subdivision") {

TEST_CASE("subset_count fixtures") {
    CHECK(subset_count(4096, 4096) == 1);
    CHECK(subset_count(8192, 4096) == 2);
    CHECK(subset_count(474830, 4096) == 116);
    CHECK(subset_count(1, 4096) == 1);
    CHECK_THROWS_AS(subset_count(0, 4096), input_error);
    CHECK_THROWS_AS(subset_count(4096, 0), input_error);
    CHECK_THROWS_AS(subset_count(-5, 4096), input_error);
}

TEST_CASE("fps picks the centroid-farthest point first") {
    std::mt19937_64 rng(3);
    PointCloud c = oracles::random_cloud(rng, 40);
    const std::vector<int> got = farthest_point_sample(c, 1);
    CHECK(got == oracles::exhaustive_fps(c, 1));
}

TEST_CASE("fps hand trace on collinear points") {
    PointCloud c;
    c.points.emplace_back(0.0, 0.0, 0.0);
    c.points.emplace_back(1.0, 0.0, 0.0);
    c.points.emplace_back(10.0, 0.0, 0.0);
    CHECK(farthest_point_sample(c, 3) == std::vector<int>{2, 0, 1});
}

TEST_CASE("fps ties go to the lower index") {
    // centroid x = 4/3: index 0 is farthest; indices 1 and 2 coincide, so
    // the second pick must be the lower of the tied pair.
    PointCloud c;
    c.points.emplace_back(0.0, 0.0, 0.0);
    c.points.emplace_back(2.0, 0.0, 0.0);
    c.points.emplace_back(2.0, 0.0, 0.0);
    CHECK(farthest_point_sample(c, 3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("fps matches the exhaustive oracle on random clouds") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> size(2, 64);
        const int n = size(rng);
        PointCloud c = oracles::random_cloud(rng, n);
        const int m = std::min(n, 12);
        CHECK(farthest_point_sample(c, m) == oracles::exhaustive_fps(c, m));
    }
}

TEST_CASE("fps is prefix-stable") {
    std::mt19937_64 rng(29);
    PointCloud c = oracles::random_cloud(rng, 50);
    const std::vector<int> full = farthest_point_sample(c, 8);
    for (int m = 1; m <= 8; ++m) {
        const std::vector<int> prefix = farthest_point_sample(c, m);
        CHECK(std::equal(prefix.begin(), prefix.end(), full.begin()));
    }
}

TEST_CASE("fps rejects bad sample counts") {
    PointCloud c;
    c.points.emplace_back(0, 0, 0);
    CHECK_THROWS_AS(farthest_point_sample(c, 0), input_error);
    CHECK_THROWS_AS(farthest_point_sample(c, 2), input_error);
}

TEST_CASE("single subset holds every index when N equals n_input") {
    std::mt19937_64 rng(37);
    PointCloud c = oracles::random_cloud(rng, 128);
    KdTree tree(c);
    SubsetOptions opts;
    opts.n_input = 128;
    const SubsetPlan plan = extract_subsets(c, tree, opts);
    CHECK(plan.num_subsets == 1);
    REQUIRE(plan.subsets.size() == 1);
    std::set<int> got(plan.subsets[0].begin(), plan.subsets[0].end());
    CHECK(got.size() == 128);
    CHECK(*got.begin() == 0);
    CHECK(*got.rbegin() == 127);
}

TEST_CASE("two separated blobs split into one subset each") {
    std::mt19937_64 rng(43);
    PointCloud c;
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    for (int i = 0; i < 64; ++i)
        c.points.emplace_back(jitter(rng), jitter(rng), jitter(rng));
    for (int i = 0; i < 64; ++i)
        c.points.emplace_back(100.0 + jitter(rng), jitter(rng), jitter(rng));
    KdTree tree(c);
    SubsetOptions opts;
    opts.n_input = 64;
    const SubsetPlan plan = extract_subsets(c, tree, opts);
    REQUIRE(plan.num_subsets == 2);
    for (const std::vector<int>& subset : plan.subsets) {
        std::set<int> s(subset.begin(), subset.end());
        REQUIRE(s.size() == 64);
        const bool first_blob = *s.begin() < 64;
        for (int idx : s) CHECK((idx < 64) == first_blob);
    }
}

TEST_CASE("default subsets equal brute-force knn of their references") {
    std::mt19937_64 rng(47);
    PointCloud c = oracles::random_cloud(rng, 1000);
    KdTree tree(c);
    SubsetOptions opts;
    opts.n_input = 128;
    opts.threads = 4;
    const SubsetPlan plan = extract_subsets(c, tree, opts);
    CHECK(plan.num_subsets == 8);
    CHECK(static_cast<std::int64_t>(plan.num_subsets) * opts.n_input >=
          static_cast<std::int64_t>(c.size()));
    REQUIRE(plan.reference_indices.size() == 8);
    for (int s = 0; s < plan.num_subsets; ++s) {
        const Vec3& ref = c.points[static_cast<std::size_t>(plan.reference_indices[s])];
        CHECK(plan.subsets[static_cast<std::size_t>(s)] ==
              oracles::linear_knn(c, ref, opts.n_input));
    }
}

TEST_CASE("covering bound holds across sizes") {
    std::mt19937_64 rng(53);
    for (int n : {64, 100, 257, 512}) {
        PointCloud c = oracles::random_cloud(rng, n);
        KdTree tree(c);
        SubsetOptions opts;
        opts.n_input = 64;
        const SubsetPlan plan = extract_subsets(c, tree, opts);
        CHECK(plan.num_subsets == subset_count(n, 64));
        CHECK(static_cast<std::int64_t>(plan.num_subsets) * 64 >=
              static_cast<std::int64_t>(n));
        for (const std::vector<int>& subset : plan.subsets) {
            std::set<int> s(subset.begin(), subset.end());
            CHECK(s.size() == 64);  // exactly n_input distinct indices
        }
    }
}

TEST_CASE("connectivity mode returns full-size distinct subsets") {
    std::mt19937_64 rng(59);
    PointCloud c = oracles::random_cloud(rng, 400);
    KdTree tree(c);
    SubsetOptions opts;
    opts.n_input = 128;
    opts.connectivity = true;
    const SubsetPlan plan = extract_subsets(c, tree, opts);
    CHECK(plan.num_subsets == 4);
    for (int s = 0; s < plan.num_subsets; ++s) {
        const std::vector<int>& subset = plan.subsets[static_cast<std::size_t>(s)];
        std::set<int> distinct(subset.begin(), subset.end());
        CHECK(distinct.size() == 128);
        CHECK(distinct.count(plan.reference_indices[static_cast<std::size_t>(s)]) == 1);
    }
}

TEST_CASE("connectivity mode prefers the reference's connected component") {
    // Blob A around the origin is bigger than n_input; blob B is far away.
    // A connectivity-grown subset seeded in A must stay inside A, while a
    // plain kNN ball would too -- the difference shows when A is split by a
    // gap the graph cannot cross but the Euclidean ball can. Construct a bar
    // of points with a thin far bridge.
    PointCloud c;
    for (int i = 0; i < 24; ++i)
        c.points.emplace_back(0.1 * i, 0.0, 0.0);  // dense chain, component 1
    for (int i = 0; i < 8; ++i)
        c.points.emplace_back(0.35 + 0.1 * i, 5.0, 0.0);  // distant row
    KdTree tree(c);
    SubsetOptions opts;
    opts.n_input = 16;
    opts.connectivity = true;
    opts.graph_k = 2;
    const SubsetPlan plan = extract_subsets(c, tree, opts);
    for (const std::vector<int>& subset : plan.subsets) {
        std::set<int> s(subset.begin(), subset.end());
        CHECK(s.size() == 16);
    }
}

TEST_CASE("rejects n_input larger than the cloud") {
    std::mt19937_64 rng(61);
    PointCloud c = oracles::random_cloud(rng, 10);
    KdTree tree(c);
    SubsetOptions opts;
    opts.n_input = 11;
    CHECK_THROWS_AS(extract_subsets(c, tree, opts), input_error);
}

}  // TEST_SUITE
