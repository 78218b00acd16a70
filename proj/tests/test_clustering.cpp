#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "uavplan/clustering.hpp"
#include "uavplan/errors.hpp"

using namespace uavplan;

namespace {

std::vector<Vec2> uniform_points(std::size_t n, double side, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(0, side);
    std::vector<Vec2> p(n);
    for (auto& q : p) q = {u(g), u(g)};
    return p;
}

void expect_valid(std::span<const Vec2> pts, const Assignment& a) {
    ASSERT_EQ(a.labels.size(), pts.size());
    ASSERT_EQ(a.centroids.size(), static_cast<std::size_t>(a.k));
    const auto sizes = a.cluster_sizes();
    for (int s : sizes) EXPECT_GT(s, 0);
    const double w = wcss(pts, a);
    EXPECT_LE(std::abs(w - a.wcss), 1e-6 * std::max(1.0, w));
    if (a.method == ClusterMethod::kmeans || a.method == ClusterMethod::crp) {
        std::vector<Vec2> sum(static_cast<std::size_t>(a.k));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            sum[static_cast<std::size_t>(a.labels[i])].x += pts[i].x;
            sum[static_cast<std::size_t>(a.labels[i])].y += pts[i].y;
        }
        for (int j = 0; j < a.k; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            EXPECT_NEAR(a.centroids[uj].x, sum[uj].x / sizes[uj], 1e-9 * std::max(1.0, std::abs(a.centroids[uj].x)));
            EXPECT_NEAR(a.centroids[uj].y, sum[uj].y / sizes[uj], 1e-9 * std::max(1.0, std::abs(a.centroids[uj].y)));
        }
    }
}

}  // namespace

TEST(KMeans, IdenticalPoints) {
    const std::vector<Vec2> pts(7, Vec2{3, 4});
    const auto a = kmeans(pts, 1, 1);
    EXPECT_EQ(a.centroids[0], (Vec2{3, 4}));
    EXPECT_EQ(a.wcss, 0.0);
    EXPECT_THROW(kmeans(pts, 2, 1), ArgumentError);
}

TEST(KMeans, SquareCorners) {
    const std::vector<Vec2> pts{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
    const auto a = kmeans(pts, 1, 1);
    EXPECT_EQ(a.centroids[0], (Vec2{1, 1}));
    EXPECT_DOUBLE_EQ(a.wcss, 8.0);
    EXPECT_DOUBLE_EQ(wcss(pts, a), 8.0);
}

TEST(KMeans, TwoBlobs) {
    std::mt19937_64 g(5);
    std::normal_distribution<double> n(0, 10);
    std::vector<Vec2> pts;
    Vec2 m0{}, m1{};
    for (int i = 0; i < 50; ++i) {
        pts.push_back({100 + n(g), 100 + n(g)});
        m0.x += pts.back().x / 50;
        m0.y += pts.back().y / 50;
    }
    for (int i = 0; i < 50; ++i) {
        pts.push_back({900 + n(g), 700 + n(g)});
        m1.x += pts.back().x / 50;
        m1.y += pts.back().y / 50;
    }
    const auto a = kmeans(pts, 2, 9);
    expect_valid(pts, a);
    const int l0 = a.labels[0];
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.labels[static_cast<std::size_t>(i)] == l0, i < 50);
    EXPECT_NEAR(a.centroids[static_cast<std::size_t>(l0)].x, m0.x, 1e-9);
    EXPECT_NEAR(a.centroids[static_cast<std::size_t>(1 - l0)].y, m1.y, 1e-9);
    EXPECT_LT(a.wcss, kmeans(pts, 1, 9).wcss);
    // the split found is the better of the two candidate partitions at this size
    std::vector<Vec2> small(pts.begin(), pts.begin() + 4);
    small.insert(small.end(), pts.begin() + 50, pts.begin() + 54);
    EXPECT_NEAR(kmeans(small, 2, 3).wcss, oracle::brute_force_wcss(small, 2), 1e-9);
}

TEST(KMeans, TieGoesToLowerIndex) {
    // point 1 is equidistant from both starting centroids
    const std::vector<Vec2> pts{{0, 0}, {5, 0}, {10, 0}};
    const auto run = lloyd(pts, {{0, 0}, {10, 0}}, 1, 0.0);
    EXPECT_EQ(run.assignment.labels[1], 0);
}

TEST(KMeans, LloydNeverIncreasesWcss) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto pts = uniform_points(200, 1000, s);
        Rng rng(s);
        const int k = 2 + static_cast<int>(s % 9);
        const auto run = lloyd(pts, kmeanspp_init(pts, k, rng), 100, 1e-6);
        for (std::size_t i = 1; i < run.wcss_trace.size(); ++i)
            EXPECT_LE(run.wcss_trace[i], run.wcss_trace[i - 1] * (1 + 1e-12)) << "seed " << s << " iter " << i;
        expect_valid(pts, run.assignment);
    }
}

TEST(KMeans, EmptyClusterRepaired) {
    // both starting centroids sit far from the data; one ends up empty at first
    const std::vector<Vec2> pts{{0, 0}, {1, 0}, {0, 1}, {10, 10}};
    const auto run = lloyd(pts, {{5, 5}, {1000, 1000}, {1001, 1001}}, 100, 1e-9);
    expect_valid(pts, run.assignment);
}

TEST(KMeans, AssignmentInvariantsAndDeterminism) {
    const auto pts = uniform_points(300, 2000, 77);
    for (int k = 1; k <= 12; ++k) {
        const auto a = kmeans(pts, k, 1234);
        expect_valid(pts, a);
        EXPECT_EQ(a, kmeans(pts, k, 1234));
    }
}

TEST(KMeans, BruteForceOracleOnSmallInstances) {
    std::mt19937_64 g(2024);
    int agree = 0, total = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 3 + g() % 6;
        const int k = 1 + static_cast<int>(g() % 3);
        const auto pts = uniform_points(n, 1.0, g());
        const double got = kmeans(pts, k, g()).wcss;
        const double best = oracle::brute_force_wcss(pts, k);
        EXPECT_GE(got, best - 1e-12);
        ++total;
        if (std::abs(got - best) <= 1e-9) ++agree;
    }
    EXPECT_GE(agree, 0.95 * total) << agree << "/" << total;
}

TEST(Wcss, Examples) {
    const std::vector<Vec2> one{{4, 4}};
    Assignment a{1, {0}, {{4, 4}}, 0, ClusterMethod::kmeans};
    EXPECT_EQ(wcss(one, a), 0.0);
    const std::vector<Vec2> two{{0, 0}, {2, 0}};
    Assignment b{1, {0, 0}, {{1, 0}}, 0, ClusterMethod::kmeans};
    EXPECT_DOUBLE_EQ(wcss(two, b), 2.0);
    Assignment bad{1, {0, 1}, {{1, 0}}, 0, ClusterMethod::kmeans};
    EXPECT_THROW(wcss(two, bad), ArgumentError);
}

TEST(Elbow, SingleKIsTotalScatter) {
    const auto pts = uniform_points(120, 1000, 3);
    Vec2 m{};
    for (const auto& p : pts) {
        m.x += p.x / 120;
        m.y += p.y / 120;
    }
    double scatter = 0;
    for (const auto& p : pts) scatter += dist2(p, m);
    const std::vector<int> ks{1};
    const auto e = elbow_scan(pts, ks, 1);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_NEAR(e[0].wcss, scatter, 1e-9 * scatter);
}

TEST(Elbow, StrictlyDecreasingOn500Uniform) {
    const auto pts = uniform_points(500, 1000, 21);
    std::vector<int> ks;
    for (int k = 1; k <= 24; ++k) ks.push_back(k);
    const auto e = elbow_scan(pts, ks, 5);
    ASSERT_EQ(e.size(), 24u);
    for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LT(e[i].wcss, e[i - 1].wcss);
}

TEST(Elbow, NonIncreasingOnManyClouds) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        auto pts = uniform_points(40, 100, s);
        pts.insert(pts.end(), 10, Vec2{50, 50});  // duplicates
        std::vector<int> ks;
        for (int k = 1; k <= 20; ++k) ks.push_back(k);
        const auto e = elbow_scan(pts, ks, s, {2, 100, 1e-6});
        for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LE(e[i].wcss, e[i - 1].wcss) << s << " k=" << e[i].k;
    }
}

TEST(Elbow, MoreNodesMoreWcss) {
    double small = 0, big = 0;
    const std::vector<int> ks{5};
    for (std::uint64_t s = 0; s < 10; ++s) {
        small += elbow_scan(uniform_points(100, 1000, s), ks, s)[0].wcss;
        big += elbow_scan(uniform_points(500, 1000, s + 100), ks, s)[0].wcss;
    }
    EXPECT_GT(big, small);
}

TEST(Crp, SingleNode) {
    const std::vector<Vec2> pts{{1, 2}};
    const auto a = crp_cluster(pts, {2.0, 100.0}, 1);
    EXPECT_EQ(a.k, 1);
    EXPECT_EQ(a.labels[0], 0);
    EXPECT_EQ(a.method, ClusterMethod::crp);
}

TEST(Crp, PureProcessMatchesHarmonicSum) {
    const auto pts = uniform_points(100, 1000, 1);
    double sum = 0;
    const int seeds = 2000;
    for (int s = 0; s < seeds; ++s) sum += crp_cluster(pts, {2.0, std::numeric_limits<double>::infinity()}, static_cast<std::uint64_t>(s)).k;
    EXPECT_NEAR(sum / seeds, oracle::crp_expected_tables(100, 2.0), 0.5);
    EXPECT_NEAR(oracle::crp_expected_tables(100, 2.0), 8.4, 0.05);
}

TEST(Crp, DeterministicAndValid) {
    const auto pts = uniform_points(150, 1000, 4);
    const auto a = crp_cluster(pts, {2.0, 1000.0}, 17);
    EXPECT_EQ(a, crp_cluster(pts, {2.0, 1000.0}, 17));
    expect_valid(pts, a);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        // seating is sequential: a label never exceeds the count opened so far
        int opened = 0;
        for (std::size_t j = 0; j < i; ++j) opened = std::max(opened, a.labels[j] + 1);
        EXPECT_LE(a.labels[i], opened);
    }
}

TEST(Crp, ShorterKernelMoreClusters) {
    const auto pts = uniform_points(100, 1000, 8);
    double short_k = 0, long_k = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        short_k += crp_cluster(pts, {2.0, 250.0}, s).k;
        long_k += crp_cluster(pts, {2.0, 1000.0}, s).k;
    }
    EXPECT_GT(short_k, long_k);
}

TEST(Separation, Examples) {
    Assignment one{1, {0}, {{0, 0}}, 0, ClusterMethod::kmeans};
    EXPECT_TRUE(check_separation(one, 1e9).ok);
    Assignment two{2, {0, 1}, {{0, 0}, {10, 0}}, 0, ClusterMethod::kmeans};
    const auto r = check_separation(two, 50);
    EXPECT_FALSE(r.ok);
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0], (std::pair<int, int>{0, 1}));
    Assignment line{4, {0, 1, 2, 3}, {{0, 0}, {200, 0}, {400, 0}, {600, 0}}, 0, ClusterMethod::kmeans};
    EXPECT_TRUE(check_separation(line, 200).ok);
}

TEST(Export, AssignmentCsv) {
    const std::vector<Vec2> pts{{0, 0}, {2.5, 1}};
    const std::vector<int> ids{7, 9};
    Assignment a{2, {0, 1}, pts, 0, ClusterMethod::kmeans};
    std::ostringstream out;
    write_assignment_csv(out, ids, pts, a);
    EXPECT_EQ(out.str(), "node_id,x_m,y_m,label\n7,0,0,0\n9,2.5,1,1\n");
}
