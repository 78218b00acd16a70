#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uavplan/geometry.hpp"
#include "uavplan/rng.hpp"

namespace uavplan {

enum class ClusterMethod { kmeans, crp };

std::string to_string(ClusterMethod m);

struct Assignment {
    int k = 0;
    std::vector<int> labels;
    std::vector<Vec2> centroids;
    double wcss = 0.0;
    ClusterMethod method = ClusterMethod::kmeans;

    std::vector<int> cluster_sizes() const;
    bool operator==(const Assignment&) const = default;
};

struct KMeansOptions {
    int n_init = 10;
    int max_iter = 100;
    double tol = 1e-6;
};

// One Lloyd descent from given starting centroids.
struct LloydRun {
    Assignment assignment;
    std::vector<double> wcss_trace;  // after every update step
    int iterations = 0;
    bool converged = false;
};

LloydRun lloyd(std::span<const Vec2> points, std::vector<Vec2> init, int max_iter, double tol);

std::vector<Vec2> kmeanspp_init(std::span<const Vec2> points, int k, Rng& rng);

std::size_t count_distinct(std::span<const Vec2> points);

struct KMeansResult {
    Assignment best;
    std::vector<double> restart_wcss;
};

// Best of opts.n_init k-means++ restarts; ties go to the lower restart index.
KMeansResult kmeans_restarts(std::span<const Vec2> points, int k, std::uint64_t seed,
                             const KMeansOptions& opts = {});

Assignment kmeans(std::span<const Vec2> points, int k, std::uint64_t seed, int max_iter = 100,
                  double tol = 1e-6, int n_init = 10);

double wcss(std::span<const Vec2> points, const Assignment& a);

struct ElbowPoint {
    int k = 0;
    double wcss = 0.0;              // best of restarts and the nested start
    double mean_restart_wcss = 0.0;  // mean over the random restarts
};

// Each k after the first also runs one descent started from the previous
// best centroids plus the farthest points, which keeps the curve monotone.
std::vector<ElbowPoint> elbow_scan(std::span<const Vec2> points, std::span<const int> k_range,
                                   std::uint64_t seed, const KMeansOptions& opts = {});

struct CrpParams {
    double a = 2.0;
    double lambda_m = std::numeric_limits<double>::infinity();
};

// Sequential seating in point order: join cluster c with weight
// |c| * exp(-d(p, centroid_c) / lambda_m), open a new one with weight a.
Assignment crp_cluster(std::span<const Vec2> points, const CrpParams& params, std::uint64_t seed);

struct SeparationReport {
    bool ok = true;
    std::vector<std::pair<int, int>> violations;
};

// Pairs closer than d_min_m violate; exactly d_min_m is fine.
SeparationReport check_separation(const Assignment& a, double d_min_m);

// Rows: node_id,x_m,y_m,label
void write_assignment_csv(std::ostream& out, std::span<const int> ids,
                          std::span<const Vec2> points, const Assignment& a);

}  // namespace uavplan
