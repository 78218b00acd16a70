#include "uavplan/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "uavplan/errors.hpp"
#include "uavplan/format.hpp"

namespace uavplan {

std::string to_string(ClusterMethod m) { return m == ClusterMethod::kmeans ? "kmeans" : "crp"; }

std::vector<int> Assignment::cluster_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
}

namespace {

// Nearest centroid, lowest index on ties.
inline int nearest(const Vec2& p, const std::vector<Vec2>& c, double& best_d2) {
    int best = 0;
    best_d2 = dist2(p, c[0]);
    for (int j = 1; j < static_cast<int>(c.size()); ++j) {
        const double d2 = dist2(p, c[static_cast<std::size_t>(j)]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    return best;
}

std::vector<Vec2> means(std::span<const Vec2> points, const std::vector<int>& labels, int k,
                        const std::vector<Vec2>& fallback) {
    std::vector<double> sx(static_cast<std::size_t>(k), 0.0), sy(sx.size(), 0.0);
    std::vector<int> cnt(sx.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto l = static_cast<std::size_t>(labels[i]);
        sx[l] += points[i].x;
        sy[l] += points[i].y;
        ++cnt[l];
    }
    std::vector<Vec2> out(sx.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = cnt[j] ? Vec2{sx[j] / cnt[j], sy[j] / cnt[j]} : fallback[j];
    return out;
}

double sum_sq(std::span<const Vec2> points, const std::vector<int>& labels,
              const std::vector<Vec2>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        s += dist2(points[i], c[static_cast<std::size_t>(labels[i])]);
    return s;
}

// Give every empty cluster the point farthest from its own centroid, taken
// from clusters that can spare one.
void repair_empty(std::span<const Vec2> points, std::vector<int>& labels, std::vector<Vec2>& c) {
    const int k = static_cast<int>(c.size());
    std::vector<int> cnt(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++cnt[static_cast<std::size_t>(l)];
    for (int j = 0; j < k; ++j) {
        if (cnt[static_cast<std::size_t>(j)] > 0) continue;
        int far = -1;
        double far_d2 = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto l = static_cast<std::size_t>(labels[i]);
            if (cnt[l] < 2) continue;
            const double d2 = dist2(points[i], c[l]);
            if (d2 > far_d2) {
                far_d2 = d2;
                far = static_cast<int>(i);
            }
        }
        if (far < 0) break;  // fewer points than clusters; caller rejects this
        --cnt[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
        labels[static_cast<std::size_t>(far)] = j;
        cnt[static_cast<std::size_t>(j)] = 1;
        c[static_cast<std::size_t>(j)] = points[static_cast<std::size_t>(far)];
    }
}

}  // namespace

std::size_t count_distinct(std::span<const Vec2> points) {
    std::vector<Vec2> v(points.begin(), points.end());
    auto less = [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); };
    std::sort(v.begin(), v.end(), less);
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

LloydRun lloyd(std::span<const Vec2> points, std::vector<Vec2> init, int max_iter, double tol) {
    if (init.empty()) throw ArgumentError("lloyd: need at least one centroid");
    if (points.size() < init.size()) throw ArgumentError("lloyd: more centroids than points");
    const int k = static_cast<int>(init.size());
    LloydRun run;
    std::vector<Vec2> c = std::move(init);
    std::vector<int> labels(points.size(), 0);
    for (int it = 0; it < max_iter; ++it) {
        double d2;
        bool changed = it == 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const int l = nearest(points[i], c, d2);
            if (l != labels[i]) {
                labels[i] = l;
                changed = true;
            }
        }
        repair_empty(points, labels, c);
        std::vector<Vec2> next = means(points, labels, k, c);
        double shift = 0.0;
        for (int j = 0; j < k; ++j)
            shift = std::max(shift, dist(next[static_cast<std::size_t>(j)], c[static_cast<std::size_t>(j)]));
        c = std::move(next);
        run.wcss_trace.push_back(sum_sq(points, labels, c));
        run.iterations = it + 1;
        if (shift < tol || !changed) {
            run.converged = true;
            break;
        }
    }
    run.assignment.k = k;
    run.assignment.labels = std::move(labels);
    run.assignment.centroids = std::move(c);
    run.assignment.wcss = run.wcss_trace.back();
    run.assignment.method = ClusterMethod::kmeans;
    return run;
}

std::vector<Vec2> kmeanspp_init(std::span<const Vec2> points, int k, Rng& rng) {
    std::vector<Vec2> c;
    c.reserve(static_cast<std::size_t>(k));
    c.push_back(points[uniform_index(rng, points.size())]);
    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) d2[i] = dist2(points[i], c[0]);
    while (static_cast<int>(c.size()) < k) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = uniform01(rng) * total;
            double acc = 0.0;
            pick = points.size();
            for (std::size_t i = 0; i < points.size(); ++i) {
                acc += d2[i];
                if (acc > target && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick == points.size())  // rounding at the tail
                for (std::size_t i = points.size(); i-- > 0;)
                    if (d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
        }
        c.push_back(points[pick]);
        for (std::size_t i = 0; i < points.size(); ++i) d2[i] = std::min(d2[i], dist2(points[i], c.back()));
    }
    return c;
}

KMeansResult kmeans_restarts(std::span<const Vec2> points, int k, std::uint64_t seed,
                             const KMeansOptions& opts) {
    if (k < 1) throw ArgumentError("kmeans: k must be >= 1");
    if (points.empty() || static_cast<std::size_t>(k) > count_distinct(points))
        throw ArgumentError("kmeans: k=" + std::to_string(k) + " exceeds the number of distinct points");
    KMeansResult res;
    for (int r = 0; r < opts.n_init; ++r) {
        Rng rng(substream_seed(seed, Stream::kmeans, static_cast<std::uint64_t>(r)));
        LloydRun run = lloyd(points, kmeanspp_init(points, k, rng), opts.max_iter, opts.tol);
        res.restart_wcss.push_back(run.assignment.wcss);
        if (r == 0 || run.assignment.wcss < res.best.wcss) res.best = std::move(run.assignment);
    }
    return res;
}

Assignment kmeans(std::span<const Vec2> points, int k, std::uint64_t seed, int max_iter, double tol,
                  int n_init) {
    return kmeans_restarts(points, k, seed, {n_init, max_iter, tol}).best;
}

double wcss(std::span<const Vec2> points, const Assignment& a) {
    if (a.labels.size() != points.size()) throw ArgumentError("wcss: label count differs from point count");
    for (int l : a.labels)
        if (l < 0 || l >= a.k || static_cast<std::size_t>(l) >= a.centroids.size())
            throw ArgumentError("wcss: label " + std::to_string(l) + " out of range");
    return sum_sq(points, a.labels, a.centroids);
}

std::vector<ElbowPoint> elbow_scan(std::span<const Vec2> points, std::span<const int> k_range,
                                   std::uint64_t seed, const KMeansOptions& opts) {
    if (k_range.empty()) throw ArgumentError("elbow_scan: empty k range");
    std::vector<int> ks(k_range.begin(), k_range.end());
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (ks.front() < 1 || static_cast<std::size_t>(ks.back()) > points.size())
        throw ArgumentError("elbow_scan: k range must lie within [1, n]");
    std::vector<ElbowPoint> out;
    Assignment prev;
    for (int k : ks) {
        KMeansResult r = kmeans_restarts(points, k, substream_seed(seed, Stream::elbow, static_cast<std::uint64_t>(k)), opts);
        Assignment best = std::move(r.best);
        if (prev.k > 0) {
            // previous centroids plus farthest-first points
            std::vector<Vec2> init = prev.centroids;
            while (static_cast<int>(init.size()) < k) {
                std::size_t far = 0;
                double far_d2 = -1.0;
                for (std::size_t i = 0; i < points.size(); ++i) {
                    double d2;
                    nearest(points[i], init, d2);
                    if (d2 > far_d2) {
                        far_d2 = d2;
                        far = i;
                    }
                }
                init.push_back(points[far]);
            }
            LloydRun nested = lloyd(points, std::move(init), opts.max_iter, opts.tol);
            if (nested.assignment.wcss < best.wcss) best = std::move(nested.assignment);
        }
        double mean = 0.0;
        for (double w : r.restart_wcss) mean += w;
        mean /= static_cast<double>(r.restart_wcss.size());
        out.push_back({k, best.wcss, mean});
        prev = std::move(best);
    }
    return out;
}

Assignment crp_cluster(std::span<const Vec2> points, const CrpParams& params, std::uint64_t seed) {
    if (points.empty()) throw ArgumentError("crp_cluster: no points");
    if (!(params.a > 0.0)) throw ArgumentError("crp_cluster: a must be > 0");
    if (!(params.lambda_m > 0.0)) throw ArgumentError("crp_cluster: lambda_m must be > 0");
    Rng rng(substream_seed(seed, Stream::crp, 0));
    Assignment a;
    a.method = ClusterMethod::crp;
    std::vector<int> sizes;
    std::vector<double> w;
    for (const Vec2& p : points) {
        w.clear();
        double total = 0.0;
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            const double kernel = std::isinf(params.lambda_m) ? 1.0 : std::exp(-dist(p, a.centroids[c]) / params.lambda_m);
            w.push_back(sizes[c] * kernel);
            total += w.back();
        }
        total += params.a;
        const double target = uniform01(rng) * total;
        double acc = 0.0;
        std::size_t pick = sizes.size();  // new table unless an existing one is hit
        for (std::size_t c = 0; c < w.size(); ++c) {
            acc += w[c];
            if (target < acc) {
                pick = c;
                break;
            }
        }
        if (pick == sizes.size()) {
            sizes.push_back(1);
            a.centroids.push_back(p);
        } else {
            const int n = ++sizes[pick];
            a.centroids[pick].x += (p.x - a.centroids[pick].x) / n;
            a.centroids[pick].y += (p.y - a.centroids[pick].y) / n;
        }
        a.labels.push_back(static_cast<int>(pick));
    }
    a.k = static_cast<int>(sizes.size());
    a.wcss = sum_sq(points, a.labels, a.centroids);
    return a;
}

SeparationReport check_separation(const Assignment& a, double d_min_m) {
    SeparationReport rep;
    for (int i = 0; i < a.k; ++i)
        for (int j = i + 1; j < a.k; ++j)
            if (dist(a.centroids[static_cast<std::size_t>(i)], a.centroids[static_cast<std::size_t>(j)]) < d_min_m)
                rep.violations.emplace_back(i, j);
    rep.ok = rep.violations.empty();
    return rep;
}

void write_assignment_csv(std::ostream& out, std::span<const int> ids, std::span<const Vec2> points,
                          const Assignment& a) {
    if (ids.size() != points.size() || a.labels.size() != points.size())
        throw ArgumentError("write_assignment_csv: size mismatch");
    out << "node_id,x_m,y_m,label\n";
    for (std::size_t i = 0; i < points.size(); ++i)
        out << ids[i] << ',' << fmt_num(points[i].x) << ',' << fmt_num(points[i].y) << ',' << a.labels[i] << '\n';
}

}  // namespace uavplan
