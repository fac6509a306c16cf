#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsi {

enum class Algorithm { agglomerative, affinity_propagation };
enum class Linkage { ward, average, complete };
enum class Metric { euclidean, manhattan, cosine };

std::string_view to_string(Algorithm a);
std::string_view to_string(Linkage l);
std::string_view to_string(Metric m);
Algorithm parse_algorithm(std::string_view s);
Linkage parse_linkage(std::string_view s);
Metric parse_metric(std::string_view s);

struct ClusteringConfig {
    Algorithm algorithm = Algorithm::agglomerative;

    // agglomerative
    int n_clusters = 2;
    Linkage linkage = Linkage::ward;
    Metric metric = Metric::euclidean;

    // affinity propagation; preference nullopt = median of off-diagonal similarities
    double damping = 0.5;
    std::optional<double> preference;
    int max_iter = 200;
    int convergence_window = 15;

    // Throws ConfigError: ward needs euclidean, damping in [0.5, 1),
    // n_clusters >= 1, finite preference, positive iteration limits.
    void validate() const;

    // Canonical text form, e.g. "agglomerative;k=02;linkage=ward;metric=euclidean".
    // Only the fields the algorithm uses appear. Used as a deterministic tie-break key.
    std::string serialize() const;
};

struct Merge {
    std::size_t a = 0;  // surviving cluster id (smallest original point index in it)
    std::size_t b = 0;  // absorbed cluster id, a < b
    double distance = 0.0;
};

struct ClusterResult {
    std::vector<int> labels;  // surjective onto 0..k-1, numbered by first appearance
    int k = 0;

    std::vector<std::size_t> exemplars;  // AP: point index of each cluster's exemplar, by label
    bool converged = false;              // AP
    int iterations = 0;                  // AP
    bool jitter_applied = false;         // AP: tie-breaking noise was added to the similarities

    std::vector<Merge> merge_trace;  // agglomerative: n - k merges in order
    bool clamped = false;            // agglomerative: n_clusters exceeded the point count
};

using PointSet = std::span<const std::vector<double>>;

// Point-to-point distance. Cosine is 1 - cos(x, y), and 1 for a zero vector.
double distance(Metric metric, std::span<const double> x, std::span<const double> y);

// Full bottom-up merge sequence (n - 1 merges) for `linkage`/`metric`.
// Cluster distances follow Lance-Williams updates; ward works on squared
// euclidean distances and reports sqrt of the merge cost (scipy heights).
// Among equally close pairs the one with the smallest (a, b) ids merges first.
std::vector<Merge> build_dendrogram(PointSet points, Linkage linkage, Metric metric);

// Labels after applying the first n - k merges of `merges`.
std::vector<int> cut_dendrogram(std::span<const Merge> merges, std::size_t n_points, std::size_t k);

ClusterResult agglomerative(PointSet points, const ClusteringConfig& cfg);

// Frey & Dueck message passing on s(i, k) = -||x_i - x_k||^2.
ClusterResult affinity_propagation(PointSet points, const ClusteringConfig& cfg);

// Dispatches on cfg.algorithm after validating cfg.
ClusterResult cluster(PointSet points, const ClusteringConfig& cfg);

// Renumbers labels by first appearance.
std::vector<int> canonical_labels(std::span<const int> labels);

}  // namespace wsi
