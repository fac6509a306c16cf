#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsi/clustering.hpp"
#include "wsi/weighting.hpp"

namespace wsi {

class EmbeddingModel;
struct Dataset;

struct SearchSpace {
    std::vector<double> p_tfidf_grid{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
    std::vector<double> p_chi2_grid{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};

    std::vector<Algorithm> algorithms{Algorithm::agglomerative};

    std::vector<int> k_grid{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    std::vector<Linkage> linkages{Linkage::ward, Linkage::average, Linkage::complete};
    std::vector<Metric> metrics{Metric::euclidean};

    std::vector<double> damping_grid{0.5};
    std::vector<std::optional<double>> preference_grid{std::nullopt};  // nullopt = median
    int max_iter = 200;
    int convergence_window = 15;

    // Throws ConfigError on an empty grid or an out-of-range value: powers in
    // [0, 2.5], k >= 1, damping in [0.5, 1), preference in [-20, 5].
    void validate() const;

    // Clustering configurations in grid order. Ward paired with a
    // non-euclidean metric is skipped and described in `excluded`.
    std::vector<ClusteringConfig> clustering_configs(std::vector<std::string>* excluded = nullptr) const;

    std::vector<WeightingConfig> weighting_configs() const;

    // Number of (weighting, clustering) pairs that will be scored.
    std::size_t size() const;
};

// key=value lines, '#' comments. Keys: algorithms, power_grid (sets both
// exponents), p_tfidf_grid, p_chi2_grid, k_grid ("1-14" or a list), linkages,
// metrics, damping_grid, preference_grid ("auto" allowed), max_iter,
// convergence_window. Lists are comma separated. Unset keys keep defaults.
SearchSpace parse_search_space(std::string_view content, std::string_view source = "<memory>");
SearchSpace read_search_space(const std::filesystem::path& path);

struct RankedEntry {
    ClusteringConfig clustering;
    WeightingConfig weighting;
    double train_ari = 0.0;
    std::string key;  // clustering.serialize() + ";p_tfidf=...;p_chi2=..."
};

struct SearchResult {
    std::vector<RankedEntry> ranked;    // train_ari descending, then key ascending
    std::vector<std::string> excluded;  // configurations rejected before scoring

    const RankedEntry& best() const { return ranked.front(); }
};

std::string entry_key(const ClusteringConfig& clustering, const WeightingConfig& weighting);

// Scores every configuration by weighted-aggregate ARI on `dataset`, which
// must carry gold senses. Contexts are vectorized once per power pair and each
// agglomerative dendrogram is built once and cut at every k. The result does
// not depend on `jobs`.
SearchResult grid_search(const Dataset& dataset, const EmbeddingModel& model, const IdfTable& idf,
                         const Chi2Table& chi2, const SearchSpace& space, unsigned jobs = 1);

struct HeatmapRow {
    double p_tfidf = 0.0;
    double p_chi2 = 0.0;
    double ari = 0.0;
};

// One row per power pair, sorted by (p_tfidf, p_chi2). Without `fixed` the ARI
// is the best over all clustering configurations; with it, the ARI of that
// configuration alone (ConfigError if it was not searched).
std::vector<HeatmapRow> export_power_heatmap(const SearchResult& result,
                                             const std::optional<ClusteringConfig>& fixed = std::nullopt);

struct SweepRow {
    int n_clusters = 0;
    Linkage linkage = Linkage::ward;
    double ari = 0.0;
};

// One row per (k, linkage) over agglomerative entries, best over the other
// dimensions. ConfigError when the search had no agglomerative entries.
std::vector<SweepRow> export_k_linkage_sweep(const SearchResult& result);

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapRow>& rows);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// "rank<TAB>train_ari<TAB>config", then "# excluded<TAB>..." lines.
void write_ranked(std::ostream& out, const SearchResult& result);

}  // namespace wsi
