#include "wsi/hyper_search.hpp"

#include "wsi/context_vectorizer.hpp"
#include "wsi/dataset_io.hpp"
#include "wsi/error.hpp"
#include "wsi/evaluation.hpp"
#include "wsi/parallel.hpp"
#include "wsi/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>

namespace wsi {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string fmt_fixed(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

template <typename T>
void require_unique(const std::vector<T>& grid, std::string_view name) {
    if (grid.empty()) throw ConfigError("search space: " + std::string(name) + " is empty");
    std::set<T> seen(grid.begin(), grid.end());
    if (seen.size() != grid.size()) throw ConfigError("search space: " + std::string(name) + " has duplicate values");
}

double parse_double(std::string_view s, const std::string& where) {
    s = text::trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ConfigError(where + ": not a number: '" + std::string(s) + "'");
    return v;
}

int parse_int(std::string_view s, const std::string& where) {
    s = text::trim(s);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError(where + ": not an integer: '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> list_items(std::string_view value) {
    std::vector<std::string_view> out;
    for (auto item : text::split(value, ',')) {
        item = text::trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_reals(std::string_view value, const std::string& where) {
    std::vector<double> out;
    for (auto item : list_items(value)) out.push_back(parse_double(item, where));
    return out;
}

std::vector<int> parse_k_grid(std::string_view value, const std::string& where) {
    std::vector<int> out;
    for (auto item : list_items(value)) {
        const auto dash = item.find('-', 1);
        if (dash == std::string_view::npos) {
            out.push_back(parse_int(item, where));
            continue;
        }
        const int lo = parse_int(item.substr(0, dash), where);
        const int hi = parse_int(item.substr(dash + 1), where);
        if (lo > hi) throw ConfigError(where + ": empty range '" + std::string(item) + "'");
        for (int k = lo; k <= hi; ++k) out.push_back(k);
    }
    return out;
}

// Per-target bookkeeping shared by every configuration.
struct TargetGroup {
    std::vector<std::size_t> instances;  // indices into dataset.instances
    std::vector<std::size_t> gold_pos;   // positions within `instances` that carry gold
    std::vector<int> gold;               // encoded gold label per gold_pos entry
};

std::vector<TargetGroup> group_targets(const Dataset& dataset) {
    std::vector<TargetGroup> groups;
    for (const auto& [target, idx] : dataset.by_target) {
        TargetGroup g;
        g.instances = idx;
        std::map<std::string, int> codes;
        for (std::size_t p = 0; p < idx.size(); ++p) {
            const auto& sense = dataset.instances[idx[p]].gold_sense;
            if (!sense) continue;
            g.gold_pos.push_back(p);
            g.gold.push_back(codes.emplace(*sense, static_cast<int>(codes.size())).first->second);
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

// Same aggregation as evaluate(): per-target ARI weighted by gold count, in target order.
double weighted_ari(const std::vector<TargetGroup>& groups, const std::vector<std::vector<int>>& labels) {
    double sum = 0.0;
    std::size_t n = 0;
    std::vector<int> pred;
    for (std::size_t t = 0; t < groups.size(); ++t) {
        const auto& g = groups[t];
        if (g.gold.empty()) continue;
        pred.clear();
        for (std::size_t p : g.gold_pos) pred.push_back(labels[t][p]);
        const double ari = adjusted_rand_index(std::span<const int>(g.gold), std::span<const int>(pred));
        sum += ari * static_cast<double>(g.gold.size());
        n += g.gold.size();
    }
    return sum / static_cast<double>(n);
}

}  // namespace

void SearchSpace::validate() const {
    require_unique(p_tfidf_grid, "p_tfidf_grid");
    require_unique(p_chi2_grid, "p_chi2_grid");
    require_unique(algorithms, "algorithms");
    for (double p : p_tfidf_grid) WeightingConfig{p, 1.0}.validate();
    for (double p : p_chi2_grid) WeightingConfig{1.0, p}.validate();
    const auto uses = [&](Algorithm a) { return std::find(algorithms.begin(), algorithms.end(), a) != algorithms.end(); };
    if (uses(Algorithm::agglomerative)) {
        require_unique(k_grid, "k_grid");
        require_unique(linkages, "linkages");
        require_unique(metrics, "metrics");
        for (int k : k_grid)
            if (k < 1) throw ConfigError("search space: k_grid values must be >= 1");
    }
    if (uses(Algorithm::affinity_propagation)) {
        require_unique(damping_grid, "damping_grid");
        require_unique(preference_grid, "preference_grid");
        for (double d : damping_grid)
            if (!(d >= 0.5 && d < 1.0)) throw ConfigError("search space: damping values must lie in [0.5, 1)");
        for (const auto& p : preference_grid)
            if (p && !(*p >= -20.0 && *p <= 5.0))
                throw ConfigError("search space: preference values must lie in [-20, 5]");
        if (max_iter < 1 || convergence_window < 1)
            throw ConfigError("search space: max_iter and convergence_window must be positive");
    }
    if (clustering_configs().empty()) throw ConfigError("search space: no valid clustering configuration");
}

std::vector<ClusteringConfig> SearchSpace::clustering_configs(std::vector<std::string>* excluded) const {
    std::vector<ClusteringConfig> out;
    for (Algorithm algo : algorithms) {
        if (algo == Algorithm::agglomerative) {
            for (Linkage l : linkages)
                for (Metric m : metrics) {
                    if (l == Linkage::ward && m != Metric::euclidean) {
                        if (excluded)
                            excluded->push_back("linkage=ward;metric=" + std::string(to_string(m)) +
                                                ": ward linkage requires the euclidean metric");
                        continue;
                    }
                    for (int k : k_grid) {
                        ClusteringConfig c;
                        c.algorithm = algo;
                        c.n_clusters = k;
                        c.linkage = l;
                        c.metric = m;
                        out.push_back(c);
                    }
                }
        } else {
            for (double d : damping_grid)
                for (const auto& p : preference_grid) {
                    ClusteringConfig c;
                    c.algorithm = algo;
                    c.damping = d;
                    c.preference = p;
                    c.max_iter = max_iter;
                    c.convergence_window = convergence_window;
                    out.push_back(c);
                }
        }
    }
    return out;
}

std::vector<WeightingConfig> SearchSpace::weighting_configs() const {
    std::vector<WeightingConfig> out;
    for (double a : p_tfidf_grid)
        for (double b : p_chi2_grid) out.push_back({a, b});
    return out;
}

std::size_t SearchSpace::size() const { return weighting_configs().size() * clustering_configs().size(); }

SearchSpace parse_search_space(std::string_view content, std::string_view source) {
    SearchSpace space;
    std::set<std::string> seen;
    const auto lines = text::split(content, '\n');
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string_view line = lines[li];
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const std::string where = std::string(source) + ":" + std::to_string(li + 1);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected key=value");
        const std::string key(text::trim(line.substr(0, eq)));
        const std::string_view value = text::trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");

        if (key == "power_grid") {
            space.p_tfidf_grid = space.p_chi2_grid = parse_reals(value, where);
        } else if (key == "p_tfidf_grid") {
            space.p_tfidf_grid = parse_reals(value, where);
        } else if (key == "p_chi2_grid") {
            space.p_chi2_grid = parse_reals(value, where);
        } else if (key == "algorithms") {
            space.algorithms.clear();
            for (auto item : list_items(value)) space.algorithms.push_back(parse_algorithm(item));
        } else if (key == "k_grid") {
            space.k_grid = parse_k_grid(value, where);
        } else if (key == "linkages") {
            space.linkages.clear();
            for (auto item : list_items(value)) space.linkages.push_back(parse_linkage(item));
        } else if (key == "metrics") {
            space.metrics.clear();
            for (auto item : list_items(value)) space.metrics.push_back(parse_metric(item));
        } else if (key == "damping_grid") {
            space.damping_grid = parse_reals(value, where);
        } else if (key == "preference_grid") {
            space.preference_grid.clear();
            for (auto item : list_items(value)) {
                if (item == "auto")
                    space.preference_grid.emplace_back(std::nullopt);
                else
                    space.preference_grid.emplace_back(parse_double(item, where));
            }
        } else if (key == "max_iter") {
            space.max_iter = parse_int(value, where);
        } else if (key == "convergence_window") {
            space.convergence_window = parse_int(value, where);
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
    space.validate();
    return space;
}

SearchSpace read_search_space(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open search space file " + path.string());
    const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_search_space(content, path.string());
}

std::string entry_key(const ClusteringConfig& clustering, const WeightingConfig& weighting) {
    return clustering.serialize() + ";p_tfidf=" + fmt_fixed(weighting.p_tfidf) +
           ";p_chi2=" + fmt_fixed(weighting.p_chi2);
}

SearchResult grid_search(const Dataset& dataset, const EmbeddingModel& model, const IdfTable& idf,
                         const Chi2Table& chi2, const SearchSpace& space, unsigned jobs) {
    space.validate();
    if (!dataset.has_gold()) throw DataError("grid search: the dataset carries no gold senses");

    SearchResult result;
    const auto clusterings = space.clustering_configs(&result.excluded);
    const auto weightings = space.weighting_configs();
    const auto groups = group_targets(dataset);

    // Agglomerative configs sharing (linkage, metric) reuse one dendrogram per target.
    std::vector<std::pair<Linkage, Metric>> trees;
    std::vector<ClusteringConfig> ap_configs;
    for (const auto& c : clusterings) {
        if (c.algorithm == Algorithm::affinity_propagation) {
            ap_configs.push_back(c);
            continue;
        }
        const std::pair<Linkage, Metric> lm{c.linkage, c.metric};
        if (std::find(trees.begin(), trees.end(), lm) == trees.end()) trees.push_back(lm);
    }

    const unsigned inner_jobs = weightings.size() < jobs ? jobs : 1;
    std::vector<std::vector<RankedEntry>> per_weighting(weightings.size());
    parallel_for(weightings.size(), jobs, [&](std::size_t w) {
        const WeightingConfig& wc = weightings[w];
        const auto vectors = vectorize_all(dataset, model, idf, chi2, wc, inner_jobs);
        std::vector<std::vector<std::vector<double>>> points(groups.size());
        for (std::size_t t = 0; t < groups.size(); ++t)
            for (std::size_t i : groups[t].instances) points[t].push_back(vectors[i].v);

        auto& entries = per_weighting[w];
        std::vector<std::vector<int>> labels(groups.size());
        for (const auto& [linkage, metric] : trees) {
            std::vector<std::vector<Merge>> dendrograms(groups.size());
            for (std::size_t t = 0; t < groups.size(); ++t)
                dendrograms[t] = build_dendrogram(points[t], linkage, metric);
            for (const auto& c : clusterings) {
                if (c.algorithm != Algorithm::agglomerative || c.linkage != linkage || c.metric != metric) continue;
                for (std::size_t t = 0; t < groups.size(); ++t) {
                    const std::size_t n = points[t].size();
                    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(c.n_clusters), n);
                    labels[t] = cut_dendrogram(dendrograms[t], n, k);
                }
                entries.push_back({c, wc, weighted_ari(groups, labels), entry_key(c, wc)});
            }
        }
        for (const auto& c : ap_configs) {
            for (std::size_t t = 0; t < groups.size(); ++t) labels[t] = affinity_propagation(points[t], c).labels;
            entries.push_back({c, wc, weighted_ari(groups, labels), entry_key(c, wc)});
        }
    });

    for (auto& entries : per_weighting)
        std::move(entries.begin(), entries.end(), std::back_inserter(result.ranked));
    std::sort(result.ranked.begin(), result.ranked.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.train_ari != b.train_ari) return a.train_ari > b.train_ari;
        return a.key < b.key;
    });
    return result;
}

std::vector<HeatmapRow> export_power_heatmap(const SearchResult& result, const std::optional<ClusteringConfig>& fixed) {
    const std::string fixed_key = fixed ? fixed->serialize() : std::string();
    std::map<std::pair<double, double>, std::optional<double>> cells;
    for (const auto& e : result.ranked) {
        auto& cell = cells[{e.weighting.p_tfidf, e.weighting.p_chi2}];
        if (fixed && e.clustering.serialize() != fixed_key) continue;
        if (!cell || e.train_ari > *cell) cell = e.train_ari;
    }
    std::vector<HeatmapRow> rows;
    for (const auto& [powers, ari] : cells) {
        if (!ari) throw ConfigError("heatmap: configuration '" + fixed_key + "' was not part of the search");
        rows.push_back({powers.first, powers.second, *ari});
    }
    return rows;
}

std::vector<SweepRow> export_k_linkage_sweep(const SearchResult& result) {
    std::map<std::pair<int, Linkage>, double> cells;
    for (const auto& e : result.ranked) {
        if (e.clustering.algorithm != Algorithm::agglomerative) continue;
        const auto [it, inserted] = cells.try_emplace({e.clustering.n_clusters, e.clustering.linkage}, e.train_ari);
        if (!inserted) it->second = std::max(it->second, e.train_ari);
    }
    if (cells.empty()) throw ConfigError("sweep: the search contained no agglomerative configuration");
    std::vector<SweepRow> rows;
    for (const auto& [key, ari] : cells) rows.push_back({key.first, key.second, ari});
    return rows;
}

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapRow>& rows) {
    out << "p_tfidf,p_chi2,ari\n";
    for (const auto& r : rows) out << fmt(r.p_tfidf) << ',' << fmt(r.p_chi2) << ',' << fmt(r.ari) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "n_clusters,linkage,ari\n";
    for (const auto& r : rows) out << r.n_clusters << ',' << to_string(r.linkage) << ',' << fmt(r.ari) << '\n';
}

void write_ranked(std::ostream& out, const SearchResult& result) {
    out << "rank\ttrain_ari\tconfig\n";
    for (std::size_t i = 0; i < result.ranked.size(); ++i)
        out << (i + 1) << '\t' << fmt(result.ranked[i].train_ari) << '\t' << result.ranked[i].key << '\n';
    for (const auto& x : result.excluded) out << "# excluded\t" << x << '\n';
}

}  // namespace wsi
