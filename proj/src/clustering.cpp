#include "wsi/clustering.hpp"

#include "wsi/error.hpp"
#include "wsi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>

namespace wsi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::string fmt_fixed(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void check_points(PointSet points) {
    if (points.empty()) throw DataError("clustering: no points");
    const std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim) throw DataError("clustering: points differ in dimension");
}

// Dense symmetric matrix.
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::size_t size() const { return n_; }
    std::span<double> row(std::size_t i) { return std::span<double>(data_).subspan(i * n_, n_); }

private:
    std::size_t n_;
    std::vector<double> data_;
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::string_view to_string(Algorithm a) {
    return a == Algorithm::agglomerative ? "agglomerative" : "affinity_propagation";
}

std::string_view to_string(Linkage l) {
    switch (l) {
        case Linkage::ward: return "ward";
        case Linkage::average: return "average";
        case Linkage::complete: return "complete";
    }
    return "?";
}

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::euclidean: return "euclidean";
        case Metric::manhattan: return "manhattan";
        case Metric::cosine: return "cosine";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view s) {
    if (s == "agglomerative") return Algorithm::agglomerative;
    if (s == "affinity_propagation" || s == "affinity-propagation" || s == "ap") return Algorithm::affinity_propagation;
    throw ConfigError("unknown clustering algorithm '" + std::string(s) + "'");
}

Linkage parse_linkage(std::string_view s) {
    if (s == "ward") return Linkage::ward;
    if (s == "average") return Linkage::average;
    if (s == "complete") return Linkage::complete;
    throw ConfigError("unknown linkage '" + std::string(s) + "' (expected ward, average or complete)");
}

Metric parse_metric(std::string_view s) {
    if (s == "euclidean" || s == "l2") return Metric::euclidean;
    if (s == "manhattan" || s == "l1") return Metric::manhattan;
    if (s == "cosine") return Metric::cosine;
    throw ConfigError("unknown metric '" + std::string(s) + "' (expected euclidean, manhattan or cosine)");
}

void ClusteringConfig::validate() const {
    if (algorithm == Algorithm::agglomerative) {
        if (n_clusters < 1) throw ConfigError("n_clusters must be >= 1");
        if (linkage == Linkage::ward && metric != Metric::euclidean)
            throw ConfigError("ward linkage requires the euclidean metric (got " + std::string(to_string(metric)) + ")");
    } else {
        if (!(damping >= 0.5 && damping < 1.0)) throw ConfigError("damping must lie in [0.5, 1)");
        if (preference && !std::isfinite(*preference)) throw ConfigError("preference must be finite");
        if (max_iter < 1) throw ConfigError("max_iter must be positive");
        if (convergence_window < 1) throw ConfigError("convergence_window must be positive");
    }
}

std::string ClusteringConfig::serialize() const {
    std::string s(to_string(algorithm));
    if (algorithm == Algorithm::agglomerative) {
        char k[16];
        std::snprintf(k, sizeof k, "%02d", n_clusters);
        s += ";k=" + std::string(k) + ";linkage=" + std::string(to_string(linkage)) +
             ";metric=" + std::string(to_string(metric));
    } else {
        s += ";damping=" + fmt_fixed(damping) + ";preference=" + (preference ? fmt_fixed(*preference) : "auto");
    }
    return s;
}

double distance(Metric metric, std::span<const double> x, std::span<const double> y) {
    switch (metric) {
        case Metric::euclidean: return std::sqrt(kernels::squared_l2(x, y));
        case Metric::manhattan: return kernels::l1(x, y);
        case Metric::cosine: {
            const double nx = kernels::dot(x, x);
            const double ny = kernels::dot(y, y);
            if (nx == 0.0 || ny == 0.0) return 1.0;
            return 1.0 - kernels::dot(x, y) / (std::sqrt(nx) * std::sqrt(ny));
        }
    }
    return 0.0;
}

std::vector<int> canonical_labels(std::span<const int> labels) {
    std::vector<int> out(labels.size());
    std::vector<std::pair<int, int>> seen;  // original -> canonical
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& p) { return p.first == labels[i]; });
        if (it == seen.end()) {
            seen.emplace_back(labels[i], static_cast<int>(seen.size()));
            out[i] = seen.back().second;
        } else {
            out[i] = it->second;
        }
    }
    return out;
}

std::vector<Merge> build_dendrogram(PointSet points, Linkage linkage, Metric metric) {
    check_points(points);
    if (linkage == Linkage::ward && metric != Metric::euclidean)
        throw ConfigError("ward linkage requires the euclidean metric");
    const std::size_t n = points.size();

    // Ward runs Lance-Williams on squared euclidean distances, so two
    // singletons start at ||x - y||^2 and cluster distances equal
    // 2 * na * nb / (na + nb) * ||ca - cb||^2.
    SquareMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = linkage == Linkage::ward ? kernels::squared_l2(points[i], points[j])
                                                      : distance(metric, points[i], points[j]);
            d(i, j) = v;
            d(j, i) = v;
        }
    }

    std::vector<std::size_t> size(n, 1);
    std::vector<char> active(n, 1);
    std::vector<std::size_t> nn(n, kNone);
    std::vector<double> nnd(n, kInf);

    const auto rescan = [&](std::size_t r) {
        nn[r] = kNone;
        nnd[r] = kInf;
        for (std::size_t c = r + 1; c < n; ++c) {
            if (active[c] && d(r, c) < nnd[r]) {
                nnd[r] = d(r, c);
                nn[r] = c;
            }
        }
    };
    for (std::size_t r = 0; r < n; ++r) rescan(r);

    std::vector<Merge> merges;
    merges.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t a = kNone;
        double best = kInf;
        for (std::size_t r = 0; r < n; ++r) {
            if (active[r] && nn[r] != kNone && (a == kNone || nnd[r] < best)) {
                best = nnd[r];
                a = r;
            }
        }
        const std::size_t b = nn[a];
        const double dab = d(a, b);
        merges.push_back({a, b, linkage == Linkage::ward ? std::sqrt(std::max(0.0, dab)) : dab});

        const double na = static_cast<double>(size[a]);
        const double nb = static_cast<double>(size[b]);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a || k == b) continue;
            const double nk = static_cast<double>(size[k]);
            double v = 0.0;
            switch (linkage) {
                case Linkage::complete: v = std::max(d(k, a), d(k, b)); break;
                case Linkage::average: v = (na * d(k, a) + nb * d(k, b)) / (na + nb); break;
                case Linkage::ward:
                    v = ((na + nk) * d(k, a) + (nb + nk) * d(k, b) - nk * dab) / (na + nb + nk);
                    break;
            }
            d(k, a) = v;
            d(a, k) = v;
        }
        size[a] += size[b];
        active[b] = 0;
        nn[b] = kNone;

        rescan(a);
        for (std::size_t r = 0; r < a; ++r) {
            if (!active[r]) continue;
            if (nn[r] == a || nn[r] == b) {
                rescan(r);
            } else if (d(r, a) < nnd[r] || (d(r, a) == nnd[r] && a < nn[r])) {
                nnd[r] = d(r, a);
                nn[r] = a;
            }
        }
        for (std::size_t r = a + 1; r < b; ++r)
            if (active[r] && nn[r] == b) rescan(r);
    }
    return merges;
}

std::vector<int> cut_dendrogram(std::span<const Merge> merges, std::size_t n_points, std::size_t k) {
    std::vector<std::size_t> parent(n_points);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    const std::size_t apply = k >= n_points ? 0 : std::min(merges.size(), n_points - k);
    for (std::size_t m = 0; m < apply; ++m) parent[find(merges[m].b)] = find(merges[m].a);
    std::vector<int> roots(n_points);
    for (std::size_t i = 0; i < n_points; ++i) roots[i] = static_cast<int>(find(i));
    return canonical_labels(roots);
}

ClusterResult agglomerative(PointSet points, const ClusteringConfig& cfg) {
    if (cfg.algorithm != Algorithm::agglomerative) throw ConfigError("agglomerative: wrong algorithm in config");
    cfg.validate();
    check_points(points);
    const std::size_t n = points.size();
    ClusterResult res;
    std::size_t k = static_cast<std::size_t>(cfg.n_clusters);
    if (k > n) {
        k = n;
        res.clamped = true;
    }
    std::vector<Merge> merges = build_dendrogram(points, cfg.linkage, cfg.metric);
    res.labels = cut_dendrogram(merges, n, k);
    merges.resize(n - k);
    res.merge_trace = std::move(merges);
    res.k = static_cast<int>(k);
    return res;
}

ClusterResult affinity_propagation(PointSet points, const ClusteringConfig& cfg) {
    if (cfg.algorithm != Algorithm::affinity_propagation)
        throw ConfigError("affinity_propagation: wrong algorithm in config");
    cfg.validate();
    check_points(points);
    const std::size_t n = points.size();
    ClusterResult res;
    if (n == 1) {
        res.labels = {0};
        res.k = 1;
        res.exemplars = {0};
        res.converged = true;
        return res;
    }

    SquareMatrix s(n);
    std::vector<double> off;
    off.reserve(n * (n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            s(i, j) = -kernels::squared_l2(points[i], points[j]);
            off.push_back(s(i, j));
        }
    }
    double pref = 0.0;
    if (cfg.preference) {
        pref = *cfg.preference;
    } else {
        std::sort(off.begin(), off.end());
        const std::size_t m = off.size();
        pref = m % 2 ? off[m / 2] : 0.5 * (off[m / 2 - 1] + off[m / 2]);
    }
    for (std::size_t i = 0; i < n; ++i) s(i, i) = pref;

    // All similarities and preferences equal: message passing has no signal.
    const auto [lo, hi] = std::minmax_element(off.begin(), off.end());
    if (*lo == *hi && pref == *lo) {
        res.labels.assign(n, 0);
        res.k = 1;
        res.exemplars = {0};
        res.converged = true;
        return res;
    }
    if (*lo == *hi && pref > *lo) {
        res.labels.resize(n);
        std::iota(res.labels.begin(), res.labels.end(), 0);
        res.exemplars.resize(n);
        std::iota(res.exemplars.begin(), res.exemplars.end(), std::size_t{0});
        res.k = static_cast<int>(n);
        res.converged = true;
        return res;
    }

    // Exact ties for a row maximum can make the updates oscillate; break them
    // with deterministic index-dependent noise far below the data scale.
    bool tied = false;
    for (std::size_t i = 0; i < n && !tied; ++i) {
        const auto row = s.row(i);
        const double mx = *std::max_element(row.begin(), row.end());
        tied = std::count(row.begin(), row.end(), mx) > 1;
    }
    if (tied) {
        const double range = std::max(*hi, pref) - std::min(*lo, pref);
        const double scale = 1e-12 * (range > 0.0 ? range : 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                s(i, j) += scale * static_cast<double>(splitmix64(i * n + j) >> 11) * 0x1.0p-53;
        res.jitter_applied = true;
    }

    SquareMatrix r(n);
    SquareMatrix a(n);
    const double damp = cfg.damping;
    std::vector<char> exemplar(n, 0);
    std::vector<char> prev(n, 0);
    int stable = 0;
    int it = 0;
    bool converged = false;
    for (it = 1; it <= cfg.max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double max1 = -kInf;
            double max2 = -kInf;
            std::size_t arg = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const double v = a(i, k) + s(i, k);
                if (v > max1) {
                    max2 = max1;
                    max1 = v;
                    arg = k;
                } else if (v > max2) {
                    max2 = v;
                }
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double fresh = s(i, k) - (k == arg ? max2 : max1);
                r(i, k) = damp * r(i, k) + (1.0 - damp) * fresh;
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            double pos = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (i != k) pos += std::max(0.0, r(i, k));
            for (std::size_t i = 0; i < n; ++i) {
                const double fresh = i == k ? pos : std::min(0.0, r(k, k) + pos - std::max(0.0, r(i, k)));
                a(i, k) = damp * a(i, k) + (1.0 - damp) * fresh;
            }
        }

        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            exemplar[i] = (a(i, i) + r(i, i)) > 0.0;
            count += static_cast<std::size_t>(exemplar[i]);
        }
        stable = (exemplar == prev) ? stable + 1 : 1;
        prev = exemplar;
        if (stable >= cfg.convergence_window && count > 0) {
            converged = true;
            break;
        }
    }
    res.iterations = std::min(it, cfg.max_iter);
    res.converged = converged;

    std::vector<std::size_t> centers;
    for (std::size_t i = 0; i < n; ++i)
        if (exemplar[i]) centers.push_back(i);
    if (centers.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (a(i, i) + r(i, i) > a(best, best) + r(best, best)) best = i;
        centers.push_back(best);
    }

    std::vector<int> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t pick = 0;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (centers[c] == i) {
                pick = c;
                break;
            }
            if (s(i, centers[c]) > s(i, centers[pick])) pick = c;
        }
        raw[i] = static_cast<int>(pick);
    }
    res.labels = canonical_labels(raw);
    res.k = static_cast<int>(centers.size());
    res.exemplars.assign(centers.size(), 0);
    for (std::size_t i = 0; i < n; ++i) res.exemplars[static_cast<std::size_t>(res.labels[i])] = centers[static_cast<std::size_t>(raw[i])];
    return res;
}

ClusterResult cluster(PointSet points, const ClusteringConfig& cfg) {
    cfg.validate();
    return cfg.algorithm == Algorithm::agglomerative ? agglomerative(points, cfg) : affinity_propagation(points, cfg);
}

}  // namespace wsi
