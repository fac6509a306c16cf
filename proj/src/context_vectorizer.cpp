#include "wsi/context_vectorizer.hpp"

#include "wsi/dataset_io.hpp"
#include "wsi/embedding_store.hpp"
#include "wsi/kernels.hpp"
#include "wsi/parallel.hpp"
#include "wsi/text.hpp"
#include "wsi/weighting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <unordered_map>

namespace wsi {

bool is_target_form(std::string_view token, std::string_view target) {
    const std::size_t len = text::length(target);
    if (len == 0 || token.empty()) return false;
    const std::size_t need = std::min(len, std::max<std::size_t>(4, len >= 2 ? len - 2 : 0));
    return text::common_prefix_length(token, target) >= need;
}

std::vector<std::string> exclude_target(std::span<const std::string> tokens, std::string_view target) {
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (const auto& t : tokens)
        if (!is_target_form(t, target)) kept.push_back(t);
    return kept;
}

std::vector<WeightedEmbedding> weighted_tokens(const ContextInstance& instance, const EmbeddingModel& model,
                                               const IdfTable& idf, const Chi2Table& chi2,
                                               const WeightingConfig& cfg) {
    const std::vector<std::string> tokens = exclude_target(instance.tokens, instance.target);
    std::unordered_map<std::string_view, double> weight_of;
    std::vector<WeightedEmbedding> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) {
        const auto emb = model.lookup_normalized(tok);
        if (!emb) continue;
        auto it = weight_of.find(tok);
        if (it == weight_of.end()) {
            const double w = combine(tfidf_weight(tok, tokens, idf), chi2.lookup(instance.target, tok), cfg);
            it = weight_of.emplace(tok, w).first;
        }
        out.push_back({*emb, it->second});
    }
    return out;
}

std::vector<double> weighted_average(std::span<const WeightedEmbedding> tokens, std::size_t dim,
                                     std::size_t* n_contributing) {
    std::vector<double> v(dim, 0.0);
    double wmax = 0.0;
    std::size_t contributing = 0;
    for (const auto& t : tokens) {
        if (t.weight > 0.0) {
            wmax = std::max(wmax, t.weight);
            ++contributing;
        }
    }
    if (n_contributing) *n_contributing = contributing;
    if (contributing == 0 || !std::isfinite(wmax)) return v;

    // Pre-scaling by the largest weight keeps the squared sum in range.
    double wnorm2 = 0.0;
    for (const auto& t : tokens) {
        if (t.weight > 0.0) {
            const double r = t.weight / wmax;
            wnorm2 += r * r;
        }
    }
    const double wnorm = std::sqrt(wnorm2);
    for (const auto& t : tokens)
        if (t.weight > 0.0) kernels::axpy(t.weight / wmax / wnorm, t.embedding, v);

    const double vnorm = std::sqrt(kernels::dot(v, v));
    if (vnorm > 0.0) kernels::scale(1.0 / vnorm, v);
    return v;
}

ContextVector vectorize(const ContextInstance& instance, const EmbeddingModel& model, const IdfTable& idf,
                        const Chi2Table& chi2, const WeightingConfig& cfg) {
    ContextVector cv;
    cv.context_id = instance.context_id;
    const auto tokens = weighted_tokens(instance, model, idf, chi2, cfg);
    cv.v = weighted_average(tokens, model.dim(), &cv.n_contributing);
    return cv;
}

std::vector<ContextVector> vectorize_all(const Dataset& dataset, const EmbeddingModel& model, const IdfTable& idf,
                                         const Chi2Table& chi2, const WeightingConfig& cfg, unsigned jobs) {
    std::vector<ContextVector> out(dataset.instances.size());
    parallel_for(out.size(), jobs,
                 [&](std::size_t i) { out[i] = vectorize(dataset.instances[i], model, idf, chi2, cfg); });
    return out;
}

void write_vectors(std::ostream& out, std::span<const ContextVector> vectors) {
    char buf[32];
    for (const auto& cv : vectors) {
        out << cv.context_id << '\t';
        for (std::size_t i = 0; i < cv.v.size(); ++i) {
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, cv.v[i]);
            if (i) out << ' ';
            out << std::string_view(buf, static_cast<std::size_t>(end - buf));
        }
        out << '\n';
    }
}

}  // namespace wsi
