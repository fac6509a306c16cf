#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsi {

class EmbeddingModel;
struct ContextInstance;
struct Dataset;
struct IdfTable;
struct Chi2Table;
struct WeightingConfig;

// Grammatical-form test for the target word: the token and the target share a
// code-point prefix of at least min(len(target), max(4, len(target) - 2)).
// Russian inflection is suffixal, so "банках"/"банки" match "банка" while
// "бак" does not.
bool is_target_form(std::string_view token, std::string_view target);

// Removes every token that is a form of `target`; order of the rest is kept.
std::vector<std::string> exclude_target(std::span<const std::string> tokens, std::string_view target);

struct ContextVector {
    std::string context_id;
    std::vector<double> v;           // unit length, or all zeros when nothing contributed
    std::size_t n_contributing = 0;  // tokens with an embedding and a positive weight

    bool empty() const { return n_contributing == 0; }
};

// One token occurrence with its embedding and raw (unnormalized) weight.
struct WeightedEmbedding {
    std::span<const float> embedding;
    double weight = 0.0;
};

// Per-occurrence raw weights for the non-target tokens of `instance` that have
// an embedding: combine(tfidf, chi2(target, token), cfg).
std::vector<WeightedEmbedding> weighted_tokens(const ContextInstance& instance, const EmbeddingModel& model,
                                               const IdfTable& idf, const Chi2Table& chi2,
                                               const WeightingConfig& cfg);

// L2-normalizes the weights, sums weight * embedding, then L2-normalizes the sum.
// Scaling all weights by c > 0 does not change the result.
std::vector<double> weighted_average(std::span<const WeightedEmbedding> tokens, std::size_t dim,
                                     std::size_t* n_contributing = nullptr);

ContextVector vectorize(const ContextInstance& instance, const EmbeddingModel& model, const IdfTable& idf,
                        const Chi2Table& chi2, const WeightingConfig& cfg);

// Vectorizes dataset.instances in order; identical for any `jobs`.
std::vector<ContextVector> vectorize_all(const Dataset& dataset, const EmbeddingModel& model, const IdfTable& idf,
                                         const Chi2Table& chi2, const WeightingConfig& cfg, unsigned jobs = 1);

// "context_id<TAB>v1 ... vd"
void write_vectors(std::ostream& out, std::span<const ContextVector> vectors);

}  // namespace wsi
