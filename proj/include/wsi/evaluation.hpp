#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wsi {

struct Dataset;
struct Labeling;

// Adjusted Rand Index over the pair-counting contingency table. When the
// expected and maximum index coincide (both partitions trivial) the result is
// 1.0 for identical partitions and 0.0 otherwise. Throws DataError on empty
// input or length mismatch.
double adjusted_rand_index(std::span<const int> gold, std::span<const int> pred);
double adjusted_rand_index(std::span<const std::string> gold, std::span<const std::string> pred);

struct WordScore {
    std::string target;
    std::size_t n_contexts = 0;
    double ari = 0.0;
};

struct EvalReport {
    std::vector<WordScore> per_word;  // sorted by target
    double aggregate_weighted = 0.0;  // sum(ari * n) / sum(n)
    double aggregate_macro = 0.0;     // mean of per-word ARI
    std::size_t excluded_without_gold = 0;
};

// Per-target ARI over gold-labeled instances. Throws DataError when a gold
// instance has no prediction or when no instance carries a gold sense.
EvalReport evaluate(const Dataset& dataset, const Labeling& labels);

// TSV "word<TAB>n<TAB>ari" plus "# weighted_ari" / "# macro_ari" footer lines.
void write_eval_report(std::ostream& out, const EvalReport& report);

struct ConfusionMatrix {
    std::vector<std::string> gold_labels;  // rows
    std::vector<std::string> pred_labels;  // columns
    std::vector<std::vector<std::size_t>> counts;

    std::size_t total() const;
};

// Labels are sorted numerically when both are integers, lexicographically otherwise.
ConfusionMatrix confusion_matrix(std::span<const std::string> gold, std::span<const std::string> pred);

// CSV with a header row of predicted labels and a leading gold-label column.
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m);

}  // namespace wsi
