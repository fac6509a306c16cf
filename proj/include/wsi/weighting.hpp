#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wsi {

struct Dataset;

// Document frequencies over a background corpus.
struct IdfTable {
    std::size_t n_docs = 0;
    std::unordered_map<std::string, std::size_t> df;

    std::size_t doc_freq(const std::string& word) const;

    // ln((n_docs + 1) / (df + 1)) + 1; strictly positive, finite for unseen words.
    double idf(const std::string& word) const;
};

// Incremental builder: feed one tokenized document at a time.
class IdfBuilder {
public:
    void add_document(std::span<const std::string> tokens);
    std::size_t documents() const { return table_.n_docs; }
    IdfTable finish() &&;

private:
    IdfTable table_;
};

IdfTable build_idf(std::span<const std::vector<std::string>> docs);

// raw count of `token` in `context_tokens` times idf(token)
double tfidf_weight(const std::string& token, std::span<const std::string> context_tokens, const IdfTable& idf);

// Pearson chi-square of the 2x2 table [[a, b], [c, d]]:
//   a = contexts of the target containing w,   b = other targets' contexts containing w
//   c = contexts of the target without w,      d = other targets' contexts without w
// Zero whenever any margin is zero.
double chi2_statistic(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

// (target, context word) -> chi-square association. Only pairs that co-occur
// (a > 0) are stored; lookups for other pairs return 0.
struct Chi2Table {
    std::unordered_map<std::string, std::unordered_map<std::string, double>> values;
    // Set when the dataset had fewer than two targets (all statistics are 0).
    bool degenerate = false;

    double lookup(const std::string& target, const std::string& word) const;
    std::size_t size() const;
};

// Presence/absence per context, pooled over every target in the dataset.
// A context's own target forms are not counted as features.
Chi2Table build_chi2(const Dataset& dataset);

struct WeightingConfig {
    double p_tfidf = 1.0;
    double p_chi2 = 1.0;

    void validate() const;  // finite, within [0, 2.5]
};

// tfidf^p_tfidf * chi2^p_chi2 with x^0 == 1 for every x >= 0.
double combine(double tfidf, double chi2, const WeightingConfig& cfg);

// Cache formats: "# n_docs=<N>" then "word<TAB>df"; "target<TAB>word<TAB>chi2".
void write_idf(std::ostream& out, const IdfTable& idf);
void write_idf(const std::filesystem::path& path, const IdfTable& idf);
IdfTable read_idf(const std::filesystem::path& path);

void write_chi2(std::ostream& out, const Chi2Table& chi2);
void write_chi2(const std::filesystem::path& path, const Chi2Table& chi2);
Chi2Table read_chi2(const std::filesystem::path& path);

}  // namespace wsi
