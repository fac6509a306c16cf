#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wsi {

enum class EmbeddingFormat { text, binary };

std::string_view to_string(EmbeddingFormat f);
EmbeddingFormat parse_embedding_format(std::string_view s);

// word -> dense float vector, stored exactly as read (no unit normalization:
// unnormalized vectors carry a frequency signal in their length). Immutable
// after load; safe for concurrent readers.
class EmbeddingModel {
public:
    EmbeddingModel() = default;
    explicit EmbeddingModel(std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }

    // Adds or replaces (last wins) the vector for `word` after normalization.
    // Returns false if the word was already present.
    bool insert(std::string_view word, std::span<const float> vec);

    // Lookup after NFC + lowercase normalization of `token`.
    std::optional<std::span<const float>> lookup(std::string_view token) const;

    // Lookup of an already-normalized token (no allocation).
    std::optional<std::span<const float>> lookup_normalized(std::string_view token) const;

    // Words in first-insertion order.
    const std::vector<std::string>& words() const { return words_; }
    std::span<const float> vector_at(std::size_t index) const;

    struct Meta {
        std::filesystem::path source;
        EmbeddingFormat format = EmbeddingFormat::text;
        std::size_t declared_count = 0;
        std::size_t duplicates = 0;
    };
    const Meta& meta() const { return meta_; }
    Meta& meta() { return meta_; }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };

    std::size_t dim_ = 0;
    std::vector<std::string> words_;
    std::vector<float> data_;
    std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
    Meta meta_;
};

// Loads word2vec text ("V D" header, then "word v1 ... vD" lines) or binary
// (same header, then per word: token terminated by one space, D little-endian
// float32, optional trailing newline). Throws DataError on malformed header,
// wrong vector length, entry count != V, or non-finite components.
EmbeddingModel load_embeddings(const std::filesystem::path& path, EmbeddingFormat format);

// Text when the extension is .txt/.vec/.tsv, binary otherwise.
EmbeddingFormat guess_embedding_format(const std::filesystem::path& path);

// word -> occurrence count; absent words count 0.
class FrequencyTable {
public:
    void add(std::string_view word, std::uint64_t count);
    std::uint64_t count(std::string_view word) const;
    bool contains(std::string_view word) const;
    std::size_t size() const { return counts_.size(); }

private:
    std::unordered_map<std::string, std::uint64_t> counts_;
};

// Two-column TSV "word<TAB>count". Duplicate words (after normalization) sum.
FrequencyTable load_frequency_table(const std::filesystem::path& path);

struct NormRow {
    std::string word;
    std::uint64_t frequency = 0;
    double norm = 0.0;
};

// Uniform sample without replacement of min(sample_size, |vocab ∩ freqs|)
// words, deterministic for a given seed. Rows are sorted by (frequency, word).
std::vector<NormRow> norm_frequency_report(const EmbeddingModel& model, const FrequencyTable& freqs,
                                           std::size_t sample_size = 1000, std::uint64_t seed = 0);

void write_norm_report(std::ostream& out, std::span<const NormRow> rows);

}  // namespace wsi
