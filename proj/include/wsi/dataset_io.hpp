#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wsi {

// One context of an ambiguous target word.
struct ContextInstance {
    std::string context_id;
    std::string target;                       // normalized (NFC + lowercase)
    std::optional<std::string> gold_sense;    // empty column -> nullopt
    std::vector<std::pair<std::size_t, std::size_t>> target_spans;  // code points, [start, end)
    std::string raw_context;
    std::vector<std::string> tokens;
};

// context_id -> predicted sense label
struct Labeling {
    std::map<std::string, std::string> assignments;

    const std::string* find(const std::string& context_id) const;
};

struct Dataset {
    std::vector<ContextInstance> instances;
    std::map<std::string, std::vector<std::size_t>> by_target;

    // Non-fatal problems found while parsing (span/target disagreement).
    std::vector<std::string> warnings;

    // Verbatim header and cells, so write_predictions reproduces every column.
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::size_t predict_column = 0;

    bool has_gold() const;
};

inline constexpr const char* kDatasetColumns[] = {"context_id",       "word",      "gold_sense_id",
                                                  "predict_sense_id", "positions", "context"};

// Parses the tab-separated dataset format (header row naming at least the
// six columns above, UTF-8, LF or CRLF). Throws DataError on a missing
// column, short row, malformed or out-of-range positions, or a duplicate
// context_id.
Dataset parse_dataset(const std::filesystem::path& path);
Dataset parse_dataset_string(std::string_view content, std::string_view source = "<memory>");

// "54-59,70-75" -> {(54,59),(70,75)}
std::vector<std::pair<std::size_t, std::size_t>> parse_positions(std::string_view s);

// Writes the dataset with predict_sense_id filled from `labels`, rows in
// input order. Throws DataError naming the first context without a label.
void write_predictions(const Dataset& dataset, const Labeling& labels, const std::filesystem::path& out);
void write_predictions(const Dataset& dataset, const Labeling& labels, std::ostream& out);

std::vector<std::string> tokenize(std::string_view text);

}  // namespace wsi
