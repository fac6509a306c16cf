#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsi/dataset_io.hpp"

namespace wsi {

// Porter (1980) suffix stripping, steps 1a through 5b, following Martin
// Porter's reference C implementation (including its "bli" -> "ble" and
// "logi" -> "log" rules). Words of length <= 2 and words containing any
// non-ASCII byte are returned unchanged.
std::string porter_stem(std::string_view word);

enum class StemmerKind { identity, porter };

StemmerKind parse_stemmer(std::string_view s);
std::string_view to_string(StemmerKind s);

struct Stemmer {
    StemmerKind kind = StemmerKind::identity;

    // Stems each space-separated token; spacing is preserved verbatim.
    std::string apply(std::string_view phrase) const;
};

struct TranslationRecord {
    std::string context_id;
    std::vector<std::string> translations;  // one per target occurrence
};

// Sidecar TSV "context_id<TAB>translation[,translation...]".
std::vector<TranslationRecord> read_translations(const std::filesystem::path& path);
std::vector<TranslationRecord> parse_translations(std::string_view content, std::string_view source = "<memory>");

// Lowercase, stem, majority vote (ties -> lexicographically smallest); the
// winning form is the context's sense label.
Labeling label_by_translation(std::span<const TranslationRecord> records, const Stemmer& stemmer);

}  // namespace wsi
