#include "wsi/embedding_store.hpp"

#include "wsi/error.hpp"
#include "wsi/kernels.hpp"
#include "wsi/text.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace wsi {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_ws(line[i])) ++i;
        const std::size_t start = i;
        while (i < line.size() && !is_ws(line[i])) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

struct Header {
    std::size_t count = 0;
    std::size_t dim = 0;
};

Header parse_header(std::string_view line, const std::filesystem::path& path) {
    const auto parts = split_ws(line);
    Header h;
    if (parts.size() != 2 || !parse_number(parts[0], h.count) || !parse_number(parts[1], h.dim) || h.dim == 0)
        throw DataError(path.string() + ": malformed header '" + std::string(line) + "', expected \"<count> <dim>\"");
    return h;
}

void check_finite(std::span<const float> v, std::string_view word, const std::filesystem::path& path) {
    for (float x : v) {
        if (!std::isfinite(x))
            throw DataError(path.string() + ": non-finite component in vector for '" + std::string(word) + "'");
    }
}

float load_le_float(const char* p) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, p, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    return std::bit_cast<float>(bits);
}

EmbeddingModel load_text(const std::filesystem::path& path, const std::string& content) {
    std::size_t pos = content.find('\n');
    const Header h = parse_header(std::string_view(content).substr(0, pos), path);
    EmbeddingModel model(h.dim);
    std::vector<float> vec(h.dim);
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (pos != std::string::npos && pos < content.size()) {
        const std::size_t start = pos + 1;
        pos = content.find('\n', start);
        const std::string_view line = std::string_view(content).substr(
            start, pos == std::string::npos ? std::string::npos : pos - start);
        ++line_no;
        const auto parts = split_ws(line);
        if (parts.empty()) continue;
        if (parts.size() != h.dim + 1)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": vector length " +
                            std::to_string(parts.size() - 1) + " != " + std::to_string(h.dim));
        for (std::size_t d = 0; d < h.dim; ++d) {
            if (!parse_number(parts[d + 1], vec[d]))
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                                std::string(parts[d + 1]) + "'");
        }
        check_finite(vec, parts[0], path);
        if (!model.insert(parts[0], vec)) ++model.meta().duplicates;
        ++rows;
    }
    if (rows != h.count)
        throw DataError(path.string() + ": header declares " + std::to_string(h.count) + " entries but file has " +
                        std::to_string(rows));
    model.meta().declared_count = h.count;
    return model;
}

EmbeddingModel load_binary(const std::filesystem::path& path, const std::string& content) {
    const std::size_t nl = content.find('\n');
    if (nl == std::string::npos) throw DataError(path.string() + ": missing header line");
    const Header h = parse_header(std::string_view(content).substr(0, nl), path);
    EmbeddingModel model(h.dim);
    std::vector<float> vec(h.dim);
    const std::size_t bytes = h.dim * sizeof(float);
    std::size_t i = nl + 1;
    for (std::size_t row = 0; row < h.count; ++row) {
        while (i < content.size() && is_ws(content[i])) ++i;
        const std::size_t space = content.find(' ', i);
        if (i >= content.size() || space == std::string::npos)
            throw DataError(path.string() + ": header declares " + std::to_string(h.count) +
                            " entries but file has " + std::to_string(row));
        const std::string_view word = std::string_view(content).substr(i, space - i);
        i = space + 1;
        if (content.size() - i < bytes)
            throw DataError(path.string() + ": truncated vector for '" + std::string(word) + "'");
        for (std::size_t d = 0; d < h.dim; ++d) vec[d] = load_le_float(content.data() + i + d * sizeof(float));
        i += bytes;
        check_finite(vec, word, path);
        if (!model.insert(word, vec)) ++model.meta().duplicates;
    }
    while (i < content.size() && is_ws(content[i])) ++i;
    if (i != content.size())
        throw DataError(path.string() + ": data beyond the " + std::to_string(h.count) + " declared entries");
    model.meta().declared_count = h.count;
    return model;
}

}  // namespace

std::string_view to_string(EmbeddingFormat f) { return f == EmbeddingFormat::text ? "text" : "binary"; }

EmbeddingFormat parse_embedding_format(std::string_view s) {
    if (s == "text") return EmbeddingFormat::text;
    if (s == "binary") return EmbeddingFormat::binary;
    throw ConfigError("unknown embedding format '" + std::string(s) + "' (expected text or binary)");
}

EmbeddingFormat guess_embedding_format(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    return (ext == ".txt" || ext == ".vec" || ext == ".tsv") ? EmbeddingFormat::text : EmbeddingFormat::binary;
}

EmbeddingModel::EmbeddingModel(std::size_t dim) : dim_(dim) {}

bool EmbeddingModel::insert(std::string_view word, std::span<const float> vec) {
    if (vec.size() != dim_) throw DataError("vector length " + std::to_string(vec.size()) + " != model dim");
    std::string key = text::normalize(word);
    if (key.empty()) throw DataError("empty vocabulary entry");
    if (auto it = index_.find(key); it != index_.end()) {
        std::copy(vec.begin(), vec.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
        return false;
    }
    index_.emplace(key, words_.size());
    words_.push_back(std::move(key));
    data_.insert(data_.end(), vec.begin(), vec.end());
    return true;
}

std::optional<std::span<const float>> EmbeddingModel::lookup_normalized(std::string_view token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return vector_at(it->second);
}

std::optional<std::span<const float>> EmbeddingModel::lookup(std::string_view token) const {
    return lookup_normalized(text::normalize(token));
}

std::span<const float> EmbeddingModel::vector_at(std::size_t index) const {
    return std::span<const float>(data_).subspan(index * dim_, dim_);
}

EmbeddingModel load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
    const std::string content = read_file(path);
    EmbeddingModel model = format == EmbeddingFormat::text ? load_text(path, content) : load_binary(path, content);
    model.meta().source = path;
    model.meta().format = format;
    return model;
}

void FrequencyTable::add(std::string_view word, std::uint64_t count) { counts_[text::normalize(word)] += count; }

std::uint64_t FrequencyTable::count(std::string_view word) const {
    auto it = counts_.find(std::string(word));
    return it == counts_.end() ? 0 : it->second;
}

bool FrequencyTable::contains(std::string_view word) const { return counts_.contains(std::string(word)); }

FrequencyTable load_frequency_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    FrequencyTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view l = text::trim(line);
        if (l.empty()) continue;
        const auto cols = text::split(l, '\t');
        std::uint64_t count = 0;
        if (cols.size() != 2 || !parse_number(text::trim(cols[1]), count))
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected \"word<TAB>count\"");
        table.add(cols[0], count);
    }
    return table;
}

std::vector<NormRow> norm_frequency_report(const EmbeddingModel& model, const FrequencyTable& freqs,
                                           std::size_t sample_size, std::uint64_t seed) {
    if (model.empty()) throw DataError("norm report: embedding model is empty");
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < model.size(); ++i)
        if (freqs.contains(model.words()[i])) eligible.push_back(i);
    if (eligible.empty()) throw DataError("norm report: no word is both in the model and the frequency table");

    // Partial Fisher-Yates with rejection sampling so the draw sequence does
    // not depend on the standard library's distribution implementation.
    std::mt19937_64 rng(seed);
    const auto below = [&rng](std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t r = 0;
        do r = rng();
        while (r >= limit);
        return r % n;
    };
    const std::size_t take = std::min(sample_size, eligible.size());
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(below(eligible.size() - i));
        std::swap(eligible[i], eligible[j]);
    }

    std::vector<NormRow> rows;
    rows.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t idx = eligible[i];
        const std::string& w = model.words()[idx];
        rows.push_back({w, freqs.count(w), std::sqrt(kernels::sum_squares(model.vector_at(idx)))});
    }
    std::sort(rows.begin(), rows.end(), [](const NormRow& a, const NormRow& b) {
        return a.frequency != b.frequency ? a.frequency < b.frequency : a.word < b.word;
    });
    return rows;
}

void write_norm_report(std::ostream& out, std::span<const NormRow> rows) {
    out << "word\tfrequency\tl2_norm\n";
    char buf[64];
    for (const auto& r : rows) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, r.norm);
        out << r.word << '\t' << r.frequency << '\t' << std::string_view(buf, static_cast<std::size_t>(end - buf))
            << '\n';
    }
}

}  // namespace wsi
