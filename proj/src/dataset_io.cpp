#include "wsi/dataset_io.hpp"

#include "wsi/context_vectorizer.hpp"
#include "wsi/error.hpp"
#include "wsi/text.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace wsi {

namespace {

enum Col { kId, kWord, kGold, kPredict, kPositions, kContext, kNumCols };

bool parse_index(std::string_view s, std::size_t& out) {
    s = text::trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

const std::string* Labeling::find(const std::string& context_id) const {
    auto it = assignments.find(context_id);
    return it == assignments.end() ? nullptr : &it->second;
}

bool Dataset::has_gold() const {
    for (const auto& inst : instances)
        if (inst.gold_sense) return true;
    return false;
}

std::vector<std::string> tokenize(std::string_view s) { return text::tokenize(s); }

std::vector<std::pair<std::size_t, std::size_t>> parse_positions(std::string_view s) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    s = text::trim(s);
    if (s.empty()) return spans;
    for (std::string_view part : text::split(s, ',')) {
        part = text::trim(part);
        const std::size_t dash = part.find('-');
        std::size_t start = 0;
        std::size_t end = 0;
        if (dash == std::string_view::npos || !parse_index(part.substr(0, dash), start) ||
            !parse_index(part.substr(dash + 1), end) || start >= end)
            throw DataError("malformed position '" + std::string(part) + "'");
        spans.emplace_back(start, end);
    }
    return spans;
}

Dataset parse_dataset_string(std::string_view content, std::string_view source) {
    const std::string src(source);
    std::vector<std::string_view> lines = text::split(content, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (lines.empty()) throw DataError(src + ": empty dataset file");

    Dataset ds;
    for (auto h : text::split(lines[0], '\t')) ds.header.emplace_back(text::trim(h));
    std::array<std::size_t, kNumCols> col{};
    for (int c = 0; c < kNumCols; ++c) {
        bool found = false;
        for (std::size_t j = 0; j < ds.header.size(); ++j) {
            if (ds.header[j] == kDatasetColumns[c]) {
                col[c] = j;
                found = true;
                break;
            }
        }
        if (!found) throw DataError(src + ": missing column '" + kDatasetColumns[c] + "'");
    }
    ds.predict_column = col[kPredict];

    std::set<std::string, std::less<>> seen;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::size_t row_no = li + 1;
        const std::string where = src + ": row " + std::to_string(row_no);
        if (lines[li].empty()) continue;
        auto cells_v = text::split(lines[li], '\t');
        if (cells_v.size() < ds.header.size())
            throw DataError(where + ": expected " + std::to_string(ds.header.size()) + " columns, got " +
                            std::to_string(cells_v.size()) + " (missing '" +
                            ds.header[cells_v.size()] + "')");
        if (cells_v.size() > ds.header.size())
            throw DataError(where + ": expected " + std::to_string(ds.header.size()) + " columns, got " +
                            std::to_string(cells_v.size()));
        std::vector<std::string> cells(cells_v.begin(), cells_v.end());

        ContextInstance inst;
        inst.context_id = cells[col[kId]];
        if (inst.context_id.empty()) throw DataError(where + ": empty context_id");
        if (!seen.insert(inst.context_id).second)
            throw DataError(where + ": duplicate context_id '" + inst.context_id + "'");
        inst.target = text::normalize(text::trim(cells[col[kWord]]));
        if (const auto g = text::trim(cells[col[kGold]]); !g.empty()) inst.gold_sense = std::string(g);
        inst.raw_context = cells[col[kContext]];
        try {
            inst.target_spans = parse_positions(cells[col[kPositions]]);
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
        const std::size_t len = text::length(inst.raw_context);
        for (const auto& [s, e] : inst.target_spans) {
            if (e > len)
                throw DataError(where + ": position " + std::to_string(s) + "-" + std::to_string(e) +
                                " exceeds context length " + std::to_string(len));
            const std::string surface = text::clean_token(text::substr(inst.raw_context, s, e));
            if (!is_target_form(surface, inst.target))
                ds.warnings.push_back(where + ": span " + std::to_string(s) + "-" + std::to_string(e) + " ('" +
                                      surface + "') does not match target '" + inst.target + "'");
        }
        if (inst.target_spans.empty()) ds.warnings.push_back(where + ": no target positions");
        inst.tokens = text::tokenize(inst.raw_context);

        ds.by_target[inst.target].push_back(ds.instances.size());
        ds.instances.push_back(std::move(inst));
        ds.rows.push_back(std::move(cells));
    }
    return ds;
}

Dataset parse_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_dataset_string(content, path.string());
}

void write_predictions(const Dataset& dataset, const Labeling& labels, std::ostream& out) {
    for (const auto& inst : dataset.instances) {
        if (labels.find(inst.context_id) == nullptr)
            throw DataError("no predicted label for context '" + inst.context_id + "'");
    }
    const auto write_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j) out << '\t';
            out << cells[j];
        }
        out << '\n';
    };
    write_row(dataset.header);
    for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
        std::vector<std::string> cells = dataset.rows[i];
        cells[dataset.predict_column] = *labels.find(dataset.instances[i].context_id);
        write_row(cells);
    }
}

void write_predictions(const Dataset& dataset, const Labeling& labels, const std::filesystem::path& out) {
    std::ostringstream buf;
    write_predictions(dataset, labels, buf);
    std::ofstream f(out, std::ios::binary);
    if (!f) throw DataError("cannot write " + out.string());
    f << buf.str();
}

}  // namespace wsi
