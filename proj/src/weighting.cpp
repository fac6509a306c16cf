#include "wsi/weighting.hpp"

#include "wsi/context_vectorizer.hpp"
#include "wsi/dataset_io.hpp"
#include "wsi/error.hpp"
#include "wsi/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace wsi {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

template <typename T>
bool parse_num(std::string_view s, T& out) {
    s = text::trim(s);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f << body;
}

}  // namespace

std::size_t IdfTable::doc_freq(const std::string& word) const {
    auto it = df.find(word);
    return it == df.end() ? 0 : it->second;
}

double IdfTable::idf(const std::string& word) const {
    return std::log((static_cast<double>(n_docs) + 1.0) / (static_cast<double>(doc_freq(word)) + 1.0)) + 1.0;
}

void IdfBuilder::add_document(std::span<const std::string> tokens) {
    ++table_.n_docs;
    std::unordered_set<std::string_view> seen;
    for (const auto& t : tokens) {
        if (seen.insert(t).second) ++table_.df[t];
    }
}

IdfTable IdfBuilder::finish() && {
    if (table_.n_docs == 0) throw DataError("idf: no documents");
    return std::move(table_);
}

IdfTable build_idf(std::span<const std::vector<std::string>> docs) {
    IdfBuilder b;
    for (const auto& d : docs) b.add_document(d);
    return std::move(b).finish();
}

double tfidf_weight(const std::string& token, std::span<const std::string> context_tokens, const IdfTable& idf) {
    const auto tf = std::count(context_tokens.begin(), context_tokens.end(), token);
    return static_cast<double>(tf) * idf.idf(token);
}

double chi2_statistic(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    const double ab = static_cast<double>(a + b);
    const double cd = static_cast<double>(c + d);
    const double ac = static_cast<double>(a + c);
    const double bd = static_cast<double>(b + d);
    if (ab == 0.0 || cd == 0.0 || ac == 0.0 || bd == 0.0) return 0.0;
    const double n = static_cast<double>(a + b + c + d);
    const double diff = static_cast<double>(a) * static_cast<double>(d) - static_cast<double>(b) * static_cast<double>(c);
    return n * diff * diff / (ab * cd * ac * bd);
}

double Chi2Table::lookup(const std::string& target, const std::string& word) const {
    auto t = values.find(target);
    if (t == values.end()) return 0.0;
    auto w = t->second.find(word);
    return w == t->second.end() ? 0.0 : w->second;
}

std::size_t Chi2Table::size() const {
    std::size_t n = 0;
    for (const auto& [t, m] : values) n += m.size();
    return n;
}

Chi2Table build_chi2(const Dataset& dataset) {
    Chi2Table table;
    const std::uint64_t total = dataset.instances.size();
    std::map<std::string, std::uint64_t> contexts_of;         // target -> #contexts
    std::unordered_map<std::string, std::uint64_t> with_word;  // word -> #contexts containing it
    std::map<std::string, std::unordered_map<std::string, std::uint64_t>> co;  // target -> word -> a

    for (const auto& inst : dataset.instances) {
        ++contexts_of[inst.target];
        std::unordered_set<std::string> present;
        for (auto& tok : exclude_target(inst.tokens, inst.target)) present.insert(std::move(tok));
        for (const auto& w : present) {
            ++with_word[w];
            ++co[inst.target][w];
        }
    }

    table.degenerate = contexts_of.size() < 2;
    for (const auto& [target, words] : co) {
        const std::uint64_t n_t = contexts_of[target];
        auto& row = table.values[target];
        for (const auto& [w, a] : words) {
            const std::uint64_t b = with_word[w] - a;
            const std::uint64_t c = n_t - a;
            const std::uint64_t d = total - n_t - b;
            row.emplace(w, table.degenerate ? 0.0 : chi2_statistic(a, b, c, d));
        }
    }
    return table;
}

void WeightingConfig::validate() const {
    const auto ok = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 2.5; };
    if (!ok(p_tfidf) || !ok(p_chi2))
        throw ConfigError("weight powers must lie in [0, 2.5] (got p_tfidf=" + fmt(p_tfidf) +
                          ", p_chi2=" + fmt(p_chi2) + ")");
}

double combine(double tfidf, double chi2, const WeightingConfig& cfg) {
    const double a = cfg.p_tfidf == 0.0 ? 1.0 : std::pow(tfidf, cfg.p_tfidf);
    const double b = cfg.p_chi2 == 0.0 ? 1.0 : std::pow(chi2, cfg.p_chi2);
    return a * b;
}

void write_idf(std::ostream& out, const IdfTable& idf) {
    out << "# n_docs=" << idf.n_docs << '\n';
    std::vector<std::pair<std::string_view, std::size_t>> rows(idf.df.begin(), idf.df.end());
    std::sort(rows.begin(), rows.end());
    for (const auto& [w, df] : rows) out << w << '\t' << df << '\n';
}

void write_idf(const std::filesystem::path& path, const IdfTable& idf) {
    std::ostringstream s;
    write_idf(s, idf);
    write_file(path, s.str());
}

IdfTable read_idf(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    IdfTable idf;
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (line.starts_with("#")) {
            const auto eq = line.find("n_docs=");
            if (eq == std::string::npos || !parse_num(std::string_view(line).substr(eq + 7), idf.n_docs))
                throw DataError(where + ": malformed header comment");
            have_header = true;
            continue;
        }
        const auto cols = text::split(line, '\t');
        std::size_t df = 0;
        if (cols.size() != 2 || !parse_num(cols[1], df)) throw DataError(where + ": expected \"word<TAB>df\"");
        idf.df[std::string(cols[0])] = df;
    }
    if (!have_header || idf.n_docs == 0) throw DataError(path.string() + ": missing or zero '# n_docs=' header");
    for (const auto& [w, df] : idf.df)
        if (df > idf.n_docs) throw DataError(path.string() + ": df of '" + w + "' exceeds n_docs");
    return idf;
}

void write_chi2(std::ostream& out, const Chi2Table& chi2) {
    if (chi2.degenerate) out << "# degenerate=1\n";
    std::vector<std::string_view> targets;
    for (const auto& [t, m] : chi2.values) targets.push_back(t);
    std::sort(targets.begin(), targets.end());
    for (auto t : targets) {
        const auto& m = chi2.values.at(std::string(t));
        std::vector<std::pair<std::string_view, double>> rows(m.begin(), m.end());
        std::sort(rows.begin(), rows.end());
        for (const auto& [w, v] : rows) out << t << '\t' << w << '\t' << fmt(v) << '\n';
    }
}

void write_chi2(const std::filesystem::path& path, const Chi2Table& chi2) {
    std::ostringstream s;
    write_chi2(s, chi2);
    write_file(path, s.str());
}

Chi2Table read_chi2(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    Chi2Table chi2;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.starts_with("#")) {
            if (line.find("degenerate=1") != std::string::npos) chi2.degenerate = true;
            continue;
        }
        const auto cols = text::split(line, '\t');
        double v = 0.0;
        if (cols.size() != 3 || !parse_num(cols[2], v) || !(v >= 0.0) || !std::isfinite(v))
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected \"target<TAB>word<TAB>chi2\"");
        chi2.values[std::string(cols[0])][std::string(cols[1])] = v;
    }
    return chi2;
}

}  // namespace wsi
