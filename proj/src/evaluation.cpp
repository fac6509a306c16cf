#include "wsi/evaluation.hpp"

#include "wsi/clustering.hpp"
#include "wsi/dataset_io.hpp"
#include "wsi/error.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <unordered_map>

namespace wsi {

namespace {

template <typename L>
std::vector<int> encode(std::span<const L> labels) {
    std::vector<int> out(labels.size());
    std::map<L, int> ids;
    for (std::size_t i = 0; i < labels.size(); ++i)
        out[i] = ids.emplace(labels[i], static_cast<int>(ids.size())).first->second;
    return out;
}

__extension__ typedef __int128 i128;

i128 pairs(i128 n) { return n * (n - 1) / 2; }

bool parse_int(const std::string& s, long long& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

bool label_less(const std::string& a, const std::string& b) {
    long long x = 0;
    long long y = 0;
    const bool nx = parse_int(a, x);
    const bool ny = parse_int(b, y);
    if (nx && ny && x != y) return x < y;
    if (nx && ny) return a < b;
    if (nx != ny) return nx;
    return a < b;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

std::string fmt(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

double adjusted_rand_index(std::span<const int> gold, std::span<const int> pred) {
    if (gold.size() != pred.size())
        throw DataError("ari: label lists differ in length (" + std::to_string(gold.size()) + " vs " +
                        std::to_string(pred.size()) + ")");
    if (gold.empty()) throw DataError("ari: empty label lists");

    std::map<std::pair<int, int>, i128> cells;
    std::unordered_map<int, i128> rows;
    std::unordered_map<int, i128> cols;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        ++cells[{gold[i], pred[i]}];
        ++rows[gold[i]];
        ++cols[pred[i]];
    }
    i128 index = 0;
    for (const auto& [key, c] : cells) index += pairs(c);
    i128 sum_a = 0;
    for (const auto& [key, c] : rows) sum_a += pairs(c);
    i128 sum_b = 0;
    for (const auto& [key, c] : cols) sum_b += pairs(c);
    const i128 total = pairs(static_cast<i128>(gold.size()));

    // ARI = (index - sa*sb/T) / ((sa+sb)/2 - sa*sb/T), scaled by 2T to stay integral.
    const i128 num = 2 * (index * total - sum_a * sum_b);
    const i128 den = (sum_a + sum_b) * total - 2 * sum_a * sum_b;
    if (den == 0) return canonical_labels(gold) == canonical_labels(pred) ? 1.0 : 0.0;
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

double adjusted_rand_index(std::span<const std::string> gold, std::span<const std::string> pred) {
    if (gold.size() != pred.size())
        throw DataError("ari: label lists differ in length (" + std::to_string(gold.size()) + " vs " +
                        std::to_string(pred.size()) + ")");
    const auto g = encode(gold);
    const auto p = encode(pred);
    return adjusted_rand_index(std::span<const int>(g), std::span<const int>(p));
}

EvalReport evaluate(const Dataset& dataset, const Labeling& labels) {
    EvalReport report;
    double weighted_sum = 0.0;
    std::size_t n_total = 0;
    for (const auto& [target, idx] : dataset.by_target) {
        std::vector<std::string> gold;
        std::vector<std::string> pred;
        for (std::size_t i : idx) {
            const auto& inst = dataset.instances[i];
            if (!inst.gold_sense) {
                ++report.excluded_without_gold;
                continue;
            }
            const std::string* p = labels.find(inst.context_id);
            if (p == nullptr) throw DataError("evaluate: no prediction for context '" + inst.context_id + "'");
            gold.push_back(*inst.gold_sense);
            pred.push_back(*p);
        }
        if (gold.empty()) continue;
        const double ari = adjusted_rand_index(std::span<const std::string>(gold), std::span<const std::string>(pred));
        report.per_word.push_back({target, gold.size(), ari});
        weighted_sum += ari * static_cast<double>(gold.size());
        n_total += gold.size();
    }
    if (report.per_word.empty()) throw DataError("evaluate: no instance carries a gold sense");
    report.aggregate_weighted = weighted_sum / static_cast<double>(n_total);
    double macro = 0.0;
    for (const auto& w : report.per_word) macro += w.ari;
    report.aggregate_macro = macro / static_cast<double>(report.per_word.size());
    return report;
}

void write_eval_report(std::ostream& out, const EvalReport& report) {
    out << "word\tn\tari\n";
    for (const auto& w : report.per_word) out << w.target << '\t' << w.n_contexts << '\t' << fmt(w.ari) << '\n';
    out << "# weighted_ari\t" << fmt(report.aggregate_weighted) << '\n';
    out << "# macro_ari\t" << fmt(report.aggregate_macro) << '\n';
}

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (const auto& row : counts)
        for (auto c : row) t += c;
    return t;
}

ConfusionMatrix confusion_matrix(std::span<const std::string> gold, std::span<const std::string> pred) {
    if (gold.size() != pred.size())
        throw DataError("confusion_matrix: label lists differ in length (" + std::to_string(gold.size()) + " vs " +
                        std::to_string(pred.size()) + ")");
    ConfusionMatrix m;
    m.gold_labels.assign(gold.begin(), gold.end());
    m.pred_labels.assign(pred.begin(), pred.end());
    for (auto* v : {&m.gold_labels, &m.pred_labels}) {
        std::sort(v->begin(), v->end(), label_less);
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    m.counts.assign(m.gold_labels.size(), std::vector<std::size_t>(m.pred_labels.size(), 0));
    const auto index_of = [](const std::vector<std::string>& v, const std::string& s) {
        return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), s, label_less) - v.begin());
    };
    for (std::size_t i = 0; i < gold.size(); ++i)
        ++m.counts[index_of(m.gold_labels, gold[i])][index_of(m.pred_labels, pred[i])];
    return m;
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m) {
    out << "gold\\pred";
    for (const auto& p : m.pred_labels) out << ',' << csv_field(p);
    out << '\n';
    for (std::size_t r = 0; r < m.gold_labels.size(); ++r) {
        out << csv_field(m.gold_labels[r]);
        for (auto c : m.counts[r]) out << ',' << c;
        out << '\n';
    }
}

}  // namespace wsi
