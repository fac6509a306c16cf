#include "wsi/mt_labeler.hpp"

#include "wsi/error.hpp"
#include "wsi/text.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

namespace wsi {

namespace {

// Porter stemmer state over b[0..k]; j marks the end of the stem once ends()
// has matched a suffix.
class Porter {
public:
    explicit Porter(std::string word) : b_(std::move(word)), k_(static_cast<int>(b_.size()) - 1) {}

    std::string run() {
        if (k_ <= 1) return b_;
        step1ab();
        if (k_ > 0) {
            step1c();
            step2();
            step3();
            step4();
            step5();
        }
        return b_.substr(0, static_cast<std::size_t>(k_ + 1));
    }

private:
    char at(int i) const { return b_[static_cast<std::size_t>(i)]; }

    bool cons(int i) const {
        switch (at(i)) {
            case 'a': case 'e': case 'i': case 'o': case 'u': return false;
            case 'y': return i == 0 ? true : !cons(i - 1);
            default: return true;
        }
    }

    // Number of VC sequences in b[0..j].
    int m() const {
        int n = 0;
        int i = 0;
        for (;;) {
            if (i > j_) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        for (;;) {
            for (;;) {
                if (i > j_) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            for (;;) {
                if (i > j_) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j_; ++i)
            if (!cons(i)) return true;
        return false;
    }

    bool double_c(int j) const { return j >= 1 && at(j) == at(j - 1) && cons(j); }

    // consonant-vowel-consonant ending at i, last consonant not w, x or y
    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        const char ch = at(i);
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(std::string_view s) {
        const int len = static_cast<int>(s.size());
        if (len > k_ + 1) return false;
        if (std::string_view(b_).substr(static_cast<std::size_t>(k_ - len + 1), s.size()) != s) return false;
        j_ = k_ - len;
        return true;
    }

    void set_to(std::string_view s) {
        b_.replace(static_cast<std::size_t>(j_ + 1), b_.size() - static_cast<std::size_t>(j_ + 1), s);
        k_ = j_ + static_cast<int>(s.size());
    }

    void r(std::string_view s) {
        if (m() > 0) set_to(s);
    }

    void truncate_to(int k) {
        k_ = k;
        b_.resize(static_cast<std::size_t>(k_ + 1));
    }

    void step1ab() {
        if (at(k_) == 's') {
            if (ends("sses")) truncate_to(k_ - 2);
            else if (ends("ies")) set_to("i");
            else if (at(k_ - 1) != 's') truncate_to(k_ - 1);
        }
        if (ends("eed")) {
            if (m() > 0) truncate_to(k_ - 1);
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            truncate_to(j_);
            if (ends("at")) set_to("ate");
            else if (ends("bl")) set_to("ble");
            else if (ends("iz")) set_to("ize");
            else if (double_c(k_)) {
                const char ch = at(k_);
                if (ch != 'l' && ch != 's' && ch != 'z') truncate_to(k_ - 1);
            } else {
                j_ = k_;
                if (m() == 1 && cvc(k_)) set_to("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
    }

    void step2() {
        switch (at(k_ - 1)) {
            case 'a':
                if (ends("ational")) { r("ate"); break; }
                if (ends("tional")) { r("tion"); break; }
                break;
            case 'c':
                if (ends("enci")) { r("ence"); break; }
                if (ends("anci")) { r("ance"); break; }
                break;
            case 'e':
                if (ends("izer")) { r("ize"); break; }
                break;
            case 'l':
                if (ends("bli")) { r("ble"); break; }
                if (ends("alli")) { r("al"); break; }
                if (ends("entli")) { r("ent"); break; }
                if (ends("eli")) { r("e"); break; }
                if (ends("ousli")) { r("ous"); break; }
                break;
            case 'o':
                if (ends("ization")) { r("ize"); break; }
                if (ends("ation")) { r("ate"); break; }
                if (ends("ator")) { r("ate"); break; }
                break;
            case 's':
                if (ends("alism")) { r("al"); break; }
                if (ends("iveness")) { r("ive"); break; }
                if (ends("fulness")) { r("ful"); break; }
                if (ends("ousness")) { r("ous"); break; }
                break;
            case 't':
                if (ends("aliti")) { r("al"); break; }
                if (ends("iviti")) { r("ive"); break; }
                if (ends("biliti")) { r("ble"); break; }
                break;
            case 'g':
                if (ends("logi")) { r("log"); break; }
                break;
            default: break;
        }
    }

    void step3() {
        switch (at(k_)) {
            case 'e':
                if (ends("icate")) { r("ic"); break; }
                if (ends("ative")) { r(""); break; }
                if (ends("alize")) { r("al"); break; }
                break;
            case 'i':
                if (ends("iciti")) { r("ic"); break; }
                break;
            case 'l':
                if (ends("ical")) { r("ic"); break; }
                if (ends("ful")) { r(""); break; }
                break;
            case 's':
                if (ends("ness")) { r(""); break; }
                break;
            default: break;
        }
    }

    void step4() {
        switch (at(k_ - 1)) {
            case 'a':
                if (ends("al")) break;
                return;
            case 'c':
                if (ends("ance")) break;
                if (ends("ence")) break;
                return;
            case 'e':
                if (ends("er")) break;
                return;
            case 'i':
                if (ends("ic")) break;
                return;
            case 'l':
                if (ends("able")) break;
                if (ends("ible")) break;
                return;
            case 'n':
                if (ends("ant")) break;
                if (ends("ement")) break;
                if (ends("ment")) break;
                if (ends("ent")) break;
                return;
            case 'o':
                if (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) break;
                if (ends("ou")) break;
                return;
            case 's':
                if (ends("ism")) break;
                return;
            case 't':
                if (ends("ate")) break;
                if (ends("iti")) break;
                return;
            case 'u':
                if (ends("ous")) break;
                return;
            case 'v':
                if (ends("ive")) break;
                return;
            case 'z':
                if (ends("ize")) break;
                return;
            default: return;
        }
        if (m() > 1) truncate_to(j_);
    }

    void step5() {
        j_ = k_;
        if (at(k_) == 'e') {
            const int a = m();
            if (a > 1 || (a == 1 && !cvc(k_ - 1))) truncate_to(k_ - 1);
        }
        if (at(k_) == 'l' && double_c(k_) && m() > 1) truncate_to(k_ - 1);
    }

    std::string b_;
    int k_;
    int j_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) {
    if (std::any_of(word.begin(), word.end(), [](char c) { return static_cast<unsigned char>(c) >= 0x80; }))
        return std::string(word);
    return Porter(std::string(word)).run();
}

StemmerKind parse_stemmer(std::string_view s) {
    if (s == "identity" || s == "none") return StemmerKind::identity;
    if (s == "porter") return StemmerKind::porter;
    throw ConfigError("unknown stemmer '" + std::string(s) + "' (expected identity or porter)");
}

std::string_view to_string(StemmerKind s) { return s == StemmerKind::porter ? "porter" : "identity"; }

std::string Stemmer::apply(std::string_view phrase) const {
    if (kind == StemmerKind::identity) return std::string(phrase);
    std::string out;
    const auto parts = text::split(phrase, ' ');
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ' ';
        out += porter_stem(parts[i]);
    }
    return out;
}

std::vector<TranslationRecord> parse_translations(std::string_view content, std::string_view source) {
    std::vector<TranslationRecord> records;
    std::set<std::string, std::less<>> seen;
    const auto lines = text::split(content, '\n');
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string_view line = lines[li];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (text::trim(line).empty()) continue;
        const std::string where = std::string(source) + ":" + std::to_string(li + 1);
        const auto cols = text::split(line, '\t');
        if (cols.size() != 2) throw DataError(where + ": expected \"context_id<TAB>translation[,translation...]\"");
        TranslationRecord rec;
        rec.context_id = std::string(text::trim(cols[0]));
        if (rec.context_id.empty()) throw DataError(where + ": empty context_id");
        if (!seen.insert(rec.context_id).second)
            throw DataError(where + ": duplicate context_id '" + rec.context_id + "'");
        for (auto t : text::split(cols[1], ',')) {
            t = text::trim(t);
            if (!t.empty()) rec.translations.emplace_back(t);
        }
        if (rec.translations.empty())
            throw DataError(where + ": no translations for context '" + rec.context_id + "'");
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<TranslationRecord> read_translations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_translations(content, path.string());
}

Labeling label_by_translation(std::span<const TranslationRecord> records, const Stemmer& stemmer) {
    Labeling labels;
    for (const auto& rec : records) {
        if (rec.translations.empty())
            throw DataError("no translations for context '" + rec.context_id + "'");
        std::map<std::string, std::size_t> votes;
        for (const auto& t : rec.translations) ++votes[stemmer.apply(text::normalize(t))];
        // std::map iterates in lexicographic order, so the first maximum wins ties.
        auto best = votes.begin();
        for (auto it = votes.begin(); it != votes.end(); ++it)
            if (it->second > best->second) best = it;
        labels.assignments[rec.context_id] = best->first;
    }
    return labels;
}

}  // namespace wsi
