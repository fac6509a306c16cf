#include "wsi/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>

namespace wsi::text {

namespace {

// Decodes one code point at s[i], advancing i. Ill-formed bytes map to U+FFFD.
char32_t next_cp(std::string_view s, std::size_t& i) {
    int32_t pos = static_cast<int32_t>(i);
    UChar32 c = 0;
    U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), pos, static_cast<int32_t>(s.size()), c);
    i = static_cast<std::size_t>(pos);
    return c < 0 ? U'\uFFFD' : static_cast<char32_t>(c);
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }
bool is_punct(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }

}  // namespace

std::string normalize(std::string_view s) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    if (U_SUCCESS(status) && nfc != nullptr) {
        icu::UnicodeString n = nfc->normalize(u, status);
        if (U_SUCCESS(status)) u = std::move(n);
    }
    u.toLower(icu::Locale::getRoot());
    std::string out;
    u.toUTF8String(out);
    return out;
}

std::string clean_token(std::string_view s) {
    const std::u32string cps = to_u32(s);
    std::size_t b = 0;
    std::size_t e = cps.size();
    while (b < e && is_punct(cps[b])) ++b;
    while (e > b && is_punct(cps[e - 1])) --e;
    if (b == e) return {};
    return normalize(to_utf8(std::u32string_view(cps).substr(b, e - b)));
}

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    std::size_t start = 0;
    bool in_word = false;
    while (i < s.size()) {
        const std::size_t at = i;
        const char32_t c = next_cp(s, i);
        if (is_space(c)) {
            if (in_word) {
                if (std::string t = clean_token(s.substr(start, at - start)); !t.empty())
                    tokens.push_back(std::move(t));
                in_word = false;
            }
        } else if (!in_word) {
            start = at;
            in_word = true;
        }
    }
    if (in_word) {
        if (std::string t = clean_token(s.substr(start)); !t.empty()) tokens.push_back(std::move(t));
    }
    return tokens;
}

std::u32string to_u32(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    std::size_t i = 0;
    while (i < utf8.size()) out.push_back(next_cp(utf8, i));
    return out;
}

std::string to_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size() * 2);
    for (char32_t c : s) {
        uint8_t buf[U8_MAX_LENGTH];
        int32_t len = 0;
        UBool err = false;
        U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(c), err);
        if (err) continue;
        out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
    }
    return out;
}

std::size_t length(std::string_view utf8) {
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < utf8.size()) {
        next_cp(utf8, i);
        ++n;
    }
    return n;
}

std::string substr(std::string_view utf8, std::size_t start, std::size_t end) {
    std::size_t i = 0;
    std::size_t cp = 0;
    std::size_t byte_start = utf8.size();
    std::size_t byte_end = utf8.size();
    while (i < utf8.size()) {
        if (cp == start) byte_start = i;
        if (cp == end) {
            byte_end = i;
            break;
        }
        next_cp(utf8, i);
        ++cp;
    }
    if (byte_start >= byte_end) return {};
    return std::string(utf8.substr(byte_start, byte_end - byte_start));
}

std::size_t common_prefix_length(std::string_view a, std::string_view b) {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t n = 0;
    while (i < a.size() && j < b.size()) {
        if (next_cp(a, i) != next_cp(b, j)) break;
        ++n;
    }
    return n;
}

std::string_view trim(std::string_view s) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace wsi::text
