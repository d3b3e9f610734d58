// Rule-based constraint verification. A response is compliant only if every
// constraint in the set passes; verification is binary by design, there is no
// partial credit.
//
// Counting semantics:
//   - WhitespaceTokens: words are maximal runs of non-whitespace bytes,
//     whitespace being the ASCII set (space, \t, \n, \v, \f, \r).
//   - UnicodeScalars: count of non-whitespace Unicode scalar values, for text
//     that does not delimit words with spaces.
//   - MaxChars counts all Unicode scalar values, whitespace included.
//   - StartsWith/EndsWith compare exact code points, case-sensitive, after
//     trimming leading/trailing ASCII whitespace from the text.
//   - ExactLineCount counts newline-separated lines containing at least one
//     non-whitespace character.
// Malformed UTF-8 bytes count as one scalar each so every input is decidable.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mixr {

enum class ConstraintKind {
    MaxWords,
    MinWords,
    StartsWith,
    EndsWith,
    ContainsKeyword,
    ForbidsKeyword,
    ExactLineCount,
    MaxChars,
};

enum class CountingMode {
    WhitespaceTokens,
    UnicodeScalars,
};

// One machine-checkable constraint. The argument variant matches the kind:
// numeric for the count-based kinds, text for the match-based kinds.
struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::MaxWords;
    std::variant<std::uint64_t, std::string> argument = std::uint64_t{0};
    CountingMode counting_mode = CountingMode::WhitespaceTokens;

    static ConstraintSpec max_words(std::uint64_t n, CountingMode m = CountingMode::WhitespaceTokens) {
        return {ConstraintKind::MaxWords, n, m};
    }
    static ConstraintSpec min_words(std::uint64_t n, CountingMode m = CountingMode::WhitespaceTokens) {
        return {ConstraintKind::MinWords, n, m};
    }
    static ConstraintSpec starts_with(std::string prefix) {
        return {ConstraintKind::StartsWith, std::move(prefix), CountingMode::WhitespaceTokens};
    }
    static ConstraintSpec ends_with(std::string suffix) {
        return {ConstraintKind::EndsWith, std::move(suffix), CountingMode::WhitespaceTokens};
    }
    static ConstraintSpec contains_keyword(std::string word) {
        return {ConstraintKind::ContainsKeyword, std::move(word), CountingMode::WhitespaceTokens};
    }
    static ConstraintSpec forbids_keyword(std::string word) {
        return {ConstraintKind::ForbidsKeyword, std::move(word), CountingMode::WhitespaceTokens};
    }
    static ConstraintSpec exact_line_count(std::uint64_t n) {
        return {ConstraintKind::ExactLineCount, n, CountingMode::WhitespaceTokens};
    }
    static ConstraintSpec max_chars(std::uint64_t n) {
        return {ConstraintKind::MaxChars, n, CountingMode::WhitespaceTokens};
    }

    std::uint64_t count_arg() const { return std::get<std::uint64_t>(argument); }
    const std::string& text_arg() const { return std::get<std::string>(argument); }
};

using ConstraintSet = std::vector<ConstraintSpec>;

namespace detail {

inline bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

inline std::string_view trim(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && is_ascii_space(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && is_ascii_space(static_cast<unsigned char>(text[e - 1]))) --e;
    return text.substr(b, e - b);
}

inline std::uint64_t count_whitespace_tokens(std::string_view text) {
    std::uint64_t count = 0;
    bool in_token = false;
    for (unsigned char c : text) {
        const bool space = is_ascii_space(c);
        if (!space && !in_token) ++count;
        in_token = !space;
    }
    return count;
}

// Decodes one UTF-8 scalar starting at `i`; returns its byte length (1 on
// malformed input so the scan always advances).
inline std::size_t utf8_advance(std::string_view text, std::size_t i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    if (i + len > text.size()) return 1;
    for (std::size_t j = 1; j < len; ++j)
        if ((static_cast<unsigned char>(text[i + j]) & 0xC0) != 0x80) return 1;
    return len;
}

inline std::uint64_t count_scalars(std::string_view text, bool skip_whitespace) {
    std::uint64_t count = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t len = utf8_advance(text, i);
        const bool ws = len == 1 && is_ascii_space(static_cast<unsigned char>(text[i]));
        if (!(skip_whitespace && ws)) ++count;
        i += len;
    }
    return count;
}

inline std::uint64_t word_count(std::string_view text, CountingMode mode) {
    return mode == CountingMode::WhitespaceTokens ? count_whitespace_tokens(text)
                                                  : count_scalars(text, /*skip_whitespace=*/true);
}

inline std::uint64_t nonempty_line_count(std::string_view text) {
    std::uint64_t count = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        if (!trim(text.substr(start, end - start)).empty()) ++count;
        if (end == text.size()) break;
        start = end + 1;
    }
    return count;
}

} // namespace detail

// Deterministic check of a single constraint against the text.
inline bool verify_one(std::string_view text, const ConstraintSpec& c) {
    using detail::trim;
    switch (c.kind) {
    case ConstraintKind::MaxWords:
        return detail::word_count(text, c.counting_mode) <= c.count_arg();
    case ConstraintKind::MinWords:
        return detail::word_count(text, c.counting_mode) >= c.count_arg();
    case ConstraintKind::StartsWith:
        return trim(text).starts_with(c.text_arg());
    case ConstraintKind::EndsWith:
        return trim(text).ends_with(c.text_arg());
    case ConstraintKind::ContainsKeyword:
        return text.find(c.text_arg()) != std::string_view::npos;
    case ConstraintKind::ForbidsKeyword:
        return text.find(c.text_arg()) == std::string_view::npos;
    case ConstraintKind::ExactLineCount:
        return detail::nonempty_line_count(text) == c.count_arg();
    case ConstraintKind::MaxChars:
        return detail::count_scalars(text, /*skip_whitespace=*/false) <= c.count_arg();
    }
    return false;
}

// Conjunction over the whole set; the empty set is vacuously true.
inline bool verify_all(std::string_view text, const ConstraintSet& cs) {
    for (const auto& c : cs)
        if (!verify_one(text, c)) return false;
    return true;
}

} // namespace mixr
