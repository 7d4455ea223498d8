// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// IGT corpus I/O in the line-prefixed text format:
//
//   \t <transcription>
//   \m <morpheme segmentation>     (optional, open track)
//   \g <gloss line>                (optional)
//   \l <translation>               (optional)
//
// One blank line between entries; UTF-8 throughout; payloads are trimmed of
// outer whitespace; file ends with a newline.

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "glosskit/errors.hpp"
#include "glosskit/tokenize.hpp"

namespace glosskit {

struct IgtEntry {
    std::string transcription;
    std::optional<std::string> segmentation;
    std::optional<std::string> gloss;
    std::optional<std::string> translation;

    bool operator==(const IgtEntry&) const = default;
};

struct CorpusStats {
    std::size_t entry_count = 0;
    std::size_t word_count = 0;
    std::size_t morpheme_count = 0;
    std::size_t distinct_word_labels = 0;
    std::size_t distinct_morpheme_labels = 0;
    std::size_t entries_missing_gloss = 0;
};

// Validation issues are data, not failures.
struct Issue {
    enum class Kind { count_mismatch, missing_segmentation, segmentation_mismatch };
    Kind kind;
    std::size_t expected = 0;  // count_mismatch: token count on the source side
    std::size_t got = 0;       // count_mismatch: gloss label count

    bool operator==(const Issue&) const = default;
};

struct ParseWarning {
    std::size_t line;
    std::string message;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n' || s[b] == '\f' || s[b] == '\v')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n' || s[e - 1] == '\f' || s[e - 1] == '\v')) --e;
    return std::string(s.substr(b, e - b));
}

inline bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace detail

// Parses a whole corpus file. Unknown line prefixes and duplicate lines
// within an entry are skipped and recorded in `warnings` (when given).
// Throws MalformedEntryError for a block with recognized lines but no \t
// line, and EncodingError for invalid UTF-8.
inline std::vector<IgtEntry> parse_igt(std::string_view text,
                                       std::vector<ParseWarning>* warnings = nullptr) {
    utf8::validate(text);

    const auto warn = [&](std::size_t line, std::string msg) {
        if (warnings) warnings->push_back({line, std::move(msg)});
    };

    std::vector<IgtEntry> entries;

    struct Block {
        std::optional<std::string> t, m, g, l;
        std::size_t first_line = 0;
        bool any_recognized = false;
        bool any_content = false;
    };
    Block block;

    const auto flush = [&](std::size_t line_no) {
        if (!block.any_content) return;
        if (!block.t.has_value()) {
            if (block.any_recognized) {
                throw MalformedEntryError("entry has no \\t transcription line", block.first_line);
            }
            // Block made only of unknown lines: already warned, not an entry.
            block = Block{};
            return;
        }
        if (block.t->empty()) {
            throw MalformedEntryError("entry has an empty transcription", block.first_line);
        }
        IgtEntry e;
        e.transcription = *block.t;
        e.segmentation = block.m;
        e.gloss = block.g;
        e.translation = block.l;
        entries.push_back(std::move(e));
        block = Block{};
        (void)line_no;
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (line.empty() && pos > text.size()) break;  // no trailing pseudo-line

        if (detail::is_blank(line)) {
            flush(line_no);
            continue;
        }
        if (!block.any_content) block.first_line = line_no;
        block.any_content = true;

        std::optional<std::string>* slot = nullptr;
        const char* slot_name = "";
        if (line.size() >= 2 && line[0] == '\\') {
            switch (line[1]) {
                case 't': slot = &block.t; slot_name = "\\t"; break;
                case 'm': slot = &block.m; slot_name = "\\m"; break;
                case 'g': slot = &block.g; slot_name = "\\g"; break;
                case 'l': slot = &block.l; slot_name = "\\l"; break;
                default: break;
            }
            if (slot != nullptr && line.size() > 2 && line[2] != ' ') slot = nullptr;
        }
        if (slot == nullptr) {
            warn(line_no, "skipping line with unknown prefix: " + std::string(line.substr(0, 16)));
            continue;
        }
        block.any_recognized = true;
        std::string payload = detail::trim(line.size() > 2 ? line.substr(3) : std::string_view{});
        if (slot->has_value()) {
            warn(line_no, std::string("duplicate ") + slot_name + " line in entry, keeping the first");
            continue;
        }
        *slot = std::move(payload);
    }
    flush(line_no + 1);
    return entries;
}

// Inverse of parse_igt: absent lines are omitted, entries are separated by
// exactly one blank line, and the file ends with a newline. Empty input
// serializes to the empty string.
inline std::string serialize_igt(const std::vector<IgtEntry>& entries) {
    std::string out;
    bool first = true;
    for (const IgtEntry& e : entries) {
        if (!first) out += "\n";
        first = false;
        out += "\\t " + e.transcription + "\n";
        if (e.segmentation) out += "\\m " + *e.segmentation + "\n";
        if (e.gloss) out += "\\g " + *e.gloss + "\n";
        if (e.translation) out += "\\l " + *e.translation + "\n";
    }
    return out;
}

namespace detail {

// Character material of a line with whitespace (and optionally punctuation)
// removed; used for the segmentation consistency check.
inline std::u32string content_chars(std::string_view line, bool drop_punct, bool drop_dash_only) {
    std::u32string out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char32_t cp = utf8::decode_at(line, i);
        if (utf8::is_whitespace(cp)) continue;
        if (drop_dash_only && cp == '-') continue;
        if (drop_punct && utf8::is_punctuation(cp)) continue;
        out.push_back(cp);
    }
    return out;
}

}  // namespace detail

// Checks one entry for the given track. CountMismatch compares the aligned
// token counts encoding will use: words vs. gloss words (closed), morphemes
// vs. gloss morphemes (open, word counts checked first). The segmentation
// consistency check (same letters as the transcription) is a warning here,
// never a hard failure.
inline std::vector<Issue> validate_entry(const IgtEntry& entry, Track track) {
    std::vector<Issue> issues;

    if (track == Track::open && !entry.segmentation.has_value()) {
        issues.push_back({Issue::Kind::missing_segmentation});
    }

    if (entry.gloss.has_value()) {
        const std::vector<std::string> gloss_words = detail::split_whitespace(*entry.gloss);
        if (track == Track::closed) {
            const auto words = tokenize_transcription(entry.transcription, Track::closed);
            if (words.size() != gloss_words.size()) {
                issues.push_back({Issue::Kind::count_mismatch, words.size(), gloss_words.size()});
            }
        } else if (entry.segmentation.has_value()) {
            const auto seg_words = tokenize_transcription(*entry.segmentation, Track::closed);
            if (seg_words.size() != gloss_words.size()) {
                issues.push_back({Issue::Kind::count_mismatch, seg_words.size(), gloss_words.size()});
            } else {
                const auto morphs = tokenize_transcription(*entry.segmentation, Track::open);
                const auto labels = tokenize_gloss(*entry.gloss, Track::open);
                if (morphs.size() != labels.size()) {
                    issues.push_back({Issue::Kind::count_mismatch, morphs.size(), labels.size()});
                }
            }
        }
    }

    if (entry.segmentation.has_value() &&
        detail::content_chars(*entry.segmentation, /*drop_punct=*/false, /*drop_dash_only=*/true) !=
            detail::content_chars(entry.transcription, /*drop_punct=*/true, /*drop_dash_only=*/false)) {
        issues.push_back({Issue::Kind::segmentation_mismatch});
    }

    return issues;
}

// Corpus-level counts under the track's tokenization rules. Words come from
// the segmentation line when present (it is the word-level view of record),
// otherwise from the transcription; morphemes require a segmentation and an
// open-track reading, else each word counts as one morpheme.
inline CorpusStats corpus_stats(const std::vector<IgtEntry>& entries, Track track) {
    CorpusStats stats;
    std::set<std::string> word_labels;
    std::set<std::string> morpheme_labels;
    stats.entry_count = entries.size();
    for (const IgtEntry& e : entries) {
        const std::string& word_line = e.segmentation ? *e.segmentation : e.transcription;
        const std::size_t words = tokenize_transcription(word_line, Track::closed).size();
        stats.word_count += words;
        if (track == Track::open && e.segmentation) {
            stats.morpheme_count += tokenize_transcription(*e.segmentation, Track::open).size();
        } else {
            stats.morpheme_count += words;
        }
        if (e.gloss) {
            for (auto& lab : tokenize_gloss(*e.gloss, Track::closed)) word_labels.insert(lab);
            for (auto& lab : tokenize_gloss(*e.gloss, Track::open)) morpheme_labels.insert(lab);
        } else {
            ++stats.entries_missing_gloss;
        }
    }
    stats.distinct_word_labels = word_labels.size();
    stats.distinct_morpheme_labels = morpheme_labels.size();
    return stats;
}

}  // namespace glosskit
