// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Track-aware tokenization. The rules, in order:
//   1. split on Unicode whitespace
//   2. strip leading/trailing punctuation from each word (word-internal
//      punctuation such as apostrophes is kept)
//   3. open track only: split each word before every "-", keeping the dash
//      on every morpheme after the first, so word grouping stays recoverable
// Gloss lines follow the same dash convention but are never
// punctuation-stripped: labels are kept verbatim.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "glosskit/utf8.hpp"

namespace glosskit {

enum class Track { open, closed };

inline std::string_view track_name(Track t) { return t == Track::open ? "open" : "closed"; }

inline Track track_from_name(std::string_view name) {
    if (name == "open") return Track::open;
    if (name == "closed") return Track::closed;
    throw ConfigError("unknown track '" + std::string(name) + "' (expected open|closed)");
}

namespace detail {

inline std::vector<std::string> split_whitespace(std::string_view line) {
    std::vector<std::string> words;
    std::string current;
    std::size_t i = 0;
    while (i < line.size()) {
        const char32_t cp = utf8::decode_at(line, i);
        if (utf8::is_whitespace(cp)) {
            if (!current.empty()) {
                words.push_back(std::move(current));
                current.clear();
            }
        } else {
            utf8::encode_to(cp, current);
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

inline std::string strip_outer_punct(std::string_view word) {
    std::vector<char32_t> cps = utf8::decode(word);
    std::size_t lo = 0;
    std::size_t hi = cps.size();
    while (lo < hi && utf8::is_punctuation(cps[lo])) ++lo;
    while (hi > lo && utf8::is_punctuation(cps[hi - 1])) --hi;
    std::string out;
    for (std::size_t k = lo; k < hi; ++k) utf8::encode_to(cps[k], out);
    return out;
}

// "ni-s-nith" -> ["ni", "-s", "-nith"]; consecutive dashes fold into the
// following morpheme's prefix rather than producing empty tokens.
inline void split_dashes_into(std::string_view word, std::vector<std::string>& out) {
    std::size_t start = 0;
    bool first = true;
    while (start < word.size()) {
        std::size_t dash = word.find('-', first ? start : start + 1);
        if (dash == std::string_view::npos) dash = word.size();
        std::string piece(word.substr(start, dash - start));
        const bool bare = first ? piece.empty() : piece == "-";
        if (!bare) out.push_back(std::move(piece));
        start = dash;
        first = false;
    }
}

}  // namespace detail

// Transcription (closed) / segmentation (open) line -> model input tokens.
inline std::vector<std::string> tokenize_transcription(std::string_view line, Track track) {
    std::vector<std::string> tokens;
    for (const std::string& raw : detail::split_whitespace(line)) {
        const std::string word = detail::strip_outer_punct(raw);
        if (word.empty()) continue;
        if (track == Track::open) {
            detail::split_dashes_into(word, tokens);
        } else {
            tokens.push_back(word);
        }
    }
    return tokens;
}

// Translation line -> context tokens: whitespace split, outer punctuation
// stripped, lowercased (lowercasing is switchable for corpora where case is
// contrastive).
inline std::vector<std::string> tokenize_translation(std::string_view line, bool lowercase = true) {
    std::vector<std::string> tokens;
    for (const std::string& raw : detail::split_whitespace(line)) {
        std::string word = detail::strip_outer_punct(raw);
        if (word.empty()) continue;
        tokens.push_back(lowercase ? utf8::lowercase(word) : std::move(word));
    }
    return tokens;
}

// Gloss line -> label tokens. Closed track: one whitespace token per word
// ("eat-PST" is a single label). Open track: split at dashes with dash
// retention, mirroring tokenize_transcription so labels align 1:1 with
// morpheme tokens. No punctuation stripping in either track.
inline std::vector<std::string> tokenize_gloss(std::string_view line, Track track) {
    std::vector<std::string> labels;
    for (std::string& word : detail::split_whitespace(line)) {
        if (track == Track::open) {
            detail::split_dashes_into(word, labels);
        } else {
            labels.push_back(std::move(word));
        }
    }
    return labels;
}

}  // namespace glosskit
