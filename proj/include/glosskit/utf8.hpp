// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal UTF-8 handling: strict decoding plus the small set of character
// classes the tokenizers need (whitespace, punctuation, lowercase). The
// classifiers cover ASCII, Latin-1, Latin Extended-A and the common Unicode
// punctuation/space blocks; anything outside those ranges is treated as a
// letter and mapped to itself. That is deliberate: glossed corpora mix many
// scripts, and an unknown codepoint must never be silently dropped.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "glosskit/errors.hpp"

namespace glosskit::utf8 {

// Decodes one codepoint starting at byte offset `i`; advances `i` past it.
// Throws EncodingError on invalid sequences (overlong forms, surrogates,
// truncation, out-of-range).
inline char32_t decode_at(std::string_view s, std::size_t& i) {
    const auto fail = [&](const char* why) -> char32_t {
        throw EncodingError(std::string("invalid UTF-8 at byte ") + std::to_string(i) + ": " + why);
    };
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return fail("bad leading byte");
    }
    if (i + static_cast<std::size_t>(len) > s.size()) return fail("truncated sequence");
    for (int k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((b & 0xC0) != 0x80) return fail("bad continuation byte");
        cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinByLen[len]) return fail("overlong encoding");
    if (cp >= 0xD800 && cp <= 0xDFFF) return fail("surrogate codepoint");
    if (cp > 0x10FFFF) return fail("codepoint out of range");
    i += static_cast<std::size_t>(len);
    return cp;
}

inline std::vector<char32_t> decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) out.push_back(decode_at(s, i));
    return out;
}

// Throws EncodingError if `s` is not valid UTF-8.
inline void validate(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) decode_at(s, i);
}

inline void encode_to(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) encode_to(cp, out);
    return out;
}

inline bool is_whitespace(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return (cp >= 0x2000 && cp <= 0x200A);
    }
}

// Punctuation classes P* and the punctuation-like symbols that show up in
// field transcriptions (section signs, fullwidth marks, ellipses).
inline bool is_punctuation(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    switch (cp) {
        case 0xA1:   // inverted exclamation
        case 0xA7:   // section sign
        case 0xAB:   // left guillemet
        case 0xB6:   // pilcrow
        case 0xB7:   // middle dot
        case 0xBB:   // right guillemet
        case 0xBF:   // inverted question mark
        case 0x2E2E: // reversed question mark
            return true;
        default:
            break;
    }
    if (cp >= 0x2010 && cp <= 0x2027) return true;  // dashes, quotes, daggers, ellipsis
    if (cp >= 0x2030 && cp <= 0x205E) return true;  // per-mille through general punct tail
    if (cp >= 0x2E00 && cp <= 0x2E7F) return true;  // supplemental punctuation
    if (cp >= 0x3001 && cp <= 0x3003) return true;  // CJK comma, full stop, ditto
    if (cp >= 0x3008 && cp <= 0x3011) return true;  // CJK brackets
    if (cp >= 0xFF01 && cp <= 0xFF0F) return true;  // fullwidth ASCII punct
    if (cp >= 0xFF1A && cp <= 0xFF20) return true;
    if (cp >= 0xFF3B && cp <= 0xFF40) return true;
    if (cp >= 0xFF5B && cp <= 0xFF65) return true;
    return false;
}

// Simple one-to-one lowercase mapping: ASCII, Latin-1 and the regular
// even/odd pairs of Latin Extended-A. Sufficient for the high-resource
// translation languages (English, Spanish, ...); other scripts pass through.
inline char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    if (cp >= 0x100 && cp <= 0x137) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp == 0x178) return 0xFF;  // Y with diaeresis
    if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
    return cp;
}

inline bool is_lowercase(char32_t cp) {
    if (cp >= 'a' && cp <= 'z') return true;
    if (cp >= 0xDF && cp <= 0xFF && cp != 0xF7) return true;
    if (cp >= 0x100 && cp <= 0x17F) return to_lower(cp) == cp;
    return false;
}

inline std::string lowercase(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) encode_to(to_lower(decode_at(s, i)), out);
    return out;
}

}  // namespace glosskit::utf8
