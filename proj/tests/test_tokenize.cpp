// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "glosskit/rng.hpp"
#include "glosskit/tokenize.hpp"
#include "glosskit/utf8.hpp"

using glosskit::Track;
using glosskit::tokenize_gloss;
using glosskit::tokenize_transcription;
using glosskit::tokenize_translation;

TEST_CASE("open track splits morphemes and keeps non-initial dashes") {
    CHECK(tokenize_transcription("cat-s", Track::open) == std::vector<std::string>{"cat", "-s"});
    CHECK(tokenize_transcription("ní-s-nith anúnas", Track::open) ==
          std::vector<std::string>{"ní", "-s", "-nith", "anúnas"});
}

TEST_CASE("closed track keeps words whole and strips outer punctuation") {
    CHECK(tokenize_transcription("anúnas.", Track::closed) == std::vector<std::string>{"anúnas"});
    CHECK(tokenize_transcription("ní-s-nith anúnas", Track::closed) ==
          std::vector<std::string>{"ní-s-nith", "anúnas"});
    CHECK(tokenize_transcription("« quoted »", Track::closed) ==
          std::vector<std::string>{"quoted"});
}

TEST_CASE("tokens that are pure punctuation are dropped") {
    CHECK(tokenize_transcription("wait ... what ?", Track::closed) ==
          std::vector<std::string>{"wait", "what"});
    CHECK(tokenize_transcription("‒", Track::open).empty());
    CHECK(tokenize_transcription("", Track::open).empty());
}

TEST_CASE("word-internal punctuation survives") {
    CHECK(tokenize_transcription("don't", Track::closed) == std::vector<std::string>{"don't"});
    CHECK(tokenize_translation("It doesn't eat it.") ==
          std::vector<std::string>{"it", "doesn't", "eat", "it"});
}

TEST_CASE("translation tokenization lowercases") {
    CHECK(tokenize_translation("From Above") == std::vector<std::string>{"from", "above"});
    CHECK(tokenize_translation("").empty());
    CHECK(tokenize_translation("ÉL Corrió") == std::vector<std::string>{"él", "corrió"});
    CHECK(tokenize_translation("From Above", /*lowercase=*/false) ==
          std::vector<std::string>{"From", "Above"});
}

TEST_CASE("gloss tokenization is verbatim per track") {
    CHECK(tokenize_gloss("Neg.3sf.eats from_above", Track::closed) ==
          std::vector<std::string>{"Neg.3sf.eats", "from_above"});
    CHECK(tokenize_gloss("cat-PL", Track::open) == std::vector<std::string>{"cat", "-PL"});
    CHECK(tokenize_gloss("", Track::open).empty());
    // No punctuation stripping on labels.
    CHECK(tokenize_gloss("{N}eats", Track::closed) == std::vector<std::string>{"{N}eats"});
}

TEST_CASE("gloss and transcription tokenization align when word counts do") {
    // Alignment property: mirrored dash handling keeps the two lists equal
    // in length whenever the per-word morpheme counts agree.
    glosskit::SplitMix64 rng(41);
    const std::vector<std::string> stems{"ta", "miko", "su", "rende", "vi"};
    const std::vector<std::string> affixes{"ka", "ne", "lu"};
    for (int iter = 0; iter < 200; ++iter) {
        std::string seg, gloss;
        const std::size_t words = 1 + rng.next_below(6);
        for (std::size_t w = 0; w < words; ++w) {
            if (w > 0) {
                seg += " ";
                gloss += " ";
            }
            seg += stems[rng.next_below(stems.size())];
            gloss += "STEM" + std::to_string(rng.next_below(9));
            const std::size_t k = rng.next_below(3);
            for (std::size_t i = 0; i < k; ++i) {
                seg += "-" + affixes[rng.next_below(affixes.size())];
                gloss += "-A" + std::to_string(rng.next_below(9));
            }
        }
        const auto toks = tokenize_transcription(seg, Track::open);
        const auto labs = tokenize_gloss(gloss, Track::open);
        REQUIRE(toks.size() == labs.size());
        CHECK(tokenize_transcription(seg, Track::closed).size() ==
              tokenize_gloss(gloss, Track::closed).size());
    }
}

TEST_CASE("dash round-trip: concatenating one word's morphemes restores it") {
    glosskit::SplitMix64 rng(77);
    const std::vector<std::string> stems{"nino", "tapu", "keso"};
    const std::vector<std::string> affixes{"ka", "ti", "mo"};
    for (int iter = 0; iter < 100; ++iter) {
        std::string word = stems[rng.next_below(stems.size())];
        const std::size_t k = rng.next_below(4);
        for (std::size_t i = 0; i < k; ++i) word += "-" + affixes[rng.next_below(affixes.size())];
        const auto toks = tokenize_transcription(word, Track::open);
        std::string joined;
        for (const auto& t : toks) joined += t;
        CHECK(joined == word);
    }
}

TEST_CASE("invalid utf-8 raises EncodingError") {
    CHECK_THROWS_AS(glosskit::utf8::validate(std::string_view("ab\xC3", 3)), glosskit::EncodingError);
    CHECK_THROWS_AS(glosskit::utf8::validate(std::string_view("\xFF", 1)), glosskit::EncodingError);
    CHECK_THROWS_AS(glosskit::utf8::validate(std::string_view("\xC0\xAF", 2)), glosskit::EncodingError);
    CHECK_NOTHROW(glosskit::utf8::validate("ní-s-nith anúnas"));
}
