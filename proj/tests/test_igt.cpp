// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "glosskit/igt.hpp"
#include "glosskit/rng.hpp"

using glosskit::IgtEntry;
using glosskit::Issue;
using glosskit::parse_igt;
using glosskit::serialize_igt;
using glosskit::Track;
using glosskit::validate_entry;

TEST_CASE("parse a single three-line entry") {
    const std::string text =
        "\\t ní-s-nith anúnas\n\\g Neg.3sf.eats from_above\n\\l It doesn't eat it from above.\n";
    const auto entries = parse_igt(text);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].transcription == "ní-s-nith anúnas");
    CHECK(!entries[0].segmentation.has_value());
    CHECK(entries[0].gloss == "Neg.3sf.eats from_above");
    CHECK(entries[0].translation == "It doesn't eat it from above.");
}

TEST_CASE("empty input parses to an empty corpus") {
    CHECK(parse_igt("").empty());
    CHECK(parse_igt("\n\n\n").empty());
}

TEST_CASE("an entry may lack any optional line") {
    const std::string text =
        "\\t ena\n\\g one\n\\l one\n"
        "\n"
        "\\t dua\n\\g two\n\\l two\n"
        "\n"
        "\\t tria\n\\l three\n";
    const auto entries = parse_igt(text);
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].gloss.has_value());
    CHECK(entries[1].gloss.has_value());
    CHECK(!entries[2].gloss.has_value());
}

TEST_CASE("unknown prefixes are skipped with a warning") {
    std::vector<glosskit::ParseWarning> warnings;
    const auto entries = parse_igt("\\t abc\n\\x weird\n\\g x\n", &warnings);
    REQUIRE(entries.size() == 1);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].line == 2);
}

TEST_CASE("duplicate lines keep the first and warn") {
    std::vector<glosskit::ParseWarning> warnings;
    const auto entries = parse_igt("\\t abc\n\\g first\n\\g second\n", &warnings);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].gloss == "first");
    CHECK(warnings.size() == 1);
}

TEST_CASE("a block without a transcription line is malformed") {
    CHECK_THROWS_AS(parse_igt("\\g orphan gloss\n"), glosskit::MalformedEntryError);
    CHECK_THROWS_AS(parse_igt("\\t ok\n\n\\g orphan\n\\l tr\n"), glosskit::MalformedEntryError);
    CHECK_THROWS_AS(parse_igt("\\t \n"), glosskit::MalformedEntryError);
    try {
        parse_igt("\\t ok\n\n\\g orphan\n");
    } catch (const glosskit::MalformedEntryError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("invalid utf-8 input is an EncodingError") {
    CHECK_THROWS_AS(parse_igt(std::string_view("\\t a\xFF\n", 6)), glosskit::EncodingError);
}

TEST_CASE("payload whitespace is trimmed, internal whitespace preserved") {
    const auto entries = parse_igt("\\t   two  words  \n");
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].transcription == "two  words");
}

TEST_CASE("serialize then parse is the identity") {
    std::vector<IgtEntry> entries;
    entries.push_back({"ní-s-nith anúnas", std::nullopt, "Neg.3sf.eats from_above",
                       "It doesn't eat it from above."});
    entries.push_back({"ninoka tapu", "nino-ka tapu", "child-PL run", "The children run."});
    entries.push_back({"solo", std::nullopt, std::nullopt, std::nullopt});

    const std::string text = serialize_igt(entries);
    CHECK(text.back() == '\n');
    CHECK(parse_igt(text) == entries);
    CHECK(serialize_igt({}).empty());
}

TEST_CASE("round-trip property on randomized entries") {
    glosskit::SplitMix64 rng(2024);
    const std::vector<std::string> words{"nino", "ka-ti", "s'e", "anúnas", "ní"};
    const auto random_line = [&](std::size_t max_words) {
        std::string line;
        const std::size_t n = 1 + rng.next_below(max_words);
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) line += " ";
            line += words[rng.next_below(words.size())];
        }
        return line;
    };
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<IgtEntry> entries;
        const std::size_t count = rng.next_below(6);
        for (std::size_t i = 0; i < count; ++i) {
            IgtEntry e;
            e.transcription = random_line(4);
            if (rng.next_below(2)) e.segmentation = random_line(4);
            if (rng.next_below(2)) e.gloss = random_line(4);
            if (rng.next_below(2)) e.translation = random_line(6);
            entries.push_back(std::move(e));
        }
        REQUIRE(parse_igt(serialize_igt(entries)) == entries);
    }
}

TEST_CASE("validate_entry reports count mismatches") {
    IgtEntry e{"uno dos", std::nullopt, "one two", std::nullopt};
    CHECK(validate_entry(e, Track::closed).empty());

    e.gloss = "one two three";
    const auto issues = validate_entry(e, Track::closed);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].kind == Issue::Kind::count_mismatch);
    CHECK(issues[0].expected == 2);
    CHECK(issues[0].got == 3);
}

TEST_CASE("validate_entry reports missing segmentation on the open track") {
    IgtEntry e{"uno", std::nullopt, "one", std::nullopt};
    const auto issues = validate_entry(e, Track::open);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].kind == Issue::Kind::missing_segmentation);
    CHECK(validate_entry(e, Track::closed).empty());
}

TEST_CASE("validate_entry checks morpheme-level alignment on the open track") {
    // Word counts agree but the first word has 2 morphemes vs 1 label.
    IgtEntry e{"catka run", "cat-ka run", "cat run", std::nullopt};
    const auto issues = validate_entry(e, Track::open);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].kind == Issue::Kind::count_mismatch);
    CHECK(issues[0].expected == 3);
    CHECK(issues[0].got == 2);
}

TEST_CASE("validate_entry flags segmentation/transcription character drift") {
    IgtEntry ok{"ninoka.", "nino-ka", "child-PL", std::nullopt};
    CHECK(validate_entry(ok, Track::open).empty());

    IgtEntry drift{"ninoka", "nino-ko", "child-PL", std::nullopt};
    const auto issues = validate_entry(drift, Track::open);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].kind == Issue::Kind::segmentation_mismatch);
}

TEST_CASE("validate_entry is pure") {
    IgtEntry e{"uno dos", std::nullopt, "one two three", std::nullopt};
    CHECK(validate_entry(e, Track::closed) == validate_entry(e, Track::closed));
}

TEST_CASE("corpus_stats counts words and morphemes per track") {
    CHECK(glosskit::corpus_stats({}, Track::open).entry_count == 0);
    CHECK(glosskit::corpus_stats({}, Track::open).word_count == 0);

    IgtEntry e{"cats runs", "cat-s runs", "cat-PL run-3SG", "the cats run"};
    const auto stats = glosskit::corpus_stats({e}, Track::open);
    CHECK(stats.entry_count == 1);
    CHECK(stats.word_count == 2);
    CHECK(stats.morpheme_count == 3);
    CHECK(stats.distinct_word_labels == 2);
    CHECK(stats.distinct_morpheme_labels == 4);  // cat, -PL, run, -3SG
    CHECK(stats.entries_missing_gloss == 0);

    const auto closed_stats = glosskit::corpus_stats({e}, Track::closed);
    CHECK(closed_stats.morpheme_count == 2);  // no segmentation view in use
}
