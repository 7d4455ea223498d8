// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic toy-language generator for experiments and acceptance runs.
// The language has a fixed stem lexicon (each stem glossed by a unique
// lowercase word) and a fixed suffix inventory (each suffix a unique
// uppercase gram). Agglutinative words are stem + 0..3 distinct suffixes in
// canonical order; isolating words are bare stems. The emitted gloss and
// segmentation lines are exactly consistent, and both the word-level and
// morpheme-level views are written so one file serves both tracks. The
// translation line is the shuffled stem glosses, capitalized and with a
// final period, so it informs without giving word order away.

#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "glosskit/errors.hpp"
#include "glosskit/igt.hpp"
#include "glosskit/rng.hpp"

namespace glosskit {

enum class SynthProfile { agglutinative, isolating };

inline SynthProfile synth_profile_from_name(std::string_view name) {
    if (name == "agglutinative") return SynthProfile::agglutinative;
    if (name == "isolating") return SynthProfile::isolating;
    throw ConfigError("unknown profile '" + std::string(name) +
                      "' (expected agglutinative|isolating)");
}

namespace synth {

struct Morpheme {
    std::string_view surface;
    std::string_view gloss;
};

inline constexpr std::array<Morpheme, 16> kStems{{
    {"nino", "child"}, {"tapu", "run"},   {"keso", "eat"},   {"mira", "see"},
    {"fulo", "house"}, {"sera", "water"}, {"litu", "dog"},   {"gano", "stone"},
    {"pemi", "sing"},  {"roka", "walk"},  {"subi", "fish"},  {"tale", "tree"},
    {"veno", "bird"},  {"wira", "sleep"}, {"yomu", "speak"}, {"zeka", "give"},
}};

inline constexpr std::array<Morpheme, 8> kSuffixes{{
    {"ka", "PL"}, {"ti", "3SG"}, {"mo", "PST"}, {"su", "FUT"},
    {"ne", "NEG"}, {"ri", "LOC"}, {"ba", "CAUS"}, {"du", "DU"},
}};

}  // namespace synth

inline std::vector<IgtEntry> gen_synthetic(std::uint64_t seed, std::size_t size,
                                           SynthProfile profile) {
    if (size < 1) throw ConfigError("gen_synthetic: size must be >= 1");
    SplitMix64 rng(seed);
    std::vector<IgtEntry> entries;
    entries.reserve(size);

    for (std::size_t s = 0; s < size; ++s) {
        const std::size_t n_words = 2 + rng.next_below(6);  // 2..7
        std::string transcription, segmentation, gloss;
        std::vector<std::string> stem_glosses;

        for (std::size_t w = 0; w < n_words; ++w) {
            const synth::Morpheme& stem = synth::kStems[rng.next_below(synth::kStems.size())];
            std::vector<std::size_t> suffix_idx;
            if (profile == SynthProfile::agglutinative) {
                const std::size_t k = rng.next_below(4);  // 0..3 suffixes
                std::vector<std::size_t> pool(synth::kSuffixes.size());
                std::iota(pool.begin(), pool.end(), std::size_t{0});
                rng.shuffle(pool);
                suffix_idx.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
                std::sort(suffix_idx.begin(), suffix_idx.end());  // canonical suffix order
            }

            std::string surface(stem.surface);
            std::string segmented(stem.surface);
            std::string word_gloss(stem.gloss);
            for (std::size_t idx : suffix_idx) {
                surface += synth::kSuffixes[idx].surface;
                segmented += "-";
                segmented += synth::kSuffixes[idx].surface;
                word_gloss += "-";
                word_gloss += synth::kSuffixes[idx].gloss;
            }

            if (w > 0) {
                transcription += " ";
                segmentation += " ";
                gloss += " ";
            }
            transcription += surface;
            segmentation += segmented;
            gloss += word_gloss;
            stem_glosses.emplace_back(stem.gloss);
        }

        rng.shuffle(stem_glosses);
        std::string translation;
        for (std::size_t i = 0; i < stem_glosses.size(); ++i) {
            if (i > 0) translation += " ";
            translation += stem_glosses[i];
        }
        if (!translation.empty()) {
            translation[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(translation[0])));
            translation += ".";
        }

        IgtEntry entry;
        entry.transcription = std::move(transcription);
        entry.segmentation = std::move(segmentation);
        entry.gloss = std::move(gloss);
        entry.translation = std::move(translation);
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace glosskit
