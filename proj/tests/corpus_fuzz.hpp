// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Randomized prediction/gold gloss-corpus pairs for metric fuzzing: gold
// words are stem + gram pieces, predictions are corrupted copies (piece
// replacement plus occasional structural edits so the overhang rules get
// exercised).

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "glosskit/rng.hpp"

namespace gktest {

struct FuzzOptions {
    std::size_t min_sentences = 5;
    std::size_t max_sentences = 50;
    std::size_t max_words = 8;      // words per sentence, >= 1
    std::size_t max_morphemes = 4;  // morpheme pieces per word, >= 1
    double piece_corruption = 0.30;
    bool structural_edits = true;
};

struct FuzzCorpus {
    std::vector<std::string> pred;
    std::vector<std::string> gold;
};

inline FuzzCorpus random_gloss_corpus(glosskit::SplitMix64& rng, const FuzzOptions& opt = {}) {
    static const std::vector<std::string> stems{"nino", "run",  "eat",  "cat",
                                                "go",   "see",  "walk", "fish"};
    static const std::vector<std::string> grams{"PL",  "3SG", "PST", "NEG",
                                                "DU",  "LOC", "FUT", "2PL"};
    static const std::vector<std::string> compounds{"Neg.3sf", "IPFV.2PL", "to.DAT"};

    const auto random_piece = [&]() -> std::string {
        const std::size_t r = rng.next_below(8);
        if (r < 4) return stems[rng.next_below(stems.size())];
        if (r < 7) return grams[rng.next_below(grams.size())];
        return compounds[rng.next_below(compounds.size())];
    };

    const auto join = [](const std::vector<std::string>& pieces) {
        std::string word;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (i > 0) word += "-";
            word += pieces[i];
        }
        return word;
    };

    FuzzCorpus corpus;
    const std::size_t sentences =
        opt.min_sentences + rng.next_below(opt.max_sentences - opt.min_sentences + 1);
    for (std::size_t s = 0; s < sentences; ++s) {
        std::vector<std::vector<std::string>> gold_words;
        const std::size_t n_words = 1 + rng.next_below(opt.max_words);
        for (std::size_t w = 0; w < n_words; ++w) {
            std::vector<std::string> pieces{stems[rng.next_below(stems.size())]};
            const std::size_t extra = rng.next_below(opt.max_morphemes);
            for (std::size_t m = 0; m < extra; ++m) {
                pieces.push_back(rng.next_below(4) == 0
                                     ? compounds[rng.next_below(compounds.size())]
                                     : grams[rng.next_below(grams.size())]);
            }
            gold_words.push_back(std::move(pieces));
        }

        std::vector<std::vector<std::string>> pred_words = gold_words;
        for (auto& word : pred_words) {
            for (auto& piece : word) {
                if (rng.next_double() < opt.piece_corruption) piece = random_piece();
            }
        }
        if (opt.structural_edits) {
            if (pred_words.size() > 1 && rng.next_double() < 0.10) pred_words.pop_back();
            if (rng.next_double() < 0.10) pred_words.push_back({random_piece()});
            if (pred_words[0].size() > 1 && rng.next_double() < 0.05) pred_words[0].pop_back();
            if (rng.next_double() < 0.05) pred_words[0].push_back(random_piece());
        }

        std::string gold_line, pred_line;
        for (std::size_t w = 0; w < gold_words.size(); ++w) {
            if (w > 0) gold_line += " ";
            gold_line += join(gold_words[w]);
        }
        for (std::size_t w = 0; w < pred_words.size(); ++w) {
            if (w > 0) pred_line += " ";
            pred_line += join(pred_words[w]);
        }
        corpus.gold.push_back(std::move(gold_line));
        corpus.pred.push_back(std::move(pred_line));
    }
    return corpus;
}

}  // namespace gktest
