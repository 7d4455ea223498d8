// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Glossing metrics: morpheme/word accuracy (overall and per-sentence
// average), stem/gram precision-recall-F1, and corpus BLEU over the
// morpheme gloss sequence.
//
// Alignment is positional throughout: the classifier can neither insert nor
// delete tokens, so position i of the prediction is compared with position i
// of the gold line. Pred-side overhang counts against precision, gold-side
// overhang against recall/accuracy denominators.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "glosskit/errors.hpp"
#include "glosskit/igt.hpp"
#include "glosskit/tokenize.hpp"

namespace glosskit::eval {

enum class PieceKind { stem, gram };

struct GlossPiece {
    std::string text;
    PieceKind kind;
};

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    double morpheme_acc_overall = 0.0;
    double morpheme_acc_avg = 0.0;
    double word_acc_overall = 0.0;
    double word_acc_avg = 0.0;
    double bleu = 0.0;
    Prf stems;
    Prf grams;
    struct Counts {
        std::size_t sentences = 0;
        std::size_t gold_words = 0;
        std::size_t gold_morphemes = 0;
    } counts;
    std::vector<std::string> warnings;
};

namespace detail {

// Splits at `sep` outside {...}; empty fragments are dropped.
inline std::vector<std::string> split_outside_braces(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string current;
    int depth = 0;
    for (char c : s) {
        if (c == '{') ++depth;
        if (c == '}' && depth > 0) --depth;
        if (c == sep && depth == 0) {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

}  // namespace detail

// One word gloss -> bare morpheme gloss pieces: "cat-PL" -> ["cat", "PL"].
// Dots never split here; they join the compound gloss of a single morpheme.
inline std::vector<std::string> split_word_gloss(std::string_view word_gloss) {
    return detail::split_outside_braces(word_gloss, '-');
}

// Dot-separated sub-pieces of a morpheme gloss, the stem/gram bookkeeping
// unit: "Neg.3sf" -> ["Neg", "3sf"].
inline std::vector<std::string> split_subpieces(std::string_view morpheme_gloss) {
    return detail::split_outside_braces(morpheme_gloss, '.');
}

// With an inventory, membership alone decides. Without one, a piece with no
// lowercase letter is a gram — the stand-in convention for corpora that
// uppercase their grammatical categories.
inline PieceKind classify_piece(std::string_view piece,
                                const std::set<std::string>* gram_inventory = nullptr) {
    if (gram_inventory != nullptr) {
        return gram_inventory->contains(std::string(piece)) ? PieceKind::gram : PieceKind::stem;
    }
    for (char32_t cp : utf8::decode(piece)) {
        if (utf8::is_lowercase(cp)) return PieceKind::stem;
    }
    return PieceKind::gram;
}

namespace detail {

inline void require_equal_sizes(std::size_t pred, std::size_t gold, const char* what) {
    if (pred != gold) {
        throw LengthMismatchError(std::string(what) + ": " + std::to_string(pred) +
                                  " predicted vs " + std::to_string(gold) + " gold sentences");
    }
}

inline std::vector<std::vector<std::string>> line_to_word_pieces(std::string_view line) {
    std::vector<std::vector<std::string>> words;
    for (const std::string& w : glosskit::detail::split_whitespace(line)) {
        words.push_back(split_word_gloss(w));
    }
    return words;
}

}  // namespace detail

// (overall, per-sentence average). The unit is the morpheme gloss piece;
// denominators are gold pieces, so extra predicted pieces cost nothing here
// (they are precision's problem) while missing ones count as wrong.
inline std::pair<double, double> morpheme_accuracy(const std::vector<std::string>& pred,
                                                   const std::vector<std::string>& gold) {
    detail::require_equal_sizes(pred.size(), gold.size(), "morpheme_accuracy");
    std::size_t total_matches = 0;
    std::size_t total_gold = 0;
    double ratio_sum = 0.0;
    std::size_t ratio_count = 0;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        const auto pred_words = detail::line_to_word_pieces(pred[s]);
        const auto gold_words = detail::line_to_word_pieces(gold[s]);
        std::size_t matches = 0;
        std::size_t gold_pieces = 0;
        for (const auto& gw : gold_words) gold_pieces += gw.size();
        const std::size_t words = std::min(pred_words.size(), gold_words.size());
        for (std::size_t w = 0; w < words; ++w) {
            const std::size_t pieces = std::min(pred_words[w].size(), gold_words[w].size());
            for (std::size_t p = 0; p < pieces; ++p) {
                if (pred_words[w][p] == gold_words[w][p]) ++matches;
            }
        }
        total_matches += matches;
        total_gold += gold_pieces;
        if (gold_pieces > 0) {
            ratio_sum += static_cast<double>(matches) / static_cast<double>(gold_pieces);
            ++ratio_count;
        }
    }
    const double overall =
        total_gold == 0 ? 1.0 : static_cast<double>(total_matches) / static_cast<double>(total_gold);
    const double avg = ratio_count == 0 ? 1.0 : ratio_sum / static_cast<double>(ratio_count);
    return {overall, avg};
}

// (overall, per-sentence average); a word is correct iff its full gloss
// string matches at its position.
inline std::pair<double, double> word_accuracy(const std::vector<std::string>& pred,
                                               const std::vector<std::string>& gold) {
    detail::require_equal_sizes(pred.size(), gold.size(), "word_accuracy");
    std::size_t total_matches = 0;
    std::size_t total_gold = 0;
    double ratio_sum = 0.0;
    std::size_t ratio_count = 0;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        const auto pred_words = glosskit::detail::split_whitespace(pred[s]);
        const auto gold_words = glosskit::detail::split_whitespace(gold[s]);
        std::size_t matches = 0;
        const std::size_t words = std::min(pred_words.size(), gold_words.size());
        for (std::size_t w = 0; w < words; ++w) {
            if (pred_words[w] == gold_words[w]) ++matches;
        }
        total_matches += matches;
        total_gold += gold_words.size();
        if (!gold_words.empty()) {
            ratio_sum += static_cast<double>(matches) / static_cast<double>(gold_words.size());
            ++ratio_count;
        }
    }
    const double overall =
        total_gold == 0 ? 1.0 : static_cast<double>(total_matches) / static_cast<double>(total_gold);
    const double avg = ratio_count == 0 ? 1.0 : ratio_sum / static_cast<double>(ratio_count);
    return {overall, avg};
}

struct StemGramResult {
    Prf stems;
    Prf grams;
    bool no_gold_stems = false;
    bool no_gold_grams = false;
};

// P/R/F1 over dot/dash sub-pieces, aligned positionally within each word.
// A true positive requires an exact string match; the matched piece's class
// is taken from the gold side.
inline StemGramResult stem_gram_prf(const std::vector<std::string>& pred,
                                    const std::vector<std::string>& gold,
                                    const std::set<std::string>* gram_inventory = nullptr) {
    detail::require_equal_sizes(pred.size(), gold.size(), "stem_gram_prf");

    const auto flatten_word = [&](std::string_view word) {
        std::vector<std::string> pieces;
        for (const std::string& m : split_word_gloss(word)) {
            for (std::string& sub : split_subpieces(m)) pieces.push_back(std::move(sub));
        }
        return pieces;
    };
    const auto is_gram = [&](const std::string& piece) {
        return classify_piece(piece, gram_inventory) == PieceKind::gram;
    };

    std::size_t tp_stem = 0, tp_gram = 0;
    std::size_t pred_stem = 0, pred_gram = 0;
    std::size_t gold_stem = 0, gold_gram = 0;

    for (std::size_t s = 0; s < gold.size(); ++s) {
        const auto pred_words = glosskit::detail::split_whitespace(pred[s]);
        const auto gold_words = glosskit::detail::split_whitespace(gold[s]);
        const std::size_t max_words = std::max(pred_words.size(), gold_words.size());
        for (std::size_t w = 0; w < max_words; ++w) {
            const std::vector<std::string> pp =
                w < pred_words.size() ? flatten_word(pred_words[w]) : std::vector<std::string>{};
            const std::vector<std::string> gp =
                w < gold_words.size() ? flatten_word(gold_words[w]) : std::vector<std::string>{};
            for (const std::string& piece : pp) (is_gram(piece) ? pred_gram : pred_stem) += 1;
            for (const std::string& piece : gp) (is_gram(piece) ? gold_gram : gold_stem) += 1;
            const std::size_t n = std::min(pp.size(), gp.size());
            for (std::size_t p = 0; p < n; ++p) {
                if (pp[p] == gp[p]) (is_gram(gp[p]) ? tp_gram : tp_stem) += 1;
            }
        }
    }

    const auto make_prf = [](std::size_t tp, std::size_t pred_n, std::size_t gold_n) {
        Prf prf;
        prf.precision = pred_n == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred_n);
        prf.recall = gold_n == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold_n);
        prf.f1 = (prf.precision + prf.recall) > 0.0
                     ? 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall)
                     : 0.0;
        return prf;
    };

    StemGramResult result;
    result.stems = make_prf(tp_stem, pred_stem, gold_stem);
    result.grams = make_prf(tp_gram, pred_gram, gold_gram);
    result.no_gold_stems = gold_stem == 0;
    result.no_gold_grams = gold_gram == 0;
    return result;
}

// Corpus BLEU over flattened morpheme gloss pieces. Clipped n-gram matches
// and totals are summed across sentences; n-levels with no hypothesis
// n-grams anywhere are excluded from the geometric mean; an included zero
// precision makes the score 0 unless add-one smoothing is on. The brevity
// penalty is exp(1 - ref_len/hyp_len) for short hypotheses.
inline double bleu(const std::vector<std::string>& pred, const std::vector<std::string>& gold,
                   std::size_t max_n = 4, bool add_one_smoothing = false) {
    detail::require_equal_sizes(pred.size(), gold.size(), "bleu");
    if (max_n < 1) throw ConfigError("bleu: max_n must be >= 1");

    const auto flatten_line = [](const std::string& line) {
        std::vector<std::string> pieces;
        for (const std::string& w : glosskit::detail::split_whitespace(line)) {
            for (std::string& m : split_word_gloss(w)) pieces.push_back(std::move(m));
        }
        return pieces;
    };

    std::vector<std::size_t> matches(max_n, 0);
    std::vector<std::size_t> totals(max_n, 0);
    std::size_t hyp_len = 0;
    std::size_t ref_len = 0;

    for (std::size_t s = 0; s < gold.size(); ++s) {
        const std::vector<std::string> hyp = flatten_line(pred[s]);
        const std::vector<std::string> ref = flatten_line(gold[s]);
        hyp_len += hyp.size();
        ref_len += ref.size();
        for (std::size_t n = 1; n <= max_n; ++n) {
            if (hyp.size() < n) break;
            std::map<std::vector<std::string>, std::size_t> hyp_counts;
            for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
                ++hyp_counts[std::vector<std::string>(hyp.begin() + static_cast<std::ptrdiff_t>(i),
                                                      hyp.begin() + static_cast<std::ptrdiff_t>(i + n))];
            }
            std::map<std::vector<std::string>, std::size_t> ref_counts;
            for (std::size_t i = 0; i + n <= ref.size(); ++i) {
                ++ref_counts[std::vector<std::string>(ref.begin() + static_cast<std::ptrdiff_t>(i),
                                                      ref.begin() + static_cast<std::ptrdiff_t>(i + n))];
            }
            totals[n - 1] += hyp.size() - n + 1;
            for (const auto& [gram, count] : hyp_counts) {
                const auto it = ref_counts.find(gram);
                if (it != ref_counts.end()) matches[n - 1] += std::min(count, it->second);
            }
        }
    }

    if (hyp_len == 0) return ref_len == 0 ? 1.0 : 0.0;

    double log_sum = 0.0;
    std::size_t included = 0;
    for (std::size_t n = 0; n < max_n; ++n) {
        if (totals[n] == 0) continue;
        ++included;
        const double m = static_cast<double>(matches[n]) + (add_one_smoothing ? 1.0 : 0.0);
        const double t = static_cast<double>(totals[n]) + (add_one_smoothing ? 1.0 : 0.0);
        if (m == 0.0) return 0.0;
        log_sum += std::log(m / t);
    }
    if (included == 0) return 0.0;

    const double brevity =
        hyp_len < ref_len
            ? std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len))
            : 1.0;
    return brevity * std::exp(log_sum / static_cast<double>(included));
}

struct BleuOptions {
    std::size_t max_n = 4;
    bool add_one_smoothing = false;
};

// Full report over aligned corpora. Gold entries must carry gloss lines;
// predicted entries without one evaluate as empty (everything wrong).
inline MetricsReport evaluate(const std::vector<IgtEntry>& pred_entries,
                              const std::vector<IgtEntry>& gold_entries, Track track,
                              const std::set<std::string>* gram_inventory = nullptr,
                              BleuOptions bleu_options = {}) {
    (void)track;  // metrics read gloss lines only; both tracks score identically
    detail::require_equal_sizes(pred_entries.size(), gold_entries.size(), "evaluate");

    std::vector<std::string> pred;
    std::vector<std::string> gold;
    pred.reserve(pred_entries.size());
    gold.reserve(gold_entries.size());
    for (std::size_t i = 0; i < gold_entries.size(); ++i) {
        if (!gold_entries[i].gloss.has_value()) {
            throw MissingGlossError("gold entry " + std::to_string(i) + " has no gloss line");
        }
        gold.push_back(*gold_entries[i].gloss);
        pred.push_back(pred_entries[i].gloss.value_or(""));
    }

    MetricsReport report;
    std::tie(report.morpheme_acc_overall, report.morpheme_acc_avg) = morpheme_accuracy(pred, gold);
    std::tie(report.word_acc_overall, report.word_acc_avg) = word_accuracy(pred, gold);
    const StemGramResult sg = stem_gram_prf(pred, gold, gram_inventory);
    report.stems = sg.stems;
    report.grams = sg.grams;
    report.bleu = bleu(pred, gold, bleu_options.max_n, bleu_options.add_one_smoothing);

    report.counts.sentences = gold.size();
    for (const std::string& line : gold) {
        for (const std::string& w : glosskit::detail::split_whitespace(line)) {
            report.counts.gold_words += 1;
            report.counts.gold_morphemes += split_word_gloss(w).size();
        }
    }
    if (sg.no_gold_stems) report.warnings.push_back("no gold stem pieces; stem recall defined as 0");
    if (sg.no_gold_grams) report.warnings.push_back("no gold gram pieces; gram recall defined as 0");
    return report;
}

inline nlohmann::json report_to_json(const MetricsReport& r) {
    nlohmann::json j{
        {"morpheme_acc_overall", r.morpheme_acc_overall},
        {"morpheme_acc_avg", r.morpheme_acc_avg},
        {"word_acc_overall", r.word_acc_overall},
        {"word_acc_avg", r.word_acc_avg},
        {"bleu", r.bleu},
        {"stems", {{"precision", r.stems.precision}, {"recall", r.stems.recall}, {"f1", r.stems.f1}}},
        {"grams", {{"precision", r.grams.precision}, {"recall", r.grams.recall}, {"f1", r.grams.f1}}},
        {"counts",
         {{"sentences", r.counts.sentences},
          {"gold_words", r.counts.gold_words},
          {"gold_morphemes", r.counts.gold_morphemes}}},
    };
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

// Plain-text table with the usual glossing-results column layout, values as
// percentages.
inline std::string report_table(const MetricsReport& r) {
    const auto pct = [](double v) {
        std::ostringstream os;
        os.setf(std::ios::fixed);
        os.precision(1);
        os << 100.0 * v;
        return os.str();
    };
    std::ostringstream os;
    os << "Acc. (Morpheme)    Acc. (Word)        BLEU     Stems                 Grams\n";
    os << "Ovr.     Avg.      Ovr.     Avg.               P      R      F1      P      R      F1\n";
    const std::string cells[] = {pct(r.morpheme_acc_overall), pct(r.morpheme_acc_avg),
                                 pct(r.word_acc_overall),     pct(r.word_acc_avg),
                                 pct(r.bleu),                 pct(r.stems.precision),
                                 pct(r.stems.recall),         pct(r.stems.f1),
                                 pct(r.grams.precision),      pct(r.grams.recall),
                                 pct(r.grams.f1)};
    const int widths[] = {9, 10, 9, 10, 9, 7, 7, 8, 7, 7, 7};
    for (std::size_t i = 0; i < 11; ++i) {
        std::string cell = cells[i];
        cell.resize(static_cast<std::size_t>(widths[i]), ' ');
        os << cell;
    }
    os << "\n";
    return os.str();
}

}  // namespace glosskit::eval
