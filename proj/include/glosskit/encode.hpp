// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Entry -> id sequence encoding and the inverse gloss-line reassembly.
//
// The input layout is
//     [transcription ids] <sep> [translation ids + offset]
// where offset = size(source vocab), so the two vocabularies occupy disjoint
// ranges of one embedding index space. Labels attach to the transcription
// positions only.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glosskit/errors.hpp"
#include "glosskit/igt.hpp"
#include "glosskit/tokenize.hpp"
#include "glosskit/vocab.hpp"

namespace glosskit {

struct TokenizedExample {
    std::vector<std::int32_t> input_ids;
    std::vector<std::int32_t> label_positions;  // indices into input_ids, strictly increasing
    std::vector<std::int32_t> label_ids;        // same length; <unk> where the gold label is unseen
    std::vector<std::string> tokens;            // the labeled surface tokens, for decoding
};

// Encodes one entry. Truncation to max_len drops translation ids first, then
// transcription ids from the end (each dropped transcription position takes
// its label with it). Throws EmptyInputError when the transcription yields no
// tokens and MissingSegmentationError on open-track entries without \m.
inline TokenizedExample encode_example(const IgtEntry& entry, const Vocabulary& src_vocab,
                                       const Vocabulary& trans_vocab, const Vocabulary& label_vocab,
                                       Track track, std::size_t max_len,
                                       bool lowercase_translation = true) {
    const std::string* src_line = &entry.transcription;
    if (track == Track::open) {
        if (!entry.segmentation.has_value()) {
            throw MissingSegmentationError("open-track encoding requires a segmentation line");
        }
        src_line = &*entry.segmentation;
    }

    TokenizedExample ex;
    ex.tokens = tokenize_transcription(*src_line, track);
    if (ex.tokens.empty()) {
        throw EmptyInputError("transcription tokenized to zero tokens: " + entry.transcription);
    }

    std::vector<std::string> trans_tokens;
    if (entry.translation) trans_tokens = tokenize_translation(*entry.translation, lowercase_translation);

    const auto offset = static_cast<std::int32_t>(src_vocab.size());

    // Budget: transcription + separator + translation, translation first out.
    std::size_t n_src = ex.tokens.size();
    std::size_t n_trans = trans_tokens.size();
    if (max_len < 2) throw ConfigError("max_len must be >= 2");
    if (n_src + 1 + n_trans > max_len) {
        const std::size_t over = n_src + 1 + n_trans - max_len;
        const std::size_t cut = std::min(over, n_trans);
        n_trans -= cut;
        if (n_src + 1 + n_trans > max_len) n_src = max_len - 1;
    }
    ex.tokens.resize(n_src);

    std::vector<std::string> labels;
    if (entry.gloss) labels = tokenize_gloss(*entry.gloss, track);

    ex.input_ids.reserve(n_src + 1 + n_trans);
    for (std::size_t i = 0; i < n_src; ++i) {
        ex.input_ids.push_back(src_vocab.id_or_unk(ex.tokens[i]));
        ex.label_positions.push_back(static_cast<std::int32_t>(i));
        if (entry.gloss) {
            ex.label_ids.push_back(i < labels.size() ? label_vocab.id_or_unk(labels[i])
                                                     : Vocabulary::unk_id);
        } else {
            ex.label_ids.push_back(Vocabulary::unk_id);
        }
    }
    ex.input_ids.push_back(Vocabulary::sep_id);
    for (std::size_t i = 0; i < n_trans; ++i) {
        ex.input_ids.push_back(offset + trans_vocab.id_or_unk(trans_tokens[i]));
    }
    return ex;
}

// Reassembles a gloss line from per-position predicted labels. Open track:
// a token starting with "-" continues the current word; the predicted label
// loses any leading "-" and word-internal glosses are joined with "-".
inline std::string decode_predictions(const std::vector<std::int32_t>& label_ids_per_position,
                                      const std::vector<std::string>& tokens,
                                      const Vocabulary& label_vocab, Track track) {
    if (label_ids_per_position.size() != tokens.size()) {
        throw LengthMismatchError("decode_predictions: " + std::to_string(label_ids_per_position.size()) +
                                  " labels for " + std::to_string(tokens.size()) + " tokens");
    }
    std::string line;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string label = label_vocab.token(label_ids_per_position[i]);
        if (track == Track::open) {
            const bool continues_word = tokens[i].starts_with('-');
            if (!label.empty() && label.front() == '-') label.erase(label.begin());
            if (i > 0) line += continues_word ? "-" : " ";
        } else if (i > 0) {
            line += " ";
        }
        line += label;
    }
    return line;
}

}  // namespace glosskit
