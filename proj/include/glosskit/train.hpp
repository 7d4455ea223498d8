// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Training and prediction. Everything is deterministic given the seeds:
// initialization draws from the model seed, per-epoch shuffles come from
// {shuffle_seed, epoch} streams, and the forward/backward path is
// single-threaded IEEE arithmetic, so identical inputs give bitwise
// identical checkpoints.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "glosskit/adamw.hpp"
#include "glosskit/checkpoint.hpp"
#include "glosskit/encode.hpp"
#include "glosskit/igt.hpp"
#include "glosskit/model.hpp"
#include "glosskit/rng.hpp"

namespace glosskit {

struct TrainConfig {
    // Defaults for the small from-scratch configuration. The full-size
    // preset trains with lr 2e-5; a tiny randomly initialized encoder needs
    // a larger step to converge in a sane number of epochs.
    double lr = 3e-4;
    std::size_t epochs = 80;
    std::size_t batch_size = 16;
    double weight_decay = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t shuffle_seed = 0;
    std::size_t min_count = 1;          // source/translation vocabulary cutoff
    bool lowercase_translation = true;
    bool skip_flagged = false;          // also skip entries with non-blocking issues

    void validate() const {
        if (epochs < 1) throw ConfigError("epochs must be >= 1");
        if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
        if (min_count < 1) throw ConfigError("min_count must be >= 1");
        if (beta1 < 0 || beta1 >= 1 || beta2 < 0 || beta2 >= 1) {
            throw ConfigError("beta1/beta2 must lie in [0, 1)");
        }
    }
};

inline TrainConfig desk_train_config() { return TrainConfig{}; }

inline TrainConfig paper_train_config() {
    TrainConfig c;
    c.lr = 2e-5;
    return c;
}

struct TrainResult {
    ModelCheckpoint checkpoint;
    std::vector<double> epoch_losses;
    std::vector<std::string> warnings;
};

namespace detail {

// An issue that breaks the 1:1 token/label alignment encoding relies on.
inline bool blocks_training(const Issue& issue) {
    return issue.kind == Issue::Kind::count_mismatch ||
           issue.kind == Issue::Kind::missing_segmentation;
}

struct BatchTargets {
    std::vector<std::int32_t> targets;
    std::vector<std::uint8_t> ignore;
};

inline BatchTargets batch_targets(const std::vector<TokenizedExample>& batch, std::size_t padded_len) {
    BatchTargets bt;
    bt.targets.assign(batch.size() * padded_len, 0);
    bt.ignore.assign(batch.size() * padded_len, 1);
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const TokenizedExample& ex = batch[b];
        for (std::size_t i = 0; i < ex.label_positions.size(); ++i) {
            const std::size_t row = b * padded_len + static_cast<std::size_t>(ex.label_positions[i]);
            bt.targets[row] = ex.label_ids[i];
            bt.ignore[row] = 0;
        }
    }
    return bt;
}

}  // namespace detail

// Trains a model from scratch on `corpus`. Entries without a gloss line or
// with alignment-breaking validation issues are skipped with a warning;
// everything else is fatal only when no usable entry remains.
inline TrainResult train(const std::vector<IgtEntry>& corpus, Track track, ModelConfig model_config,
                         const TrainConfig& train_config) {
    train_config.validate();
    if (corpus.empty()) throw EmptyCorpusError("training corpus is empty");

    TrainResult result;
    std::vector<const IgtEntry*> usable;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const IgtEntry& e = corpus[i];
        if (!e.gloss.has_value()) {
            result.warnings.push_back("entry " + std::to_string(i) + ": no gloss line, skipped");
            continue;
        }
        const std::vector<Issue> issues = validate_entry(e, track);
        const bool blocked =
            std::any_of(issues.begin(), issues.end(), detail::blocks_training) ||
            (train_config.skip_flagged && !issues.empty());
        if (blocked) {
            result.warnings.push_back("entry " + std::to_string(i) + ": validation issues, skipped");
            continue;
        }
        const std::string& src_line = (track == Track::open) ? *e.segmentation : e.transcription;
        if (tokenize_transcription(src_line, track).empty()) {
            result.warnings.push_back("entry " + std::to_string(i) + ": no labelable tokens, skipped");
            continue;
        }
        usable.push_back(&e);
    }
    if (usable.empty()) throw EmptyCorpusError("no usable glossed entry in the training corpus");

    std::vector<std::vector<std::string>> src_lists, trans_lists, label_lists;
    src_lists.reserve(usable.size());
    for (const IgtEntry* e : usable) {
        const std::string& src_line =
            (track == Track::open) ? *e->segmentation : e->transcription;
        src_lists.push_back(tokenize_transcription(src_line, track));
        trans_lists.push_back(e->translation
                                  ? tokenize_translation(*e->translation, train_config.lowercase_translation)
                                  : std::vector<std::string>{});
        label_lists.push_back(tokenize_gloss(*e->gloss, track));
    }

    ModelCheckpoint& ckpt = result.checkpoint;
    ckpt.track = track;
    ckpt.lowercase_translation = train_config.lowercase_translation;
    ckpt.src_vocab = build_vocab(src_lists, train_config.min_count);
    ckpt.trans_vocab = build_vocab(trans_lists, train_config.min_count);
    ckpt.label_vocab = build_vocab(label_lists, 1);

    model_config.src_vocab_size = ckpt.src_vocab.size();
    model_config.trans_vocab_size = ckpt.trans_vocab.size();
    model_config.label_count = ckpt.label_vocab.size();
    model_config.validate();
    ckpt.config = model_config;

    if (model_config.label_count > 10 * usable.size()) {
        result.warnings.push_back("label explosion: " + std::to_string(model_config.label_count) +
                                  " labels for " + std::to_string(usable.size()) +
                                  " entries; check the gloss lines");
    }

    std::vector<TokenizedExample> examples;
    examples.reserve(usable.size());
    for (const IgtEntry* e : usable) {
        examples.push_back(encode_example(*e, ckpt.src_vocab, ckpt.trans_vocab, ckpt.label_vocab,
                                          track, model_config.max_len,
                                          train_config.lowercase_translation));
    }

    ckpt.params = init_model<float>(model_config);

    nn::AdamWHyper hyper{train_config.lr, train_config.beta1, train_config.beta2, train_config.eps,
                         train_config.weight_decay};
    std::vector<nn::AdamWState<float>> opt_states;
    opt_states.reserve(ckpt.params.tensors.size());
    for (const auto& t : ckpt.params.tensors) opt_states.emplace_back(t.data.size(), hyper);

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 1; epoch <= train_config.epochs; ++epoch) {
        SplitMix64 shuffle_rng(train_config.shuffle_seed, epoch);
        shuffle_rng.shuffle(order);

        double epoch_loss_sum = 0.0;
        std::size_t epoch_positions = 0;

        for (std::size_t start = 0; start < order.size(); start += train_config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + train_config.batch_size);
            std::vector<TokenizedExample> batch;
            batch.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) batch.push_back(examples[order[i]]);

            std::vector<SequenceCache<float>> caches;
            std::size_t padded_len = 0;
            Matrix<float> logits = forward(model_config, ckpt.params, batch, &caches, &padded_len);
            const detail::BatchTargets bt = detail::batch_targets(batch, padded_len);
            nn::CrossEntropyResult<float> ce = nn::cross_entropy(logits, bt.targets, bt.ignore);

            epoch_loss_sum += static_cast<double>(ce.loss) * static_cast<double>(ce.counted);
            epoch_positions += ce.counted;

            ParamSet<float> grads = zero_params<float>(model_config);
            Matrix<float> seq_grad(padded_len, model_config.label_count);
            for (std::size_t b = 0; b < batch.size(); ++b) {
                std::copy(ce.grad_logits.row(b * padded_len),
                          ce.grad_logits.row(b * padded_len) + padded_len * model_config.label_count,
                          seq_grad.data.begin());
                backward_sequence(model_config, ckpt.params, caches[b], seq_grad, grads);
            }

            for (std::size_t t = 0; t < ckpt.params.tensors.size(); ++t) {
                nn::adamw_step<float>(ckpt.params.tensors[t].data,
                                      std::span<const float>(grads.tensors[t].data), opt_states[t]);
            }
        }

        result.epoch_losses.push_back(epoch_loss_sum / static_cast<double>(epoch_positions));
    }

    ckpt.train_meta.epochs_completed = train_config.epochs;
    ckpt.train_meta.final_loss = result.epoch_losses.back();
    return result;
}

// Greedy per-position decoding: argmax over real labels (<pad>, <unk> and
// <sep> are never emitted), ties broken toward the lowest label id.
inline std::vector<std::string> predict(const ModelCheckpoint& ckpt,
                                        const std::vector<IgtEntry>& entries, Track track) {
    if (track != ckpt.track) {
        throw ConfigError(std::string("checkpoint was trained for the ") +
                          std::string(track_name(ckpt.track)) + " track, got " +
                          std::string(track_name(track)));
    }
    if (ckpt.config.label_count <= Vocabulary::num_specials) {
        throw ConfigError("checkpoint has no real labels to predict");
    }

    std::vector<std::string> lines;
    lines.reserve(entries.size());
    for (const IgtEntry& entry : entries) {
        const std::string* src_line = &entry.transcription;
        if (track == Track::open) {
            if (!entry.segmentation.has_value()) {
                throw MissingSegmentationError("open-track prediction requires a segmentation line");
            }
            src_line = &*entry.segmentation;
        }
        const std::size_t full_tokens = tokenize_transcription(*src_line, track).size();
        TokenizedExample ex = encode_example(entry, ckpt.src_vocab, ckpt.trans_vocab,
                                             ckpt.label_vocab, track, ckpt.config.max_len,
                                             ckpt.lowercase_translation);
        if (ex.tokens.size() != full_tokens) {
            // Truncation would silently shorten the predicted gloss line.
            throw SequenceTooLongError("entry does not fit max_len without dropping labeled tokens");
        }
        Matrix<float> logits = forward_sequence(ckpt.config, ckpt.params,
                                                std::span<const std::int32_t>(ex.input_ids));
        std::vector<std::int32_t> best(ex.label_positions.size());
        for (std::size_t i = 0; i < ex.label_positions.size(); ++i) {
            const float* row = logits.row(static_cast<std::size_t>(ex.label_positions[i]));
            std::size_t arg = Vocabulary::num_specials;
            for (std::size_t j = arg + 1; j < ckpt.config.label_count; ++j) {
                if (row[j] > row[arg]) arg = j;
            }
            best[i] = static_cast<std::int32_t>(arg);
        }
        lines.push_back(decode_predictions(best, ex.tokens, ckpt.label_vocab, track));
    }
    return lines;
}

}  // namespace glosskit
