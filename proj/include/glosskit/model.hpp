// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// The token-classification encoder: embeddings (token + learned position),
// `layers` post-norm transformer blocks, and a linear head over the label
// vocabulary. Sequences in a batch run independently, so logits at real
// positions are bitwise independent of trailing padding (masked keys get
// exactly zero attention weight).

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glosskit/encode.hpp"
#include "glosskit/matrix.hpp"
#include "glosskit/nn.hpp"
#include "glosskit/rng.hpp"

namespace glosskit {

struct ModelConfig {
    std::size_t layers = 2;
    std::size_t hidden = 64;
    std::size_t heads = 4;
    std::size_t ffn_dim = 256;
    std::size_t max_len = 128;
    std::size_t src_vocab_size = 0;
    std::size_t trans_vocab_size = 0;
    std::size_t label_count = 0;
    std::uint64_t seed = 0;

    void validate() const {
        if (layers < 1 || hidden < 1 || heads < 1 || ffn_dim < 1) {
            throw ConfigError("model sizes must be >= 1");
        }
        if (hidden % heads != 0) throw ConfigError("hidden must be divisible by heads");
        if (max_len < 2) throw ConfigError("max_len must be >= 2");
        if (src_vocab_size < 1 || trans_vocab_size < 1 || label_count < 1) {
            throw ConfigError("vocabulary sizes must be >= 1");
        }
    }
};

// Small configuration that trains in seconds on one CPU core.
inline ModelConfig desk_model_config() { return ModelConfig{}; }

// The full-size architecture; provided for completeness, far too slow to
// train on a desk machine.
inline ModelConfig paper_model_config() {
    ModelConfig c;
    c.layers = 12;
    c.hidden = 768;
    c.heads = 12;
    c.ffn_dim = 3072;
    c.max_len = 512;
    return c;
}

struct ParamSpec {
    std::string name;
    std::size_t rows;
    std::size_t cols;
    bool random_init;  // N(0, 0.02) weights vs. constant-initialized bias/affine
    float init_fill;   // used when !random_init
};

// Fixed parameter order; the checkpoint stores arrays in exactly this order.
inline std::vector<ParamSpec> param_manifest(const ModelConfig& c) {
    std::vector<ParamSpec> specs;
    specs.push_back({"embed.token", c.src_vocab_size + c.trans_vocab_size, c.hidden, true, 0.f});
    specs.push_back({"embed.position", c.max_len, c.hidden, true, 0.f});
    for (std::size_t l = 0; l < c.layers; ++l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        specs.push_back({p + "attn.wq", c.hidden, c.hidden, true, 0.f});
        specs.push_back({p + "attn.wk", c.hidden, c.hidden, true, 0.f});
        specs.push_back({p + "attn.wv", c.hidden, c.hidden, true, 0.f});
        specs.push_back({p + "attn.wo", c.hidden, c.hidden, true, 0.f});
        specs.push_back({p + "ln1.gamma", 1, c.hidden, false, 1.f});
        specs.push_back({p + "ln1.beta", 1, c.hidden, false, 0.f});
        specs.push_back({p + "ffn.w1", c.hidden, c.ffn_dim, true, 0.f});
        specs.push_back({p + "ffn.b1", 1, c.ffn_dim, false, 0.f});
        specs.push_back({p + "ffn.w2", c.ffn_dim, c.hidden, true, 0.f});
        specs.push_back({p + "ffn.b2", 1, c.hidden, false, 0.f});
        specs.push_back({p + "ln2.gamma", 1, c.hidden, false, 1.f});
        specs.push_back({p + "ln2.beta", 1, c.hidden, false, 0.f});
    }
    specs.push_back({"head.w", c.hidden, c.label_count, true, 0.f});
    specs.push_back({"head.b", 1, c.label_count, false, 0.f});
    return specs;
}

// Tensor indices within the manifest order.
namespace pidx {
inline constexpr std::size_t embed_token = 0;
inline constexpr std::size_t embed_position = 1;
inline constexpr std::size_t per_layer = 12;
inline std::size_t layer_base(std::size_t l) { return 2 + l * per_layer; }
inline constexpr std::size_t wq = 0, wk = 1, wv = 2, wo = 3, ln1_gamma = 4, ln1_beta = 5,
                             ffn_w1 = 6, ffn_b1 = 7, ffn_w2 = 8, ffn_b2 = 9, ln2_gamma = 10,
                             ln2_beta = 11;
inline std::size_t head_w(const ModelConfig& c) { return 2 + c.layers * per_layer; }
inline std::size_t head_b(const ModelConfig& c) { return 3 + c.layers * per_layer; }
}  // namespace pidx

template <class Real>
struct ParamSet {
    std::vector<Matrix<Real>> tensors;

    Matrix<Real>& operator[](std::size_t i) { return tensors[i]; }
    const Matrix<Real>& operator[](std::size_t i) const { return tensors[i]; }

    std::size_t total_size() const {
        std::size_t n = 0;
        for (const auto& t : tensors) n += t.data.size();
        return n;
    }
};

template <class Real>
ParamSet<Real> zero_params(const ModelConfig& config) {
    ParamSet<Real> params;
    for (const ParamSpec& spec : param_manifest(config)) {
        params.tensors.emplace_back(spec.rows, spec.cols, Real(0));
    }
    return params;
}

// All weight matrices ~ N(0, 0.02) from one deterministic stream seeded by
// config.seed, consumed in manifest order; constant tensors draw nothing so
// the stream layout is stable across config changes that only touch them.
template <class Real = float>
ParamSet<Real> init_model(const ModelConfig& config) {
    config.validate();
    ParamSet<Real> params;
    SplitMix64 rng(config.seed);
    for (const ParamSpec& spec : param_manifest(config)) {
        Matrix<Real> t(spec.rows, spec.cols, static_cast<Real>(spec.init_fill));
        if (spec.random_init) {
            for (Real& x : t.data) x = static_cast<Real>(0.02 * rng.next_normal());
        }
        params.tensors.push_back(std::move(t));
    }
    return params;
}

template <class Real>
struct LayerCache {
    Matrix<Real> x_in;  // block input
    nn::AttentionCache<Real> attn;
    nn::LayerNormCache<Real> ln1;
    Matrix<Real> h1;        // LN1 output, FFN input
    Matrix<Real> ffn_pre;   // before GELU
    Matrix<Real> ffn_mid;   // after GELU
    nn::LayerNormCache<Real> ln2;
};

template <class Real>
struct SequenceCache {
    std::vector<std::int32_t> ids;
    std::vector<std::uint8_t> key_valid;
    Matrix<Real> embedded;
    std::vector<LayerCache<Real>> layers;
    Matrix<Real> encoder_out;
};

// Logits for one (possibly padded) id sequence: len x label_count.
template <class Real>
Matrix<Real> forward_sequence(const ModelConfig& config, const ParamSet<Real>& params,
                              std::span<const std::int32_t> ids,
                              SequenceCache<Real>* cache = nullptr) {
    const std::size_t n = ids.size();
    if (n == 0) throw ShapeError("forward_sequence: empty sequence");
    if (n > config.max_len) {
        throw SequenceTooLongError("sequence length " + std::to_string(n) + " exceeds max_len " +
                                   std::to_string(config.max_len));
    }

    const Matrix<Real>& tok = params[pidx::embed_token];
    const Matrix<Real>& pos = params[pidx::embed_position];
    std::vector<std::uint8_t> key_valid(n);
    Matrix<Real> x(n, config.hidden);
    for (std::size_t i = 0; i < n; ++i) {
        const auto id = ids[i];
        if (id < 0 || static_cast<std::size_t>(id) >= tok.rows) {
            throw ShapeError("forward_sequence: input id out of embedding range");
        }
        key_valid[i] = (id != Vocabulary::pad_id) ? 1 : 0;
        const Real* trow = tok.row(static_cast<std::size_t>(id));
        const Real* prow = pos.row(i);
        Real* xi = x.row(i);
        for (std::size_t j = 0; j < config.hidden; ++j) xi[j] = trow[j] + prow[j];
    }

    if (cache) {
        cache->ids.assign(ids.begin(), ids.end());
        cache->key_valid = key_valid;
        cache->embedded = x;
        cache->layers.resize(config.layers);
    }

    for (std::size_t l = 0; l < config.layers; ++l) {
        const std::size_t base = pidx::layer_base(l);
        LayerCache<Real>* lc = cache ? &cache->layers[l] : nullptr;
        if (lc) lc->x_in = x;

        Matrix<Real> attn_out = nn::multi_head_attention(
            x, params[base + pidx::wq], params[base + pidx::wk], params[base + pidx::wv],
            params[base + pidx::wo], config.heads, key_valid, lc ? &lc->attn : nullptr);
        add_inplace(attn_out, x);
        Matrix<Real> h1 = nn::layer_norm(attn_out, params[base + pidx::ln1_gamma].data,
                                         params[base + pidx::ln1_beta].data, Real(1e-5),
                                         lc ? &lc->ln1 : nullptr);

        Matrix<Real> ffn_pre =
            nn::linear(h1, params[base + pidx::ffn_w1], params[base + pidx::ffn_b1].data);
        Matrix<Real> ffn_mid = nn::gelu(ffn_pre);
        Matrix<Real> ffn_out =
            nn::linear(ffn_mid, params[base + pidx::ffn_w2], params[base + pidx::ffn_b2].data);
        add_inplace(ffn_out, h1);
        x = nn::layer_norm(ffn_out, params[base + pidx::ln2_gamma].data,
                           params[base + pidx::ln2_beta].data, Real(1e-5), lc ? &lc->ln2 : nullptr);

        if (lc) {
            lc->h1 = std::move(h1);
            lc->ffn_pre = std::move(ffn_pre);
            lc->ffn_mid = std::move(ffn_mid);
        }
    }

    if (cache) cache->encoder_out = x;
    return nn::linear(x, params[pidx::head_w(config)], params[pidx::head_b(config)].data);
}

// Accumulates parameter gradients for one sequence into `grads`.
template <class Real>
void backward_sequence(const ModelConfig& config, const ParamSet<Real>& params,
                       const SequenceCache<Real>& cache, const Matrix<Real>& grad_logits,
                       ParamSet<Real>& grads) {
    const std::size_t hw = pidx::head_w(config);
    const std::size_t hb = pidx::head_b(config);
    nn::LinearGrads<Real> head = nn::linear_backward(grad_logits, cache.encoder_out, params[hw]);
    add_inplace(grads[hw], head.w);
    for (std::size_t j = 0; j < head.b.size(); ++j) grads[hb].data[j] += head.b[j];

    Matrix<Real> dx = std::move(head.x);

    for (std::size_t l = config.layers; l-- > 0;) {
        const std::size_t base = pidx::layer_base(l);
        const LayerCache<Real>& lc = cache.layers[l];

        nn::LayerNormGrads<Real> ln2 =
            nn::layer_norm_backward(dx, lc.ln2, params[base + pidx::ln2_gamma].data);
        for (std::size_t j = 0; j < ln2.gamma.size(); ++j) {
            grads[base + pidx::ln2_gamma].data[j] += ln2.gamma[j];
            grads[base + pidx::ln2_beta].data[j] += ln2.beta[j];
        }

        // ffn_out + h1 residual
        nn::LinearGrads<Real> l2 = nn::linear_backward(ln2.x, lc.ffn_mid, params[base + pidx::ffn_w2]);
        add_inplace(grads[base + pidx::ffn_w2], l2.w);
        for (std::size_t j = 0; j < l2.b.size(); ++j) grads[base + pidx::ffn_b2].data[j] += l2.b[j];
        Matrix<Real> d_mid = nn::gelu_backward(l2.x, lc.ffn_pre);
        nn::LinearGrads<Real> l1 = nn::linear_backward(d_mid, lc.h1, params[base + pidx::ffn_w1]);
        add_inplace(grads[base + pidx::ffn_w1], l1.w);
        for (std::size_t j = 0; j < l1.b.size(); ++j) grads[base + pidx::ffn_b1].data[j] += l1.b[j];

        Matrix<Real> dh1 = std::move(ln2.x);  // residual branch
        add_inplace(dh1, l1.x);               // FFN branch

        nn::LayerNormGrads<Real> ln1 =
            nn::layer_norm_backward(dh1, lc.ln1, params[base + pidx::ln1_gamma].data);
        for (std::size_t j = 0; j < ln1.gamma.size(); ++j) {
            grads[base + pidx::ln1_gamma].data[j] += ln1.gamma[j];
            grads[base + pidx::ln1_beta].data[j] += ln1.beta[j];
        }

        nn::AttentionGrads<Real> attn = nn::multi_head_attention_backward(
            ln1.x, lc.x_in, params[base + pidx::wq], params[base + pidx::wk],
            params[base + pidx::wv], params[base + pidx::wo], config.heads, lc.attn);
        add_inplace(grads[base + pidx::wq], attn.wq);
        add_inplace(grads[base + pidx::wk], attn.wk);
        add_inplace(grads[base + pidx::wv], attn.wv);
        add_inplace(grads[base + pidx::wo], attn.wo);

        dx = std::move(ln1.x);       // residual branch of x
        add_inplace(dx, attn.x);     // attention branch
    }

    Matrix<Real>& d_tok = grads[pidx::embed_token];
    Matrix<Real>& d_pos = grads[pidx::embed_position];
    for (std::size_t i = 0; i < cache.ids.size(); ++i) {
        const Real* gi = dx.row(i);
        Real* trow = d_tok.row(static_cast<std::size_t>(cache.ids[i]));
        Real* prow = d_pos.row(i);
        for (std::size_t j = 0; j < config.hidden; ++j) {
            trow[j] += gi[j];
            prow[j] += gi[j];
        }
    }
}

// Batch forward per the wire contract: examples are padded to the longest
// sequence with <pad> and the result is one stacked (batch * len) x labels
// logit matrix.
template <class Real>
Matrix<Real> forward(const ModelConfig& config, const ParamSet<Real>& params,
                     const std::vector<TokenizedExample>& batch,
                     std::vector<SequenceCache<Real>>* caches = nullptr,
                     std::size_t* padded_len_out = nullptr) {
    if (batch.empty()) throw ShapeError("forward: empty batch");
    std::size_t len = 0;
    for (const auto& ex : batch) len = std::max(len, ex.input_ids.size());
    if (len > config.max_len) {
        throw SequenceTooLongError("batch length " + std::to_string(len) + " exceeds max_len " +
                                   std::to_string(config.max_len));
    }
    if (caches) caches->resize(batch.size());
    if (padded_len_out) *padded_len_out = len;

    Matrix<Real> logits(batch.size() * len, config.label_count);
    std::vector<std::int32_t> ids(len);
    for (std::size_t b = 0; b < batch.size(); ++b) {
        ids.assign(len, Vocabulary::pad_id);
        std::copy(batch[b].input_ids.begin(), batch[b].input_ids.end(), ids.begin());
        Matrix<Real> seq_logits =
            forward_sequence(config, params, ids, caches ? &(*caches)[b] : nullptr);
        std::copy(seq_logits.data.begin(), seq_logits.data.end(), logits.row(b * len));
    }
    return logits;
}

}  // namespace glosskit
