// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Checkpoint container and its binary file format:
//
//   bytes 0-3   magic "GLSK"
//   bytes 4-7   format_version, u32 little-endian (currently 1)
//   bytes 8-11  JSON header length, u32 little-endian
//   ...         UTF-8 JSON header: config, track, vocabularies, parameter
//               manifest (name/rows/cols in fixed order), train_meta
//   ...         each parameter array as raw little-endian float32 values,
//               in manifest order
//
// The JSON header is emitted with sorted keys and no whitespace, so equal
// checkpoints serialize to identical bytes.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "glosskit/model.hpp"
#include "glosskit/tokenize.hpp"
#include "glosskit/vocab.hpp"

namespace glosskit {

struct TrainMeta {
    std::size_t epochs_completed = 0;
    double final_loss = 0.0;
};

struct ModelCheckpoint {
    static constexpr std::uint32_t current_version = 1;

    ModelConfig config;
    Track track = Track::closed;
    bool lowercase_translation = true;
    Vocabulary src_vocab;
    Vocabulary trans_vocab;
    Vocabulary label_vocab;
    ParamSet<float> params;
    TrainMeta train_meta;
};

namespace detail {

inline void write_u32_le(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                           static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(bytes, 4);
}

inline std::uint32_t read_u32_le(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in) throw CorruptCheckpointError("checkpoint truncated");
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
}

inline nlohmann::json config_to_json(const ModelConfig& c) {
    return nlohmann::json{{"layers", c.layers},
                          {"hidden", c.hidden},
                          {"heads", c.heads},
                          {"ffn_dim", c.ffn_dim},
                          {"max_len", c.max_len},
                          {"src_vocab_size", c.src_vocab_size},
                          {"trans_vocab_size", c.trans_vocab_size},
                          {"label_count", c.label_count},
                          {"seed", c.seed}};
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.layers = j.at("layers").get<std::size_t>();
    c.hidden = j.at("hidden").get<std::size_t>();
    c.heads = j.at("heads").get<std::size_t>();
    c.ffn_dim = j.at("ffn_dim").get<std::size_t>();
    c.max_len = j.at("max_len").get<std::size_t>();
    c.src_vocab_size = j.at("src_vocab_size").get<std::size_t>();
    c.trans_vocab_size = j.at("trans_vocab_size").get<std::size_t>();
    c.label_count = j.at("label_count").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

inline Vocabulary vocab_from_tokens(const std::vector<std::string>& tokens) {
    if (tokens.size() < Vocabulary::num_specials || tokens[0] != "<pad>" || tokens[1] != "<unk>" ||
        tokens[2] != "<sep>") {
        throw CorruptCheckpointError("vocabulary table lacks the reserved specials");
    }
    Vocabulary v;
    for (std::size_t i = Vocabulary::num_specials; i < tokens.size(); ++i) v.add(tokens[i]);
    return v;
}

}  // namespace detail

inline void save_checkpoint(const ModelCheckpoint& ckpt, std::ostream& out) {
    nlohmann::json header;
    header["config"] = detail::config_to_json(ckpt.config);
    header["track"] = std::string(track_name(ckpt.track));
    header["lowercase_translation"] = ckpt.lowercase_translation;
    header["vocab"] = {{"source", ckpt.src_vocab.tokens()},
                       {"translation", ckpt.trans_vocab.tokens()},
                       {"labels", ckpt.label_vocab.tokens()}};
    nlohmann::json manifest = nlohmann::json::array();
    for (const ParamSpec& spec : param_manifest(ckpt.config)) {
        manifest.push_back({{"name", spec.name}, {"rows", spec.rows}, {"cols", spec.cols}});
    }
    header["params"] = std::move(manifest);
    header["train_meta"] = {{"epochs_completed", ckpt.train_meta.epochs_completed},
                            {"final_loss", ckpt.train_meta.final_loss}};

    const std::string header_bytes = header.dump();

    out.write("GLSK", 4);
    detail::write_u32_le(out, ModelCheckpoint::current_version);
    detail::write_u32_le(out, static_cast<std::uint32_t>(header_bytes.size()));
    out.write(header_bytes.data(), static_cast<std::streamsize>(header_bytes.size()));

    for (const Matrix<float>& t : ckpt.params.tensors) {
        for (float x : t.data) {
            std::uint32_t bits;
            std::memcpy(&bits, &x, 4);
            detail::write_u32_le(out, bits);
        }
    }
    if (!out) throw ConfigError("checkpoint write failed");
}

inline void save_checkpoint(const ModelCheckpoint& ckpt, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open checkpoint for writing: " + path);
    save_checkpoint(ckpt, out);
}

inline ModelCheckpoint load_checkpoint(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "GLSK", 4) != 0) {
        throw CorruptCheckpointError("bad magic, not a checkpoint file");
    }
    const std::uint32_t version = detail::read_u32_le(in);
    if (version != ModelCheckpoint::current_version) {
        throw CorruptCheckpointError("unsupported checkpoint version " + std::to_string(version));
    }
    const std::uint32_t header_len = detail::read_u32_le(in);
    std::string header_bytes(header_len, '\0');
    in.read(header_bytes.data(), header_len);
    if (!in) throw CorruptCheckpointError("checkpoint truncated in header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_bytes);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptCheckpointError(std::string("bad checkpoint header: ") + e.what());
    }

    ModelCheckpoint ckpt;
    try {
        ckpt.config = detail::config_from_json(header.at("config"));
        ckpt.track = track_from_name(header.at("track").get<std::string>());
        ckpt.lowercase_translation = header.at("lowercase_translation").get<bool>();
        ckpt.src_vocab = detail::vocab_from_tokens(header.at("vocab").at("source"));
        ckpt.trans_vocab = detail::vocab_from_tokens(header.at("vocab").at("translation"));
        ckpt.label_vocab = detail::vocab_from_tokens(header.at("vocab").at("labels"));
        ckpt.train_meta.epochs_completed = header.at("train_meta").at("epochs_completed").get<std::size_t>();
        ckpt.train_meta.final_loss = header.at("train_meta").at("final_loss").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw CorruptCheckpointError(std::string("bad checkpoint header: ") + e.what());
    }

    if (ckpt.src_vocab.size() != ckpt.config.src_vocab_size ||
        ckpt.trans_vocab.size() != ckpt.config.trans_vocab_size ||
        ckpt.label_vocab.size() != ckpt.config.label_count) {
        throw CorruptCheckpointError("vocabulary sizes disagree with model config");
    }

    const std::vector<ParamSpec> specs = param_manifest(ckpt.config);
    const auto& manifest = header.at("params");
    if (!manifest.is_array() || manifest.size() != specs.size()) {
        throw CorruptCheckpointError("parameter manifest has the wrong arity");
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (manifest[i].at("name").get<std::string>() != specs[i].name ||
            manifest[i].at("rows").get<std::size_t>() != specs[i].rows ||
            manifest[i].at("cols").get<std::size_t>() != specs[i].cols) {
            throw CorruptCheckpointError("parameter manifest disagrees with config at " + specs[i].name);
        }
    }

    for (const ParamSpec& spec : specs) {
        Matrix<float> t(spec.rows, spec.cols);
        for (float& x : t.data) {
            const std::uint32_t bits = detail::read_u32_le(in);
            std::memcpy(&x, &bits, 4);
        }
        ckpt.params.tensors.push_back(std::move(t));
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw CorruptCheckpointError("trailing bytes after parameter arrays");
    }
    return ckpt;
}

inline ModelCheckpoint load_checkpoint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open checkpoint: " + path);
    return load_checkpoint(in);
}

}  // namespace glosskit
