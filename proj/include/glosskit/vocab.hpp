// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "glosskit/errors.hpp"

namespace glosskit {

// Bidirectional token<->id map with dense ids. Ids 0..2 are reserved:
// 0 = <pad>, 1 = <unk>, 2 = <sep>; corpus tokens start at 3, assigned in
// first-occurrence order so construction is fully deterministic.
class Vocabulary {
public:
    static constexpr std::int32_t pad_id = 0;
    static constexpr std::int32_t unk_id = 1;
    static constexpr std::int32_t sep_id = 2;
    static constexpr std::size_t num_specials = 3;

    Vocabulary() : id_to_token_{"<pad>", "<unk>", "<sep>"} {}

    // Appends a token; returns its id. The caller guarantees it is new.
    std::int32_t add(const std::string& token) {
        const auto id = static_cast<std::int32_t>(id_to_token_.size());
        token_to_id_.emplace(token, id);
        id_to_token_.push_back(token);
        return id;
    }

    bool contains(const std::string& token) const { return token_to_id_.contains(token); }

    // Id of `token`, or unk_id when unseen.
    std::int32_t id_or_unk(const std::string& token) const {
        const auto it = token_to_id_.find(token);
        return it == token_to_id_.end() ? unk_id : it->second;
    }

    const std::string& token(std::int32_t id) const { return id_to_token_.at(static_cast<std::size_t>(id)); }

    std::size_t size() const { return id_to_token_.size(); }

    const std::vector<std::string>& tokens() const { return id_to_token_; }

    bool operator==(const Vocabulary& other) const { return id_to_token_ == other.id_to_token_; }

private:
    std::unordered_map<std::string, std::int32_t> token_to_id_;
    std::vector<std::string> id_to_token_;
};

// Builds a vocabulary over `token_lists`: tokens whose corpus frequency is
// >= min_count get ids in first-occurrence order; rarer tokens are left to
// map to <unk> at encode time.
inline Vocabulary build_vocab(const std::vector<std::vector<std::string>>& token_lists,
                              std::size_t min_count = 1) {
    if (min_count < 1) throw ConfigError("build_vocab: min_count must be >= 1");
    std::unordered_map<std::string, std::size_t> freq;
    for (const auto& list : token_lists) {
        for (const auto& tok : list) ++freq[tok];
    }
    Vocabulary vocab;
    for (const auto& list : token_lists) {
        for (const auto& tok : list) {
            if (freq[tok] >= min_count && !vocab.contains(tok)) vocab.add(tok);
        }
    }
    return vocab;
}

// Vocabulary file format: UTF-8, one token per line, line number = id, with
// the specials spelled out literally on lines 0-2.
inline void save_vocab(const Vocabulary& vocab, std::ostream& out) {
    for (const std::string& tok : vocab.tokens()) out << tok << "\n";
}

inline void save_vocab(const Vocabulary& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open vocabulary file for writing: " + path);
    save_vocab(vocab, out);
}

inline Vocabulary load_vocab(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (lines.size() < Vocabulary::num_specials || lines[0] != "<pad>" || lines[1] != "<unk>" ||
        lines[2] != "<sep>") {
        throw ConfigError("vocabulary file must start with <pad>, <unk>, <sep>");
    }
    Vocabulary vocab;
    for (std::size_t i = Vocabulary::num_specials; i < lines.size(); ++i) {
        if (vocab.contains(lines[i])) throw ConfigError("duplicate token in vocabulary file: " + lines[i]);
        vocab.add(lines[i]);
    }
    return vocab;
}

inline Vocabulary load_vocab_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open vocabulary file: " + path);
    return load_vocab(in);
}

}  // namespace glosskit
