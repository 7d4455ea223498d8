// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace glosskit {

// Input text is not valid UTF-8.
class EncodingError : public std::runtime_error {
public:
    explicit EncodingError(const std::string& what) : std::runtime_error(what) {}
};

// An IGT entry block is structurally broken (e.g. no transcription line).
class MalformedEntryError : public std::runtime_error {
public:
    MalformedEntryError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Transcription tokenized to zero tokens, nothing to label.
class EmptyInputError : public std::runtime_error {
public:
    explicit EmptyInputError(const std::string& what) : std::runtime_error(what) {}
};

// Open-track operation invoked on an entry without a segmentation line.
class MissingSegmentationError : public std::runtime_error {
public:
    explicit MissingSegmentationError(const std::string& what) : std::runtime_error(what) {}
};

// Matrix/vector dimensions do not conform.
class ShapeError : public std::logic_error {
public:
    explicit ShapeError(const std::string& what) : std::logic_error(what) {}
};

// Paired sequences of different lengths where equal lengths are required.
class LengthMismatchError : public std::invalid_argument {
public:
    explicit LengthMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

// Cross-entropy over a batch in which every position is ignored.
class EmptyBatchError : public std::runtime_error {
public:
    explicit EmptyBatchError(const std::string& what) : std::runtime_error(what) {}
};

// Training corpus has no usable (glossed, aligned) entry.
class EmptyCorpusError : public std::runtime_error {
public:
    explicit EmptyCorpusError(const std::string& what) : std::runtime_error(what) {}
};

// Encoded sequence does not fit the model's positional range.
class SequenceTooLongError : public std::runtime_error {
public:
    explicit SequenceTooLongError(const std::string& what) : std::runtime_error(what) {}
};

// Checkpoint file is unreadable: bad magic, bad version, truncated or
// inconsistent with its own manifest.
class CorruptCheckpointError : public std::runtime_error {
public:
    explicit CorruptCheckpointError(const std::string& what) : std::runtime_error(what) {}
};

// A gold entry required a gloss line but has none.
class MissingGlossError : public std::runtime_error {
public:
    explicit MissingGlossError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration value (bad preset, inconsistent sizes, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace glosskit
