#pragma once

#include <wtbc/types.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wtbc {

enum class TokenKind : std::uint8_t { word, separator, doc_end };

struct Token {
    TokenKind kind = TokenKind::word;
    std::string text;

    friend bool operator==(const Token&, const Token&) = default;
};

/// Splits UTF-8 text into alternating word / separator tokens (spaceless word model).
/// A lone space between two words is implicit and produces no token.
/// Throws IngestError with the byte offset on malformed UTF-8.
std::vector<Token> tokenize(std::string_view text);

/// Inverse of tokenize(). doc_end tokens render as `doc_end_marker`.
std::string detokenize(std::span<const Token> tokens, std::string_view doc_end_marker = {});

/// True if the code point counts as a word character.
bool is_word_char(char32_t cp);

struct VocabEntry {
    std::string word;
    TokenKind kind = TokenKind::word;
    std::uint64_t freq = 0;
    std::uint64_t df = 0;
};

/// Frequency-ranked vocabulary. Rank 0 is always the document-end sentinel;
/// ranks >= 1 are ordered by decreasing frequency, ties by byte-wise word order.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<VocabEntry> entries);

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] const VocabEntry& operator[](WordId id) const { return entries_[id]; }
    [[nodiscard]] const VocabEntry& at(WordId id) const;
    [[nodiscard]] std::span<const VocabEntry> entries() const noexcept { return entries_; }

    [[nodiscard]] std::optional<WordId> find(std::string_view word) const;
    /// Throws UnknownWord.
    [[nodiscard]] WordId id_of(std::string_view word) const;

    [[nodiscard]] Token token(WordId id) const;
    [[nodiscard]] std::vector<std::uint64_t> frequencies() const;

private:
    std::vector<VocabEntry> entries_;
    std::unordered_map<std::string, WordId> lookup_;
};

struct CollectionStats {
    std::uint64_t num_docs = 0;        // N
    std::uint64_t num_tokens = 0;      // n, including one doc_end per document
    std::uint64_t vocab_size = 0;      // V, including the sentinel
    std::uint64_t original_bytes = 0;  // total size of the ingested document texts

    [[nodiscard]] std::uint64_t num_tokens_without_sentinels() const noexcept {
        return num_tokens - num_docs;
    }
};

/// Token stream of the whole collection as vocabulary ranks.
struct Collection {
    std::vector<WordId> tokens;
    Vocabulary vocab;
    CollectionStats stats;
};

struct IngestConfig {
    /// A directory (one regular file per document, in file-name order) or a single file.
    std::filesystem::path input;
    /// Full-line document delimiter for single-file input.
    std::string delimiter = "%%DOC%%";
    /// Reserved glyph naming the document-end token; it must not occur in any document.
    std::string sentinel = "$";
};

inline constexpr WordId kDocEnd = 0;

/// Reads the raw document texts named by `config`.
std::vector<std::string> read_documents(const IngestConfig& config);

/// Splits a single-file corpus into documents at lines equal to `delimiter`.
/// Empty documents are dropped.
std::vector<std::string> split_documents(std::string_view content, std::string_view delimiter);

/// Tokenizes and concatenates `documents`, each followed by a doc_end token.
Collection build_collection(std::span<const std::string> documents, std::string_view sentinel = "$");
Collection build_collection(const IngestConfig& config);

}  // namespace wtbc
