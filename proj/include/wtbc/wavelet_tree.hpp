#pragma once

#include <wtbc/corpus.hpp>
#include <wtbc/rank_select.hpp>
#include <wtbc/scdc.hpp>
#include <wtbc/types.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wtbc {

/// One bytemap of the tree. `path` is the codeword prefix leading to it (empty for the root).
struct TreeNode {
    std::vector<std::uint8_t> path;
    ByteSequenceRS bytes;
    /// (continuer byte, node index), sorted by byte.
    std::vector<std::pair<std::uint8_t, std::uint32_t>> children;
};

/// Wavelet tree on bytecodes: level l holds the l-th byte of every codeword of
/// length >= l, grouped by codeword prefix and kept in text order.
/// Nodes are stored in breadth-first path order (by depth, then path bytes).
class ByteCodeTree {
public:
    static constexpr std::uint32_t kNoNode = 0xFFFFFFFF;

    ByteCodeTree() = default;

    /// Builds the tree for a token stream whose token t is encoded as `codes[t]`.
    static ByteCodeTree build(std::span<const WordId> tokens, std::span<const Codeword> codes,
                              std::uint32_t stoppers,
                              std::uint32_t block_size = ByteSequenceRS::kDefaultBlockSize);

    /// Reassembles a tree from nodes in breadth-first path order (used by the loader).
    static ByteCodeTree from_nodes(std::vector<TreeNode> nodes, std::uint32_t stoppers);

    [[nodiscard]] std::uint64_t size() const noexcept { return nodes_.empty() ? 0 : nodes_[0].bytes.size(); }
    [[nodiscard]] std::uint32_t stoppers() const noexcept { return stoppers_; }
    [[nodiscard]] const TreeNode& root() const { return nodes_.front(); }
    [[nodiscard]] std::span<const TreeNode> nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::uint32_t child(std::uint32_t node, std::uint8_t b) const noexcept;
    /// Node reached by following `path` from the root, or kNoNode.
    [[nodiscard]] std::uint32_t find(std::span<const std::uint8_t> path) const noexcept;

    /// Codeword of the token at position p by descending with rank.
    [[nodiscard]] Codeword decode_at(Position p) const;
    /// Root position of the j-th occurrence of `cw` by ascending with select.
    [[nodiscard]] Position locate(const Codeword& cw, std::uint64_t j) const;
    /// Occurrences of `cw` in positions [1, p] via the downward rank chain.
    [[nodiscard]] std::uint64_t count_prefix(const Codeword& cw, Position p) const;
    /// Total occurrences of `cw`.
    [[nodiscard]] std::uint64_t count(const Codeword& cw) const;

    /// Calls f(const Codeword&) for every token in [a, b] in text order, using one
    /// rank per touched node and sequential cursors afterwards.
    template <class F>
    void for_each_codeword(Position a, Position b, F&& f) const;

    [[nodiscard]] std::uint64_t total_bytes() const noexcept;
    [[nodiscard]] std::uint64_t counter_bytes() const noexcept;

private:
    bool is_stopper(std::uint8_t b) const noexcept { return b < stoppers_; }
    void check_position(Position p) const;
    /// Node index for each of the first cw.size() levels of the codeword's path; false if missing.
    bool path_nodes(const Codeword& cw, std::array<std::uint32_t, kMaxCodewordLength>& out) const noexcept;

    std::vector<TreeNode> nodes_;
    std::uint32_t stoppers_ = 0;
};

template <class F>
void ByteCodeTree::for_each_codeword(Position a, Position b, F&& f) const {
    if (a > b) {
        return;
    }
    check_position(a);
    check_position(b);
    // next_[v] = 1-based position of the next unread byte in node v; 0 = not yet positioned.
    std::vector<std::uint64_t> next(nodes_.size(), 0);
    next[0] = a;
    for (Position p = a; p <= b; ++p) {
        Codeword cw;
        std::uint32_t node = 0;
        std::uint64_t pos = next[0]++;
        for (;;) {
            const std::uint8_t byte = nodes_[node].bytes[pos];
            cw.push_back(byte);
            if (is_stopper(byte)) {
                break;
            }
            const std::uint32_t ch = child(node, byte);
            if (next[ch] == 0) {
                next[ch] = nodes_[node].bytes.rank(byte, pos);
            }
            node = ch;
            pos = next[ch]++;
        }
        f(static_cast<const Codeword&>(cw));
    }
}

struct BuildOptions {
    std::uint32_t block_size = ByteSequenceRS::kDefaultBlockSize;
    /// Fixed (s, c); chosen by optimize_sc when unset (s == 0).
    std::uint32_t stoppers = 0;
};

/// The complete self-index over a document collection.
class WtbcIndex {
public:
    WtbcIndex() = default;

    static WtbcIndex build(const Collection& collection, const BuildOptions& options = {});
    /// Assembles a loaded index; boundaries are recomputed from the sentinel bytes in the root.
    WtbcIndex(ScdcParams params, Vocabulary vocab, CollectionStats stats, ByteCodeTree tree,
              std::uint32_t block_size);

    [[nodiscard]] const ScdcParams& params() const noexcept { return params_; }
    [[nodiscard]] const Vocabulary& vocab() const noexcept { return vocab_; }
    [[nodiscard]] const CollectionStats& stats() const noexcept { return stats_; }
    [[nodiscard]] const ByteCodeTree& tree() const noexcept { return tree_; }
    [[nodiscard]] const DocBoundaries& bounds() const noexcept { return bounds_; }
    [[nodiscard]] std::uint32_t block_size() const noexcept { return block_size_; }
    [[nodiscard]] std::uint64_t num_docs() const noexcept { return stats_.num_docs; }
    [[nodiscard]] std::uint64_t num_tokens() const noexcept { return stats_.num_tokens; }
    [[nodiscard]] const Codeword& codeword(WordId id) const { return codes_.at(id); }

    [[nodiscard]] WordId decode_at(Position p) const;
    [[nodiscard]] const std::string& word_at(Position p) const { return vocab_[decode_at(p)].word; }
    /// Word ids of tokens [a, b].
    [[nodiscard]] std::vector<WordId> decode_ids(Position a, Position b) const;
    /// Detokenized text of tokens [a, b]; doc_end tokens render as `doc_end_marker`.
    [[nodiscard]] std::string decode_range(Position a, Position b, std::string_view doc_end_marker = {}) const;

    /// Position of the j-th occurrence. Throws NotFound when j exceeds freq.
    [[nodiscard]] Position locate(WordId w, std::uint64_t j) const;
    [[nodiscard]] Position locate(std::string_view word, std::uint64_t j) const;
    [[nodiscard]] std::uint64_t count_prefix(WordId w, Position p) const;
    [[nodiscard]] std::uint64_t count_prefix(std::string_view word, Position p) const;
    /// Occurrences in [a, b]; a may be b + 1 (empty range).
    [[nodiscard]] std::uint64_t count_range(WordId w, Position a, Position b) const;

    /// Document holding position p. A doc_end position belongs to the document it ends.
    [[nodiscard]] DocId doc_of(Position p) const;
    /// (s, e): exclusive start boundary and inclusive doc_end position of document d.
    [[nodiscard]] std::pair<Position, Position> doc_bounds(DocId d) const;
    /// Original text of document d.
    [[nodiscard]] std::string document(DocId d) const;
    /// Text of up to `window` tokens on each side of the j-th occurrence of `word`,
    /// clipped to its document.
    [[nodiscard]] std::string snippet(std::string_view word, std::uint64_t j, std::uint64_t window = 10) const;

private:
    void check_position(Position p) const;
    void init_codes();

    ScdcParams params_;
    Vocabulary vocab_;
    CollectionStats stats_;
    ByteCodeTree tree_;
    DocBoundaries bounds_;
    std::vector<Codeword> codes_;
    std::uint32_t block_size_ = ByteSequenceRS::kDefaultBlockSize;
};

}  // namespace wtbc
