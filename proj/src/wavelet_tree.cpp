#include <wtbc/wavelet_tree.hpp>

#include <algorithm>
#include <deque>
#include <map>

namespace wtbc {

std::uint32_t ByteCodeTree::child(std::uint32_t node, std::uint8_t b) const noexcept {
    const auto& ch = nodes_[node].children;
    auto it = std::lower_bound(ch.begin(), ch.end(), b, [](const auto& e, std::uint8_t v) { return e.first < v; });
    return it != ch.end() && it->first == b ? it->second : kNoNode;
}

std::uint32_t ByteCodeTree::find(std::span<const std::uint8_t> path) const noexcept {
    if (nodes_.empty()) {
        return kNoNode;
    }
    std::uint32_t node = 0;
    for (std::uint8_t b : path) {
        node = child(node, b);
        if (node == kNoNode) {
            break;
        }
    }
    return node;
}

ByteCodeTree ByteCodeTree::build(std::span<const WordId> tokens, std::span<const Codeword> codes,
                                 std::uint32_t stoppers, std::uint32_t block_size) {
    struct Draft {
        std::vector<std::uint8_t> path;
        std::vector<std::uint8_t> bytes;
        std::array<std::uint32_t, 256> child;
    };
    std::vector<Draft> drafts(1);
    drafts[0].child.fill(kNoNode);
    drafts[0].bytes.reserve(tokens.size());

    for (std::size_t i = 0; i < codes.size(); ++i) {
        const Codeword& cw = codes[i];
        if (cw.size() == 0 || cw.last() >= stoppers ||
            std::any_of(cw.bytes().begin(), cw.bytes().end() - 1, [&](std::uint8_t b) { return b < stoppers; })) {
            throw Error("codeword of token " + std::to_string(i) + " is not continuers followed by a stopper");
        }
    }

    for (WordId t : tokens) {
        if (t >= codes.size()) {
            throw Error("token id " + std::to_string(t) + " has no codeword");
        }
        const Codeword& cw = codes[t];
        std::uint32_t node = 0;
        for (std::size_t i = 0; i < cw.size(); ++i) {
            drafts[node].bytes.push_back(cw[i]);
            if (i + 1 == cw.size()) {
                break;
            }
            std::uint32_t next = drafts[node].child[cw[i]];
            if (next == kNoNode) {
                next = static_cast<std::uint32_t>(drafts.size());
                drafts[node].child[cw[i]] = next;
                Draft d;
                d.path = drafts[node].path;
                d.path.push_back(cw[i]);
                d.child.fill(kNoNode);
                drafts.push_back(std::move(d));
            }
            node = next;
        }
    }

    // Renumber breadth-first with children in byte order.
    std::vector<std::uint32_t> order;
    order.reserve(drafts.size());
    std::vector<std::uint32_t> new_index(drafts.size());
    std::deque<std::uint32_t> queue{0};
    while (!queue.empty()) {
        const std::uint32_t v = queue.front();
        queue.pop_front();
        new_index[v] = static_cast<std::uint32_t>(order.size());
        order.push_back(v);
        for (std::uint32_t ch : drafts[v].child) {
            if (ch != kNoNode) {
                queue.push_back(ch);
            }
        }
    }

    ByteCodeTree tree;
    tree.stoppers_ = stoppers;
    tree.nodes_.reserve(order.size());
    for (std::uint32_t v : order) {
        Draft& d = drafts[v];
        TreeNode node{std::move(d.path), ByteSequenceRS(std::move(d.bytes), block_size), {}};
        for (std::size_t b = 0; b < 256; ++b) {
            if (d.child[b] != kNoNode) {
                node.children.emplace_back(static_cast<std::uint8_t>(b), new_index[d.child[b]]);
            }
        }
        tree.nodes_.push_back(std::move(node));
    }
    return tree;
}

ByteCodeTree ByteCodeTree::from_nodes(std::vector<TreeNode> nodes, std::uint32_t stoppers) {
    if (nodes.empty() || !nodes[0].path.empty()) {
        throw CorruptData("tree must start with the root node");
    }
    std::map<std::vector<std::uint8_t>, std::uint32_t> index;
    for (std::uint32_t v = 0; v < nodes.size(); ++v) {
        TreeNode& node = nodes[v];
        node.children.clear();
        if (v > 0) {
            const auto& prev = nodes[v - 1].path;
            const bool ordered = prev.size() < node.path.size() ||
                                 (prev.size() == node.path.size() && prev < node.path);
            if (!ordered) {
                throw CorruptData("tree nodes are not in breadth-first path order");
            }
            std::vector<std::uint8_t> parent_path(node.path.begin(), node.path.end() - 1);
            const std::uint8_t via = node.path.back();
            auto it = index.find(parent_path);
            if (it == index.end() || via < stoppers) {
                throw CorruptData("tree node has no parent or is reached through a stopper");
            }
            TreeNode& parent = nodes[it->second];
            if (parent.bytes.count(via) != node.bytes.size()) {
                throw CorruptData("tree node length disagrees with its parent's byte count");
            }
            parent.children.emplace_back(via, v);
        }
        index.emplace(node.path, v);
    }
    // Every continuer present in a node must lead to a child.
    for (const TreeNode& node : nodes) {
        for (std::uint8_t b : node.bytes.counter_values()) {
            const bool has_child = std::any_of(node.children.begin(), node.children.end(),
                                               [&](const auto& c) { return c.first == b; });
            if (b >= stoppers && !has_child) {
                throw CorruptData("continuer byte without a child node");
            }
        }
    }
    ByteCodeTree tree;
    tree.nodes_ = std::move(nodes);
    tree.stoppers_ = stoppers;
    return tree;
}

void ByteCodeTree::check_position(Position p) const {
    if (p == 0 || p > size()) {
        throw OutOfRange("position " + std::to_string(p) + " outside [1, " + std::to_string(size()) + "]");
    }
}

bool ByteCodeTree::path_nodes(const Codeword& cw, std::array<std::uint32_t, kMaxCodewordLength>& out) const noexcept {
    out[0] = 0;
    for (std::size_t i = 0; i + 1 < cw.size(); ++i) {
        out[i + 1] = child(out[i], cw[i]);
        if (out[i + 1] == kNoNode) {
            return false;
        }
    }
    return true;
}

Codeword ByteCodeTree::decode_at(Position p) const {
    check_position(p);
    Codeword cw;
    std::uint32_t node = 0;
    std::uint64_t pos = p;
    for (;;) {
        const std::uint8_t b = nodes_[node].bytes[pos];
        cw.push_back(b);
        if (is_stopper(b)) {
            return cw;
        }
        pos = nodes_[node].bytes.rank(b, pos);
        node = child(node, b);
    }
}

Position ByteCodeTree::locate(const Codeword& cw, std::uint64_t j) const {
    std::array<std::uint32_t, kMaxCodewordLength> path{};
    if (cw.size() == 0 || !path_nodes(cw, path)) {
        throw NotFound("codeword does not occur in the text");
    }
    std::uint64_t pos = j;
    for (std::size_t level = cw.size(); level-- > 0;) {
        pos = nodes_[path[level]].bytes.select(cw[level], pos);
    }
    return pos;
}

std::uint64_t ByteCodeTree::count_prefix(const Codeword& cw, Position p) const {
    if (p > size()) {
        throw OutOfRange("position " + std::to_string(p) + " past text length " + std::to_string(size()));
    }
    std::array<std::uint32_t, kMaxCodewordLength> path{};
    if (cw.size() == 0 || !path_nodes(cw, path)) {
        return 0;
    }
    std::uint64_t pos = p;
    for (std::size_t level = 0; level < cw.size() && pos > 0; ++level) {
        pos = nodes_[path[level]].bytes.rank(cw[level], pos);
    }
    return pos;
}

std::uint64_t ByteCodeTree::count(const Codeword& cw) const { return count_prefix(cw, size()); }

std::uint64_t ByteCodeTree::total_bytes() const noexcept {
    std::uint64_t total = 0;
    for (const auto& n : nodes_) {
        total += n.bytes.size();
    }
    return total;
}

std::uint64_t ByteCodeTree::counter_bytes() const noexcept {
    std::uint64_t total = 0;
    for (const auto& n : nodes_) {
        total += n.bytes.counter_bytes();
    }
    return total;
}

void WtbcIndex::init_codes() {
    codes_.clear();
    codes_.reserve(vocab_.size());
    for (WordId r = 0; r < vocab_.size(); ++r) {
        codes_.push_back(encode_rank(r, params_));
    }
}

WtbcIndex WtbcIndex::build(const Collection& collection, const BuildOptions& options) {
    if (collection.tokens.empty()) {
        throw Error("cannot index an empty token stream");
    }
    WtbcIndex idx;
    idx.vocab_ = collection.vocab;
    idx.stats_ = collection.stats;
    idx.block_size_ = options.block_size;
    const auto freqs = idx.vocab_.frequencies();
    idx.params_ = options.stoppers != 0 ? ScdcParams(options.stoppers) : optimize_sc(freqs);
    idx.init_codes();
    idx.tree_ = ByteCodeTree::build(collection.tokens, idx.codes_, idx.params_.s, options.block_size);

    std::vector<Position> ends;
    ends.reserve(collection.stats.num_docs);
    for (std::size_t i = 0; i < collection.tokens.size(); ++i) {
        if (collection.tokens[i] == kDocEnd) {
            ends.push_back(i + 1);
        }
    }
    idx.bounds_ = DocBoundaries(std::move(ends));
    return idx;
}

WtbcIndex::WtbcIndex(ScdcParams params, Vocabulary vocab, CollectionStats stats, ByteCodeTree tree,
                     std::uint32_t block_size)
    : params_(params), vocab_(std::move(vocab)), stats_(stats), tree_(std::move(tree)), block_size_(block_size) {
    if (tree_.size() != stats_.num_tokens || vocab_.size() != stats_.vocab_size || tree_.stoppers() != params_.s) {
        throw CorruptData("index sections disagree with the header");
    }
    init_codes();
    // The sentinel is the only codeword whose first byte is 0.
    std::vector<Position> ends;
    ends.reserve(stats_.num_docs);
    const auto root = tree_.root().bytes.data();
    for (std::size_t i = 0; i < root.size(); ++i) {
        if (root[i] == 0) {
            ends.push_back(i + 1);
        }
    }
    if (ends.size() != stats_.num_docs || ends.empty() || ends.back() != stats_.num_tokens) {
        throw CorruptData("document boundaries disagree with the header");
    }
    bounds_ = DocBoundaries(std::move(ends));
}

void WtbcIndex::check_position(Position p) const {
    if (p == 0 || p > stats_.num_tokens) {
        throw OutOfRange("position " + std::to_string(p) + " outside [1, " + std::to_string(stats_.num_tokens) + "]");
    }
}

WordId WtbcIndex::decode_at(Position p) const {
    const Codeword cw = tree_.decode_at(p);
    auto bytes = cw.bytes();
    return static_cast<WordId>(decode_bytes(bytes, params_));
}

std::vector<WordId> WtbcIndex::decode_ids(Position a, Position b) const {
    std::vector<WordId> ids;
    if (a <= b) {
        ids.reserve(b - a + 1);
    }
    tree_.for_each_codeword(a, b, [&](const Codeword& cw) {
        auto bytes = cw.bytes();
        ids.push_back(static_cast<WordId>(decode_bytes(bytes, params_)));
    });
    return ids;
}

std::string WtbcIndex::decode_range(Position a, Position b, std::string_view doc_end_marker) const {
    if (a > b) {
        throw OutOfRange("empty range " + std::to_string(a) + ".." + std::to_string(b));
    }
    std::vector<Token> tokens;
    for (WordId id : decode_ids(a, b)) {
        tokens.push_back(vocab_.token(id));
    }
    return detokenize(tokens, doc_end_marker);
}

Position WtbcIndex::locate(WordId w, std::uint64_t j) const {
    const VocabEntry& e = vocab_.at(w);
    if (j == 0 || j > e.freq) {
        throw NotFound("occurrence " + std::to_string(j) + " of '" + e.word + "' does not exist (freq " +
                       std::to_string(e.freq) + ")");
    }
    return tree_.locate(codes_[w], j);
}

Position WtbcIndex::locate(std::string_view word, std::uint64_t j) const { return locate(vocab_.id_of(word), j); }

std::uint64_t WtbcIndex::count_prefix(WordId w, Position p) const { return tree_.count_prefix(codes_.at(w), p); }

std::uint64_t WtbcIndex::count_prefix(std::string_view word, Position p) const {
    return count_prefix(vocab_.id_of(word), p);
}

std::uint64_t WtbcIndex::count_range(WordId w, Position a, Position b) const {
    if (a == 0 || a > b + 1 || b > stats_.num_tokens) {
        throw OutOfRange("range " + std::to_string(a) + ".." + std::to_string(b) + " outside the text");
    }
    return count_prefix(w, b) - count_prefix(w, a - 1);
}

DocId WtbcIndex::doc_of(Position p) const {
    check_position(p);
    return 1 + bounds_.doc_rank(p - 1);
}

std::pair<Position, Position> WtbcIndex::doc_bounds(DocId d) const {
    if (d == 0 || d > stats_.num_docs) {
        throw OutOfRange("document " + std::to_string(d) + " outside [1, " + std::to_string(stats_.num_docs) + "]");
    }
    return {bounds_.doc_select(d - 1), bounds_.doc_select(d)};
}

std::string WtbcIndex::document(DocId d) const {
    const auto [s, e] = doc_bounds(d);
    return e - s >= 2 ? decode_range(s + 1, e - 1) : std::string{};
}

std::string WtbcIndex::snippet(std::string_view word, std::uint64_t j, std::uint64_t window) const {
    const Position p = locate(word, j);
    const auto [s, e] = doc_bounds(doc_of(p));
    const Position lo = std::max<Position>(s + 1, p > window ? p - window : 1);
    const Position hi = std::min<Position>(e - 1, p + window);
    return decode_range(lo, hi);
}

}  // namespace wtbc
