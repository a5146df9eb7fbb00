#pragma once

#include <wtbc/rank_select.hpp>
#include <wtbc/wavelet_tree.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wtbc {

enum class QueryMode { conjunctive, disjunctive };

/// Query words in first-occurrence order, duplicates removed.
struct Query {
    std::vector<std::string> words;
    QueryMode mode = QueryMode::disjunctive;
};

/// Tokenizes `text` like a document and keeps the distinct word tokens.
Query parse_query(std::string_view text, QueryMode mode);

struct ScoredDoc {
    DocId doc = 0;
    double score = 0.0;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// Result order everywhere: score descending, then document ascending.
inline bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) noexcept {
    return a.score > b.score || (a.score == b.score && a.doc < b.doc);
}

/// idf = ln(N / df).
inline double idf(std::uint64_t num_docs, std::uint64_t df) {
    return std::log(static_cast<double>(num_docs) / static_cast<double>(df));
}
/// Throws UnknownWord.
double idf(const Vocabulary& vocab, std::string_view word, std::uint64_t num_docs);

/// Σ counts[i] · idfs[i], summed in query order. Every engine scores through this.
inline double tfidf(std::span<const std::uint64_t> counts, std::span<const double> idfs) noexcept {
    double score = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        score += static_cast<double>(counts[i]) * idfs[i];
    }
    return score;
}

/// Query words mapped to vocabulary ids. `unsatisfiable` marks an AND query with a
/// word outside the vocabulary.
struct ResolvedQuery {
    std::vector<WordId> words;
    std::vector<double> idfs;
    QueryMode mode = QueryMode::disjunctive;
    bool unsatisfiable = false;
};

ResolvedQuery resolve(const WtbcIndex& idx, const Query& query);

/// A boundary-aligned run of documents first_doc .. first_doc + ndocs - 1,
/// covering root positions [start_pos, end_pos].
struct Segment {
    Position start_pos = 0;
    Position end_pos = 0;
    double score = 0.0;
    std::uint64_t ndocs = 0;
    DocId first_doc = 0;
    /// Occurrences of each query word inside the segment.
    std::vector<std::uint64_t> counts;
};

Segment whole_collection(const WtbcIndex& idx, const ResolvedQuery& query);
double score_segment(const WtbcIndex& idx, const ResolvedQuery& query, const Segment& seg);
/// Splits at the document boundary at or before the positional middle, so both halves
/// hold at least one document. The left half is counted on the tree, the right half
/// is the parent minus the left. Requires seg.ndocs >= 2.
std::pair<Segment, Segment> split_segment(const WtbcIndex& idx, const ResolvedQuery& query, const Segment& seg);

/// Best-first segment search (no extra space). Emits documents in decreasing score
/// order and can be stopped after any number of results.
class SegmentSearch {
public:
    SegmentSearch(const WtbcIndex& idx, const Query& query);

    /// Next document, or nullopt when no document with positive score remains.
    std::optional<ScoredDoc> next();
    /// Segments pulled from the queue so far.
    [[nodiscard]] std::uint64_t segments_processed() const noexcept { return processed_; }

private:
    struct Worse {
        bool operator()(const Segment& a, const Segment& b) const noexcept {
            return a.score < b.score || (a.score == b.score && a.start_pos > b.start_pos);
        }
    };

    [[nodiscard]] bool keep(const Segment& s) const noexcept;
    void push(Segment s);

    const WtbcIndex* idx_;
    ResolvedQuery query_;
    std::vector<Segment> heap_;
    std::uint64_t processed_ = 0;
};

std::vector<ScoredDoc> topk_dr(const WtbcIndex& idx, const Query& query, std::size_t k);

/// Per-word bitmaps: a 1 opens each document holding the word, followed by tf - 1 zeros.
class WordBitmaps {
public:
    WordBitmaps() = default;
    WordBitmaps(double epsilon, std::map<WordId, BitVectorRS> bitmaps)
        : epsilon_(epsilon), bitmaps_(std::move(bitmaps)) {}

    [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
    [[nodiscard]] const BitVectorRS* find(WordId w) const noexcept;
    [[nodiscard]] const std::map<WordId, BitVectorRS>& all() const noexcept { return bitmaps_; }
    [[nodiscard]] std::uint64_t total_bits() const noexcept;

private:
    double epsilon_ = 0.0;
    std::map<WordId, BitVectorRS> bitmaps_;
};

struct DrbConfig {
    double epsilon = 1e-6;
};

/// True for words that receive a bitmap under `epsilon`.
bool has_bitmap(const VocabEntry& e, std::uint64_t num_docs, double epsilon);

/// One pass over the text builds a bitmap for every word with idf > epsilon.
WordBitmaps build_bitmaps(const WtbcIndex& idx, const DrbConfig& config = {});

/// Bitmap encoding of a tf vector, e.g. (5, 3, 6) -> 10000100100000.
BitVectorRS bitmap_from_tfs(std::span<const std::uint64_t> tfs);
/// Inverse of bitmap_from_tfs.
std::vector<std::uint64_t> tfs_from_bitmap(const BitVectorRS& bm);

/// Bookkeeping for one query word during a bitmap-driven intersection.
struct Triplet {
    WordId word = 0;
    /// Documents of this word not yet processed.
    std::uint64_t ndocs = 0;
    /// Bitmap position of the 1 opening the next unprocessed document.
    std::uint64_t next = 0;

    friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Keeps the best k documents seen; worst on top.
class TopKQueue {
public:
    explicit TopKQueue(std::size_t k) : k_(k) {}
    void push(const ScoredDoc& d);
    /// Contents ordered best first.
    [[nodiscard]] std::vector<ScoredDoc> sorted() const;

private:
    std::size_t k_;
    std::vector<ScoredDoc> heap_;
};

/// Weighted conjunctive search over the intersection, advancing the word with the
/// fewest unprocessed documents at each step.
class ConjunctiveBitmapSearch {
public:
    /// Words with idf <= epsilon are removed from the query first.
    ConjunctiveBitmapSearch(const WtbcIndex& idx, const WordBitmaps& bitmaps, const Query& query, std::size_t k);

    /// Processes one candidate document. Returns false once some word has no documents left.
    bool step();
    void run() {
        while (step()) {
        }
    }

    [[nodiscard]] bool done() const noexcept { return done_; }
    /// Live triplets in processing order (fewest documents first, then word id).
    [[nodiscard]] std::vector<Triplet> triplets() const;
    [[nodiscard]] std::vector<ScoredDoc> results() const { return results_.sorted(); }

    /// Details of the last step, for inspection.
    struct StepInfo {
        WordId word = 0;
        Position position = 0;
        DocId doc = 0;
        Position start = 0;
        Position end = 0;
        std::uint64_t next_one = 0;
        std::uint64_t tf = 0;
        bool accepted = false;
    };
    [[nodiscard]] const StepInfo& last_step() const noexcept { return last_; }

private:
    const WtbcIndex* idx_;
    std::vector<const BitVectorRS*> bitmaps_;
    std::vector<double> idfs_;
    std::vector<Triplet> triplets_;  // query order
    TopKQueue results_;
    StepInfo last_;
    bool done_ = false;
};

std::vector<ScoredDoc> topk_drb_and(const WtbcIndex& idx, const WordBitmaps& bitmaps, const Query& query,
                                    std::size_t k);
std::vector<ScoredDoc> topk_drb_or(const WtbcIndex& idx, const WordBitmaps& bitmaps, const Query& query,
                                   std::size_t k);

/// Reference ranking by linear scan of the plain documents; ground truth for the engines.
std::vector<ScoredDoc> topk_oracle(std::span<const std::string> documents, const Query& query, std::size_t k);

}  // namespace wtbc
