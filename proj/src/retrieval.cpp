#include <wtbc/retrieval.hpp>

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace wtbc {

namespace {

std::vector<std::string> distinct(std::span<const std::string> words) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& w : words) {
        if (seen.insert(w).second) {
            out.push_back(w);
        }
    }
    return out;
}

}  // namespace

Query parse_query(std::string_view text, QueryMode mode) {
    std::vector<std::string> words;
    for (Token& t : tokenize(text)) {
        if (t.kind == TokenKind::word) {
            words.push_back(std::move(t.text));
        }
    }
    return {distinct(words), mode};
}

double idf(const Vocabulary& vocab, std::string_view word, std::uint64_t num_docs) {
    return idf(num_docs, vocab[vocab.id_of(word)].df);
}

ResolvedQuery resolve(const WtbcIndex& idx, const Query& query) {
    ResolvedQuery rq;
    rq.mode = query.mode;
    for (const auto& w : distinct(query.words)) {
        const auto id = idx.vocab().find(w);
        if (!id || idx.vocab()[*id].kind == TokenKind::doc_end) {
            if (query.mode == QueryMode::conjunctive) {
                rq.unsatisfiable = true;
            }
            continue;
        }
        rq.words.push_back(*id);
        rq.idfs.push_back(idf(idx.num_docs(), idx.vocab()[*id].df));
    }
    return rq;
}

Segment whole_collection(const WtbcIndex& idx, const ResolvedQuery& query) {
    Segment s;
    s.start_pos = 1;
    s.end_pos = idx.num_tokens();
    s.ndocs = idx.num_docs();
    s.first_doc = 1;
    s.counts.reserve(query.words.size());
    for (WordId w : query.words) {
        s.counts.push_back(idx.vocab()[w].freq);
    }
    s.score = tfidf(s.counts, query.idfs);
    return s;
}

double score_segment(const WtbcIndex& idx, const ResolvedQuery& query, const Segment& seg) {
    std::vector<std::uint64_t> counts;
    counts.reserve(query.words.size());
    for (WordId w : query.words) {
        counts.push_back(idx.count_range(w, seg.start_pos, seg.end_pos));
    }
    return tfidf(counts, query.idfs);
}

std::pair<Segment, Segment> split_segment(const WtbcIndex& idx, const ResolvedQuery& query, const Segment& seg) {
    if (seg.ndocs < 2) {
        throw Error("split_segment needs a segment of at least two documents");
    }
    const DocId last_split = seg.first_doc + seg.ndocs - 2;
    const DocId d = std::clamp<DocId>(idx.bounds().doc_rank((seg.start_pos + seg.end_pos) / 2), seg.first_doc,
                                      last_split);
    const Position boundary = idx.bounds().doc_select(d);

    Segment left;
    left.start_pos = seg.start_pos;
    left.end_pos = boundary;
    left.first_doc = seg.first_doc;
    left.ndocs = d - seg.first_doc + 1;
    Segment right;
    right.start_pos = boundary + 1;
    right.end_pos = seg.end_pos;
    right.first_doc = d + 1;
    right.ndocs = seg.ndocs - left.ndocs;

    left.counts.reserve(query.words.size());
    right.counts.reserve(query.words.size());
    for (std::size_t i = 0; i < query.words.size(); ++i) {
        const std::uint64_t c = idx.count_range(query.words[i], left.start_pos, left.end_pos);
        left.counts.push_back(c);
        right.counts.push_back(seg.counts[i] - c);
    }
    left.score = tfidf(left.counts, query.idfs);
    right.score = tfidf(right.counts, query.idfs);
    return {std::move(left), std::move(right)};
}

SegmentSearch::SegmentSearch(const WtbcIndex& idx, const Query& query) : idx_(&idx), query_(resolve(idx, query)) {
    if (query_.unsatisfiable || query_.words.empty()) {
        return;
    }
    push(whole_collection(idx, query_));
}

bool SegmentSearch::keep(const Segment& s) const noexcept {
    if (!(s.score > 0.0)) {
        return false;
    }
    if (query_.mode == QueryMode::conjunctive) {
        return std::none_of(s.counts.begin(), s.counts.end(), [](std::uint64_t c) { return c == 0; });
    }
    return true;
}

void SegmentSearch::push(Segment s) {
    if (keep(s)) {
        heap_.push_back(std::move(s));
        std::push_heap(heap_.begin(), heap_.end(), Worse{});
    }
}

std::optional<ScoredDoc> SegmentSearch::next() {
    while (!heap_.empty()) {
        std::pop_heap(heap_.begin(), heap_.end(), Worse{});
        Segment s = std::move(heap_.back());
        heap_.pop_back();
        ++processed_;
        if (s.ndocs == 1) {
            return ScoredDoc{s.first_doc, s.score};
        }
        auto [left, right] = split_segment(*idx_, query_, s);
        push(std::move(left));
        push(std::move(right));
    }
    return std::nullopt;
}

std::vector<ScoredDoc> topk_dr(const WtbcIndex& idx, const Query& query, std::size_t k) {
    std::vector<ScoredDoc> out;
    if (k == 0) {
        return out;
    }
    SegmentSearch search(idx, query);
    while (out.size() < k) {
        auto d = search.next();
        if (!d) {
            break;
        }
        out.push_back(*d);
    }
    return out;
}

const BitVectorRS* WordBitmaps::find(WordId w) const noexcept {
    auto it = bitmaps_.find(w);
    return it == bitmaps_.end() ? nullptr : &it->second;
}

std::uint64_t WordBitmaps::total_bits() const noexcept {
    std::uint64_t total = 0;
    for (const auto& [w, bm] : bitmaps_) {
        total += bm.size();
    }
    return total;
}

bool has_bitmap(const VocabEntry& e, std::uint64_t num_docs, double epsilon) {
    return e.kind != TokenKind::doc_end && idf(num_docs, e.df) > epsilon;
}

WordBitmaps build_bitmaps(const WtbcIndex& idx, const DrbConfig& config) {
    if (config.epsilon < 0.0) {
        throw Error("epsilon must be non-negative");
    }
    const auto& vocab = idx.vocab();
    constexpr std::uint32_t kNone = 0xFFFFFFFF;
    std::vector<std::uint32_t> slot(vocab.size(), kNone);
    std::vector<WordId> words;
    for (WordId w = 0; w < vocab.size(); ++w) {
        if (has_bitmap(vocab[w], idx.num_docs(), config.epsilon)) {
            slot[w] = static_cast<std::uint32_t>(words.size());
            words.push_back(w);
        }
    }
    std::vector<BitVectorBuilder> builders(words.size());
    std::vector<DocId> last_doc(words.size(), 0);
    DocId doc = 1;
    idx.tree().for_each_codeword(1, idx.num_tokens(), [&](const Codeword& cw) {
        auto bytes = cw.bytes();
        const auto w = static_cast<WordId>(decode_bytes(bytes, idx.params()));
        if (w == kDocEnd) {
            ++doc;
            return;
        }
        if (const std::uint32_t s = slot[w]; s != kNone) {
            builders[s].push_back(last_doc[s] != doc);
            last_doc[s] = doc;
        }
    });
    std::map<WordId, BitVectorRS> bitmaps;
    for (std::size_t s = 0; s < words.size(); ++s) {
        bitmaps.emplace(words[s], std::move(builders[s]).build());
    }
    return WordBitmaps(config.epsilon, std::move(bitmaps));
}

BitVectorRS bitmap_from_tfs(std::span<const std::uint64_t> tfs) {
    BitVectorBuilder b;
    for (std::uint64_t tf : tfs) {
        if (tf == 0) {
            throw Error("term frequencies in a bitmap must be positive");
        }
        b.push_back(true);
        for (std::uint64_t i = 1; i < tf; ++i) {
            b.push_back(false);
        }
    }
    return std::move(b).build();
}

std::vector<std::uint64_t> tfs_from_bitmap(const BitVectorRS& bm) {
    std::vector<std::uint64_t> tfs;
    if (bm.size() == 0) {
        return tfs;
    }
    for (std::uint64_t p = bm.next1(0); p <= bm.size();) {
        const std::uint64_t next = bm.next1(p);
        tfs.push_back(next - p);
        p = next;
    }
    return tfs;
}

void TopKQueue::push(const ScoredDoc& d) {
    if (k_ == 0) {
        return;
    }
    if (heap_.size() < k_) {
        heap_.push_back(d);
        std::push_heap(heap_.begin(), heap_.end(), ranks_before);
    } else if (ranks_before(d, heap_.front())) {
        std::pop_heap(heap_.begin(), heap_.end(), ranks_before);
        heap_.back() = d;
        std::push_heap(heap_.begin(), heap_.end(), ranks_before);
    }
}

std::vector<ScoredDoc> TopKQueue::sorted() const {
    std::vector<ScoredDoc> out = heap_;
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

namespace {

// Query words that take part in bitmap-driven search: known, above epsilon, in query order.
struct BitmapQuery {
    std::vector<WordId> words;
    std::vector<double> idfs;
    std::vector<const BitVectorRS*> bitmaps;
    bool unsatisfiable = false;
};

BitmapQuery bitmap_query(const WtbcIndex& idx, const WordBitmaps& bitmaps, const Query& query) {
    const ResolvedQuery rq = resolve(idx, query);
    BitmapQuery bq;
    bq.unsatisfiable = rq.unsatisfiable;
    for (std::size_t i = 0; i < rq.words.size(); ++i) {
        if (!(rq.idfs[i] > bitmaps.epsilon())) {
            continue;
        }
        const BitVectorRS* bm = bitmaps.find(rq.words[i]);
        if (bm == nullptr) {
            throw Error("no bitmap for word '" + idx.vocab()[rq.words[i]].word + "'");
        }
        bq.words.push_back(rq.words[i]);
        bq.idfs.push_back(rq.idfs[i]);
        bq.bitmaps.push_back(bm);
    }
    return bq;
}

}  // namespace

ConjunctiveBitmapSearch::ConjunctiveBitmapSearch(const WtbcIndex& idx, const WordBitmaps& bitmaps,
                                                 const Query& query, std::size_t k)
    : idx_(&idx), results_(k) {
    Query and_query = query;
    and_query.mode = QueryMode::conjunctive;
    BitmapQuery bq = bitmap_query(idx, bitmaps, and_query);
    if (bq.unsatisfiable || bq.words.empty() || k == 0) {
        done_ = true;
        return;
    }
    bitmaps_ = std::move(bq.bitmaps);
    idfs_ = std::move(bq.idfs);
    for (WordId w : bq.words) {
        triplets_.push_back({w, idx.vocab()[w].df, 1});
    }
}

std::vector<Triplet> ConjunctiveBitmapSearch::triplets() const {
    std::vector<Triplet> out = triplets_;
    std::sort(out.begin(), out.end(), [](const Triplet& a, const Triplet& b) {
        return a.ndocs < b.ndocs || (a.ndocs == b.ndocs && a.word < b.word);
    });
    return out;
}

bool ConjunctiveBitmapSearch::step() {
    if (done_) {
        return false;
    }
    const auto chosen = static_cast<std::size_t>(
        std::min_element(triplets_.begin(), triplets_.end(),
                         [](const Triplet& a, const Triplet& b) {
                             return a.ndocs < b.ndocs || (a.ndocs == b.ndocs && a.word < b.word);
                         }) -
        triplets_.begin());
    const Triplet& t = triplets_[chosen];

    StepInfo info;
    info.word = t.word;
    info.position = idx_->locate(t.word, t.next);
    info.doc = idx_->doc_of(info.position);
    std::tie(info.start, info.end) = idx_->doc_bounds(info.doc);
    info.next_one = bitmaps_[chosen]->next1(t.next);
    info.tf = info.next_one - t.next;

    // Occurrences up to the end of the document, per word.
    std::vector<std::uint64_t> upto_end(triplets_.size());
    std::vector<std::uint64_t> tfs(triplets_.size());
    for (std::size_t i = 0; i < triplets_.size(); ++i) {
        if (i == chosen) {
            tfs[i] = info.tf;
            upto_end[i] = info.next_one - 1;
        } else {
            upto_end[i] = idx_->count_prefix(triplets_[i].word, info.end);
            tfs[i] = upto_end[i] - idx_->count_prefix(triplets_[i].word, info.start);
        }
    }
    info.accepted = std::none_of(tfs.begin(), tfs.end(), [](std::uint64_t tf) { return tf == 0; });
    if (info.accepted) {
        results_.push({info.doc, tfidf(tfs, idfs_)});
    }

    for (std::size_t i = 0; i < triplets_.size(); ++i) {
        Triplet& u = triplets_[i];
        u.next = upto_end[i] + 1;
        u.ndocs = idx_->vocab()[u.word].df - bitmaps_[i]->rank1(upto_end[i]);
        if (u.ndocs == 0) {
            done_ = true;
        }
    }
    last_ = info;
    return !done_;
}

std::vector<ScoredDoc> topk_drb_and(const WtbcIndex& idx, const WordBitmaps& bitmaps, const Query& query,
                                    std::size_t k) {
    ConjunctiveBitmapSearch search(idx, bitmaps, query, k);
    search.run();
    return search.results();
}

std::vector<ScoredDoc> topk_drb_or(const WtbcIndex& idx, const WordBitmaps& bitmaps, const Query& query,
                                   std::size_t k) {
    Query or_query = query;
    or_query.mode = QueryMode::disjunctive;
    const BitmapQuery bq = bitmap_query(idx, bitmaps, or_query);
    if (k == 0) {
        return {};
    }
    std::unordered_map<DocId, double> acc;
    for (std::size_t i = 0; i < bq.words.size(); ++i) {
        const BitVectorRS& bm = *bq.bitmaps[i];
        for (std::uint64_t p = 1; p <= bm.size();) {
            const std::uint64_t next = bm.next1(p);
            const DocId d = idx.doc_of(idx.locate(bq.words[i], p));
            acc[d] += static_cast<double>(next - p) * bq.idfs[i];
            p = next;
        }
    }
    std::vector<ScoredDoc> docs;
    docs.reserve(acc.size());
    for (const auto& [d, score] : acc) {
        if (score > 0.0) {
            docs.push_back({d, score});
        }
    }
    const std::size_t n = std::min(k, docs.size());
    std::partial_sort(docs.begin(), docs.begin() + static_cast<std::ptrdiff_t>(n), docs.end(), ranks_before);
    docs.resize(n);
    return docs;
}

std::vector<ScoredDoc> topk_oracle(std::span<const std::string> documents, const Query& query, std::size_t k) {
    const std::vector<std::string> words = distinct(query.words);
    std::vector<std::vector<std::uint64_t>> tf(documents.size(), std::vector<std::uint64_t>(words.size(), 0));
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < words.size(); ++i) {
        column.emplace(words[i], i);
    }
    for (std::size_t d = 0; d < documents.size(); ++d) {
        for (const Token& t : tokenize(documents[d])) {
            if (auto it = column.find(t.text); it != column.end()) {
                ++tf[d][it->second];
            }
        }
    }
    std::vector<std::uint64_t> df(words.size(), 0);
    for (const auto& row : tf) {
        for (std::size_t i = 0; i < words.size(); ++i) {
            df[i] += row[i] > 0 ? 1 : 0;
        }
    }

    std::vector<std::size_t> kept;
    std::vector<double> idfs;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (df[i] == 0) {
            if (query.mode == QueryMode::conjunctive) {
                return {};
            }
            continue;
        }
        kept.push_back(i);
        idfs.push_back(idf(documents.size(), df[i]));
    }

    std::vector<ScoredDoc> scored;
    std::vector<std::uint64_t> counts(kept.size());
    for (std::size_t d = 0; d < documents.size(); ++d) {
        bool all = true;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            counts[j] = tf[d][kept[j]];
            all = all && counts[j] > 0;
        }
        if (query.mode == QueryMode::conjunctive && !all) {
            continue;
        }
        const double score = tfidf(counts, idfs);
        if (score > 0.0) {
            scored.push_back({d + 1, score});
        }
    }
    std::sort(scored.begin(), scored.end(), ranks_before);
    if (scored.size() > k) {
        scored.resize(k);
    }
    return scored;
}

}  // namespace wtbc
