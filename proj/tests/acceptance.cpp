// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero when
// any of criteria 1-8 fails; criterion 9 (timing shape) is reported only.

#include <wtbc/index_io.hpp>
#include <wtbc/retrieval.hpp>

#include "fixtures.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace wtbc;

namespace {

constexpr double kScoreRelTol = 1e-9;
constexpr int kEquivCorpora = 20;
constexpr int kEquivQueries = 200;
constexpr std::size_t kEquivMaxDocs = 1000;
constexpr std::size_t kEquivVocab = 5000;
constexpr int kRankSelectChecks = 100'000;
constexpr double kMaxPlainRatio = 0.45;
constexpr double kMaxBitmapPoints = 5.0;
constexpr double kBitmapEpsilon = 1e-6;
constexpr std::uint64_t kTimingMinBytes = 10'000'000;

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int digits = 2) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

bool same_results(const std::vector<ScoredDoc>& a, const std::vector<ScoredDoc>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].doc != b[i].doc ||
            std::abs(a[i].score - b[i].score) > kScoreRelTol * std::max(1e-300, std::abs(b[i].score))) {
            return false;
        }
    }
    return true;
}

std::string serialize(const WtbcIndex& idx, const WordBitmaps* bms) {
    std::ostringstream out;
    write_index(out, idx, bms);
    return out.str();
}

std::string reserialize(const std::string& bytes) {
    std::istringstream in(bytes);
    const LoadedIndex loaded = read_index(in);
    return serialize(loaded.index, loaded.bitmaps ? &*loaded.bitmaps : nullptr);
}

std::string concat(const std::vector<std::string>& docs) {
    std::string all;
    for (const auto& d : docs) {
        all += d;
    }
    return all;
}

Outcome worked_example() {
    const testing::ExampleTree ex;
    using E = testing::ExampleTree;
    const auto& root = ex.tree.root().bytes;
    const std::string decoded = ex.word_of(ex.tree.decode_at(9));
    const Position but = ex.tree.locate(ex.codes[ex.id_of("BUT")], 1);
    const std::uint64_t r = root.rank(E::b4, 9);
    const std::uint64_t s = root.select(E::b3, 2);

    const WtbcIndex idx = WtbcIndex::build(build_collection(std::vector<std::string>{testing::kExampleSentence}));
    const bool index_agrees = idx.word_at(9) == "SIMPLER" && idx.locate("BUT", 1) == 7;

    Outcome o;
    o.pass = decoded == "SIMPLER" && but == 7 && r == 3 && s == 7 && index_agrees;
    o.detail = "decode_at(9)=" + decoded + " locate(BUT,1)=" + std::to_string(but) + " rank_b4(root,9)=" +
               std::to_string(r) + " select_b3(root,2)=" + std::to_string(s) +
               (index_agrees ? " (dense-code index agrees)" : " (dense-code index disagrees)");
    return o;
}

Outcome bitmap_semantics() {
    const BitVectorRS bm = BitVectorRS::from_string("10000100100000");
    const auto tfs = tfs_from_bitmap(bm);
    const std::string back = bitmap_from_tfs(tfs).to_string();
    Outcome o;
    o.pass = bm.count_ones() == 3 && tfs == std::vector<std::uint64_t>{5, 3, 6} && back == "10000100100000";
    o.detail = "df=" + std::to_string(bm.count_ones()) + " tf=(";
    for (std::size_t i = 0; i < tfs.size(); ++i) {
        o.detail += (i ? "," : "") + std::to_string(tfs[i]);
    }
    o.detail += ") re-encoded=" + back;
    return o;
}

std::string repeat(const std::string& w, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) {
        s += (i ? " " : "") + w;
    }
    return s;
}

Outcome triplet_walkthrough() {
    const std::vector<std::string> docs{
        repeat("w1", 3) + " " + repeat("w3", 2),
        repeat("w1", 2) + " " + repeat("w3", 2),
        repeat("w1", 2) + " " + repeat("w3", 2),
        repeat("w3", 2),
        "w3",
        repeat("w2", 3) + " " + repeat("w1", 3) + " " + repeat("w3", 2),
        "w1 w3 " + repeat("w2", 5),
        "w1 w3",
        "w3 " + repeat("w2", 5),
        repeat("w2", 5),
        "x",
        "x",
    };
    const Collection c = build_collection(docs);
    const WtbcIndex idx = WtbcIndex::build(c);
    const auto& v = idx.vocab();
    const WordId w1 = v.id_of("w1"), w2 = v.id_of("w2"), w3 = v.id_of("w3");

    // Counts cross-checked on the plain token stream.
    const auto tf = testing::scan_tf(c);
    auto scan_df = [&](WordId w) {
        return std::count_if(tf.begin(), tf.end(), [&](const auto& d) { return d[w] > 0; });
    };
    std::uint64_t w1_before = 0;
    for (int d = 0; d < 5; ++d) {
        w1_before += tf[d][w1];
    }
    const bool counts_ok = scan_df(w1) == 6 && scan_df(w2) == 4 && scan_df(w3) == 9 && w1_before == 7 &&
                           w1_before + tf[5][w1] == 10 && v[w1].df == 6 && v[w2].df == 4 && v[w3].df == 9 &&
                           idx.count_prefix(w1, idx.doc_bounds(6).first) == 7 &&
                           idx.count_prefix(w1, idx.doc_bounds(6).second) == 10;

    const WordBitmaps bms = build_bitmaps(idx, DrbConfig{0.0});
    const Query q = parse_query("w1 w2 w3", QueryMode::conjunctive);
    ConjunctiveBitmapSearch search(idx, bms, q, 10);
    const bool initial_ok = search.triplets() == std::vector<Triplet>{{w2, 4, 1}, {w1, 6, 1}, {w3, 9, 1}};
    search.step();
    const auto after = search.triplets();
    const bool after_ok = after == std::vector<Triplet>{{w1, 2, 11}, {w2, 3, 4}, {w3, 3, 12}};
    search.run();
    const bool results_ok = same_results(search.results(), topk_oracle(docs, q, 10));

    auto name = [&](WordId w) { return w == w1 ? "w1" : w == w2 ? "w2" : "w3"; };
    Outcome o;
    o.pass = counts_ok && initial_ok && after_ok && results_ok;
    o.detail = "after first step:";
    for (const Triplet& t : after) {
        o.detail += std::string(" (") + name(t.word) + "," + std::to_string(t.ndocs) + "," + std::to_string(t.next) + ")";
    }
    o.detail += std::string(counts_ok ? "; counts match scan" : "; COUNTS DIFFER") +
                (results_ok ? "; results match oracle" : "; RESULTS DIFFER");
    return o;
}

Query random_query(std::mt19937_64& rng, const testing::Zipf& zipf, QueryMode mode) {
    const std::size_t n = 1 + rng() % 6;
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
        text += testing::vocab_word(zipf(rng)) + " ";
    }
    return parse_query(text, mode);
}

struct EquivalenceRun {
    Outcome equivalence;
    Outcome monotone;
    std::vector<std::vector<std::string>> corpora;
};

EquivalenceRun engine_equivalence() {
    EquivalenceRun run;
    std::uint64_t comparisons = 0, mismatches = 0, nonempty = 0;
    std::uint64_t emissions = 0, order_violations = 0, prefix_checks = 0, prefix_failures = 0;
    const auto start = Clock::now();
    std::mt19937_64 sizes(2024);
    // Queries lean towards frequent words so conjunctive queries are rarely empty.
    const testing::Zipf query_words(kEquivVocab, 1.0);

    for (int c = 0; c < kEquivCorpora; ++c) {
        const std::size_t ndocs = c % 2 == 0 ? kEquivMaxDocs : 20 + sizes() % (kEquivMaxDocs - 19);
        auto docs = testing::zipf_corpus(1000 + c, ndocs, kEquivVocab);
        const WtbcIndex idx = WtbcIndex::build(build_collection(docs));
        const WordBitmaps bms = build_bitmaps(idx, DrbConfig{0.0});
        std::mt19937_64 rng(7000 + c);

        for (int t = 0; t < kEquivQueries; ++t) {
            const Query base = random_query(rng, query_words, QueryMode::disjunctive);
            for (QueryMode mode : {QueryMode::conjunctive, QueryMode::disjunctive}) {
                Query q = base;
                q.mode = mode;
                for (std::size_t k : {1, 10, 20}) {
                    const auto expected = topk_oracle(docs, q, k);
                    const auto dr = topk_dr(idx, q, k);
                    const auto drb = mode == QueryMode::conjunctive ? topk_drb_and(idx, bms, q, k)
                                                                    : topk_drb_or(idx, bms, q, k);
                    ++comparisons;
                    nonempty += !expected.empty();
                    if (!same_results(dr, expected) || !same_results(drb, expected)) {
                        ++mismatches;
                    }
                }

                // Anytime emission for k = 20.
                const auto oracle = topk_oracle(docs, q, 20);
                SegmentSearch search(idx, q);
                std::vector<ScoredDoc> emitted;
                while (emitted.size() < 20) {
                    const auto d = search.next();
                    if (!d) {
                        break;
                    }
                    if (!emitted.empty() && d->score > emitted.back().score) {
                        ++order_violations;
                    }
                    emitted.push_back(*d);
                    ++emissions;
                    ++prefix_checks;
                    const std::vector<ScoredDoc> top(oracle.begin(),
                                                     oracle.begin() + std::min(emitted.size(), oracle.size()));
                    if (!same_results(emitted, top)) {
                        ++prefix_failures;
                    }
                }
                if (emitted.size() != oracle.size()) {
                    ++prefix_failures;
                }
            }
        }
        run.corpora.push_back(std::move(docs));
    }

    run.equivalence.pass = mismatches == 0;
    run.equivalence.detail = std::to_string(kEquivCorpora) + " corpora, " + std::to_string(comparisons) +
                             " (query, mode, k) cases, " + std::to_string(nonempty) + " non-empty, " +
                             std::to_string(mismatches) + " mismatches, " + fmt(seconds_since(start), 1) + " s";
    run.monotone.pass = order_violations == 0 && prefix_failures == 0;
    run.monotone.detail = std::to_string(emissions) + " emissions, " + std::to_string(order_violations) +
                          " order violations, " + std::to_string(prefix_failures) + "/" +
                          std::to_string(prefix_checks) + " prefix failures";
    return run;
}

struct English {
    std::vector<std::string> docs;
    std::uint64_t bytes = 0;
    std::optional<WtbcIndex> idx;
    std::optional<WordBitmaps> bitmaps;
    std::string error;
};

English load_english() {
    English e;
    const char* path = std::getenv("WTBC_ENGLISH_CORPUS");
    if (path == nullptr || !std::filesystem::exists(path)) {
        e.error = "WTBC_ENGLISH_CORPUS not set or missing";
        return e;
    }
    IngestConfig cfg;
    cfg.input = path;
    e.docs = read_documents(cfg);
    const Collection c = build_collection(e.docs);
    e.bytes = c.stats.original_bytes;
    e.idx = WtbcIndex::build(c);
    e.bitmaps = build_bitmaps(*e.idx, DrbConfig{kBitmapEpsilon});
    return e;
}

Outcome round_trip(const std::vector<std::vector<std::string>>& corpora, const English& english) {
    std::uint64_t checked = 0, failures = 0;
    for (const auto& docs : corpora) {
        const WtbcIndex idx = WtbcIndex::build(build_collection(docs));
        const WordBitmaps bms = build_bitmaps(idx, DrbConfig{0.0});
        ++checked;
        const std::string bytes = serialize(idx, &bms);
        if (idx.decode_range(1, idx.num_tokens()) != concat(docs) || reserialize(bytes) != bytes) {
            ++failures;
        }
    }
    Outcome o;
    std::string english_note = "English corpus unavailable";
    if (english.idx) {
        const auto start = Clock::now();
        const bool text_ok = english.idx->decode_range(1, english.idx->num_tokens()) == concat(english.docs);
        const std::string plain = serialize(*english.idx, nullptr);
        const std::string full = serialize(*english.idx, &*english.bitmaps);
        const bool file_ok = reserialize(plain) == plain && reserialize(full) == full;
        ++checked;
        failures += !(text_ok && file_ok);
        english_note = "English " + fmt(english.bytes / 1e6, 1) + " MB " + (text_ok ? "text ok" : "TEXT DIFFERS") +
                       ", " + (file_ok ? "re-save identical" : "RE-SAVE DIFFERS") + " in " +
                       fmt(seconds_since(start), 1) + " s";
    } else {
        failures += 1;
    }
    o.pass = failures == 0;
    o.detail = std::to_string(checked) + " corpora, " + std::to_string(failures) + " failures; " + english_note;
    return o;
}

Outcome rank_select_laws() {
    std::mt19937_64 rng(99);
    std::uint64_t checks = 0, failures = 0;

    // Byte sequences: skewed values, two block sizes.
    for (std::uint32_t block : {64u, ByteSequenceRS::kDefaultBlockSize}) {
        std::vector<std::uint8_t> data(300'000);
        const testing::Zipf zipf(256, 1.1);
        for (auto& b : data) {
            b = static_cast<std::uint8_t>(zipf(rng));
        }
        std::vector<std::vector<std::uint64_t>> occ(256);
        for (std::size_t i = 0; i < data.size(); ++i) {
            occ[data[i]].push_back(i + 1);
        }
        const ByteSequenceRS seq(data, block);
        for (int t = 0; t < kRankSelectChecks / 4; ++t) {
            const auto b = static_cast<std::uint8_t>(zipf(rng));
            const std::uint64_t i = rng() % (data.size() + 1);
            const std::uint64_t r = seq.rank(b, i);
            const auto expected_r = static_cast<std::uint64_t>(
                std::upper_bound(occ[b].begin(), occ[b].end(), i) - occ[b].begin());
            bool ok = r == expected_r && (r == 0 || seq.select(b, r) <= i);
            if (!occ[b].empty()) {
                const std::uint64_t j = 1 + rng() % occ[b].size();
                const std::uint64_t p = seq.select(b, j);
                ok = ok && p == occ[b][j - 1] && seq.rank(b, p) == j && seq[p] == b;
            }
            ++checks;
            failures += !ok;
        }
    }

    // Bitvectors at several densities.
    for (double density : {0.5, 0.02}) {
        BitVectorBuilder builder;
        std::vector<std::uint64_t> ones;
        std::bernoulli_distribution bit(density);
        for (std::uint64_t i = 1; i <= 400'000; ++i) {
            const bool v = bit(rng);
            builder.push_back(v);
            if (v) {
                ones.push_back(i);
            }
        }
        const BitVectorRS bv = std::move(builder).build();
        for (int t = 0; t < kRankSelectChecks / 4; ++t) {
            const std::uint64_t i = rng() % (bv.size() + 1);
            const std::uint64_t r = bv.rank1(i);
            const auto expected_r =
                static_cast<std::uint64_t>(std::upper_bound(ones.begin(), ones.end(), i) - ones.begin());
            const std::uint64_t j = 1 + rng() % ones.size();
            const std::uint64_t p = bv.select1(j);
            const std::uint64_t next = i == 0 ? 0 : bv.next1(i);
            const auto after = std::upper_bound(ones.begin(), ones.end(), i);
            const std::uint64_t expected_next = after == ones.end() ? bv.size() + 1 : *after;
            const bool ok = r == expected_r && (r == 0 || bv.select1(r) <= i) && p == ones[j - 1] &&
                            bv.rank1(p) == j && (i == 0 || next == expected_next);
            ++checks;
            failures += !ok;
        }
    }
    Outcome o;
    o.pass = failures == 0 && checks >= static_cast<std::uint64_t>(kRankSelectChecks);
    o.detail = std::to_string(checks) + " checks, " + std::to_string(failures) + " failures";
    return o;
}

Outcome compression(const English& english) {
    Outcome o;
    if (!english.idx) {
        o.pass = false;
        o.detail = english.error;
        return o;
    }
    std::ostringstream plain, full;
    const SectionSizes p = write_index(plain, *english.idx, nullptr);
    const SectionSizes f = write_index(full, *english.idx, &*english.bitmaps);
    const double original = static_cast<double>(english.bytes);
    const double ratio = static_cast<double>(p.total()) / original;
    const double points = 100.0 * static_cast<double>(f.total() - p.total()) / original;
    const double counters = 100.0 * static_cast<double>(english.idx->tree().counter_bytes()) / original;
    o.pass = ratio <= kMaxPlainRatio && points <= kMaxBitmapPoints;
    o.detail = fmt(original / 1e6, 2) + " MB English: index " + fmt(100 * ratio, 1) + "% (limit " +
               fmt(100 * kMaxPlainRatio, 0) + "%; vocab " + fmt(100.0 * p.vocab / original, 1) + "%, tree " +
               fmt(100.0 * p.tree / original, 1) + "%), bitmaps +" + fmt(points, 2) + " points (limit " +
               fmt(kMaxBitmapPoints, 0) + "), in-memory counters " + fmt(counters, 2) + "%";
    return o;
}

double mean_ms(const std::function<void()>& f, int repeat) {
    const auto start = Clock::now();
    for (int r = 0; r < repeat; ++r) {
        f();
    }
    return 1000.0 * seconds_since(start) / repeat;
}

Outcome timing_shape(const English& english) {
    Outcome o;
    if (!english.idx || english.bytes < kTimingMinBytes) {
        o.pass = false;
        o.detail = english.idx ? "corpus below 10 MB" : english.error;
        return o;
    }
    const WtbcIndex& idx = *english.idx;
    const WordBitmaps& bms = *english.bitmaps;

    // Words ordered by df, keeping those that own a bitmap.
    std::vector<WordId> by_df;
    for (const auto& [w, bm] : bms.all()) {
        if (idx.vocab()[w].kind == TokenKind::word) {
            by_df.push_back(w);
        }
    }
    std::sort(by_df.begin(), by_df.end(), [&](WordId a, WordId b) {
        return idx.vocab()[a].df > idx.vocab()[b].df || (idx.vocab()[a].df == idx.vocab()[b].df && a < b);
    });

    constexpr std::size_t k = 10;
    double dr_and = 0, drb_and = 0;
    const std::size_t high = std::min<std::size_t>(20, by_df.size());
    for (std::size_t i = 0; i < high; ++i) {
        const Query q{{idx.vocab()[by_df[i]].word}, QueryMode::conjunctive};
        dr_and += mean_ms([&] { (void)topk_dr(idx, q, k); }, 3);
        drb_and += mean_ms([&] { (void)topk_drb_and(idx, bms, q, k); }, 3);
    }

    std::mt19937_64 rng(5);
    const std::size_t pool = std::min<std::size_t>(2000, by_df.size());
    double dr_or = 0, drb_or = 0;
    const int or_queries = 20;
    for (int t = 0; t < or_queries; ++t) {
        Query q;
        q.mode = QueryMode::disjunctive;
        const std::size_t n = 2 + rng() % 3;
        for (std::size_t i = 0; i < n; ++i) {
            q.words.push_back(idx.vocab()[by_df[rng() % pool]].word);
        }
        dr_or += mean_ms([&] { (void)topk_dr(idx, q, k); }, 3);
        drb_or += mean_ms([&] { (void)topk_drb_or(idx, bms, q, k); }, 3);
    }
    dr_and /= static_cast<double>(high);
    drb_and /= static_cast<double>(high);
    dr_or /= or_queries;
    drb_or /= or_queries;
    o.pass = dr_and < drb_and && dr_or < drb_or;
    o.detail = "k=10 mean ms: 1-word AND (top-" + std::to_string(high) + " df) DR " + fmt(dr_and, 3) + " vs DRB " +
               fmt(drb_and, 3) + "; OR (2-4 words) DR " + fmt(dr_or, 3) + " vs DRB " + fmt(drb_or, 3);
    return o;
}

void report(int id, const std::string& name, const Outcome& o, bool gating = true) {
    std::cout << (o.pass ? "PASS" : "FAIL") << (gating ? "" : " (report-only)") << "  C" << id << " " << name
              << ": " << o.detail << std::endl;
}

}  // namespace

int main() {
    bool ok = true;
    auto gate = [&](int id, const std::string& name, const Outcome& o) {
        report(id, name, o);
        ok = ok && o.pass;
    };

    gate(1, "worked example", worked_example());
    gate(2, "bitmap semantics", bitmap_semantics());
    gate(3, "triplet walkthrough", triplet_walkthrough());
    EquivalenceRun eq = engine_equivalence();
    gate(4, "engine equivalence", eq.equivalence);
    gate(5, "monotone emission", eq.monotone);

    const auto start = Clock::now();
    const English english = load_english();
    if (english.idx) {
        std::cout << "      English corpus: " << english.docs.size() << " documents, " << english.idx->num_tokens()
                  << " tokens, indexed in " << fmt(seconds_since(start), 1) << " s" << std::endl;
    }
    gate(6, "round trip", round_trip(eq.corpora, english));
    gate(7, "rank/select laws", rank_select_laws());
    gate(8, "compression", compression(english));
    report(9, "timing shape", timing_shape(english), false);
    return ok ? 0 : 1;
}
