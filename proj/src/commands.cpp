#include <wtbc/commands.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

namespace wtbc::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string fixed(double value, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

std::string percent(std::uint64_t part, std::uint64_t whole) {
    return whole == 0 ? "n/a" : fixed(100.0 * static_cast<double>(part) / static_cast<double>(whole), 2) + "%";
}

const char* mode_name(QueryMode m) { return m == QueryMode::conjunctive ? "and" : "or"; }

const char* algo_name(Algo a) {
    switch (a) {
        case Algo::dr:
            return "dr";
        case Algo::drb:
            return "drb";
        case Algo::oracle:
            return "oracle";
    }
    return "?";
}

std::uint64_t parse_uint(std::string_view text, const char* what) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw Error(std::string("invalid ") + what + ": '" + std::string(text) + "'");
    }
    return v;
}

std::optional<std::vector<std::string>> load_corpus(Algo algo, const std::optional<std::filesystem::path>& corpus,
                                                    const std::string& delimiter) {
    if (algo != Algo::oracle) {
        return std::nullopt;
    }
    if (!corpus) {
        throw Error("--algo oracle requires --corpus");
    }
    IngestConfig cfg;
    cfg.input = *corpus;
    cfg.delimiter = delimiter;
    return read_documents(cfg);
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string format_score(double score) { return fixed(score, 6); }

void write_results(std::ostream& out, const std::vector<ScoredDoc>& results) {
    for (std::size_t i = 0; i < results.size(); ++i) {
        out << (i + 1) << '\t' << results[i].doc << '\t' << format_score(results[i].score) << '\n';
    }
}

std::pair<Position, Position> parse_range(std::string_view text) {
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        throw Error("position range must look like A..B");
    }
    return {parse_uint(text.substr(0, dots), "range start"), parse_uint(text.substr(dots + 2), "range end")};
}

std::pair<std::string, std::uint64_t> parse_hit(std::string_view text) {
    const auto comma = text.rfind(',');
    if (comma == std::string_view::npos || comma == 0) {
        throw Error("hit must look like word,j");
    }
    return {std::string(text.substr(0, comma)), parse_uint(text.substr(comma + 1), "occurrence number")};
}

void build(const BuildArgs& args, std::ostream& out) {
    const auto start = Clock::now();
    IngestConfig cfg;
    cfg.input = args.input;
    cfg.delimiter = args.delimiter;
    cfg.sentinel = args.sentinel;
    const Collection collection = build_collection(cfg);
    BuildOptions options;
    options.block_size = args.block_size;
    const WtbcIndex idx = WtbcIndex::build(collection, options);
    std::optional<WordBitmaps> bitmaps;
    if (args.drb) {
        bitmaps = build_bitmaps(idx, DrbConfig{args.epsilon});
    }
    SaveOptions save;
    save.epsilon = args.epsilon;
    save.store_counters = args.store_counters;
    const SectionSizes sizes = save_index(args.output, idx, bitmaps ? &*bitmaps : nullptr, save);
    const double ms = elapsed_ms(start);

    out << "documents: " << idx.num_docs() << '\n';
    out << "tokens: " << idx.num_tokens() << '\n';
    out << "vocabulary: " << idx.vocab().size() << '\n';
    out << "s,c: " << idx.params().s << ',' << idx.params().c << '\n';
    out << "index bytes: " << sizes.total() << '\n';
    out << "compression ratio: " << percent(sizes.total(), idx.stats().original_bytes) << '\n';
    out << "build time ms: " << fixed(ms, 1) << '\n';
}

std::vector<ScoredDoc> run_query(const LoadedIndex& loaded, const Query& q, Algo algo, std::size_t k,
                                 const std::vector<std::string>* corpus) {
    switch (algo) {
        case Algo::dr:
            return topk_dr(loaded.index, q, k);
        case Algo::drb:
            if (!loaded.bitmaps) {
                throw Error("--algo drb needs an index built with --drb");
            }
            return q.mode == QueryMode::conjunctive ? topk_drb_and(loaded.index, *loaded.bitmaps, q, k)
                                                    : topk_drb_or(loaded.index, *loaded.bitmaps, q, k);
        case Algo::oracle:
            if (corpus == nullptr) {
                throw Error("--algo oracle requires --corpus");
            }
            return topk_oracle(*corpus, q, k);
    }
    return {};
}

void query(const QueryArgs& args, std::ostream& out) {
    const LoadedIndex loaded = load_index(args.index);
    if (args.algo == Algo::drb && !loaded.bitmaps) {
        throw Error("--algo drb needs an index built with --drb");
    }
    const auto corpus = load_corpus(args.algo, args.corpus, args.delimiter);
    const Query q = parse_query(args.query, args.mode);
    write_results(out, run_query(loaded, q, args.algo, args.k, corpus ? &*corpus : nullptr));
}

void extract(const ExtractArgs& args, std::ostream& out) {
    const int selected = int(args.doc.has_value()) + int(args.pos.has_value()) + int(args.hit.has_value());
    if (selected != 1) {
        throw Error("extract needs exactly one of --doc, --pos, --hit");
    }
    const LoadedIndex loaded = load_index(args.index);
    const WtbcIndex& idx = loaded.index;
    if (args.doc) {
        out << idx.document(*args.doc);
    } else if (args.pos) {
        const auto [a, b] = *args.pos;
        if (a == 0 || a > b || b > idx.num_tokens()) {
            throw OutOfRange("position range " + std::to_string(a) + ".." + std::to_string(b) + " outside [1, " +
                             std::to_string(idx.num_tokens()) + "]");
        }
        out << idx.decode_range(a, b, "\n");
    } else {
        out << idx.snippet(args.hit->first, args.hit->second, args.window) << '\n';
    }
}

void stats(const std::filesystem::path& index, std::ostream& out) {
    const LoadedIndex loaded = load_index(index);
    const WtbcIndex& idx = loaded.index;
    const SectionSizes& sec = loaded.sections;
    const std::uint64_t original = idx.stats().original_bytes;
    const std::uint64_t counters = idx.tree().counter_bytes();
    const std::uint64_t file_size = std::filesystem::file_size(index);

    out << "documents (N): " << idx.num_docs() << '\n';
    out << "tokens with sentinels (n): " << idx.num_tokens() << '\n';
    out << "tokens without sentinels: " << idx.stats().num_tokens_without_sentinels() << '\n';
    out << "vocabulary (V): " << idx.vocab().size() << '\n';
    out << "s,c: " << idx.params().s << ',' << idx.params().c << '\n';
    out << "block size: " << idx.block_size() << '\n';
    out << "tree nodes: " << idx.tree().nodes().size() << '\n';
    out << "original bytes: " << original << '\n';
    out << "file bytes: " << file_size << '\n';
    out << "header bytes: " << sec.header << '\n';
    out << "vocabulary bytes: " << sec.vocab << '\n';
    out << "tree bytes: " << sec.tree << '\n';
    out << "bounds bytes: " << sec.bounds << '\n';
    out << "bitmap bytes: " << sec.bitmaps << '\n';
    out << "counter bytes (in memory): " << counters << '\n';
    out << "counter overhead: " << percent(counters, original) << '\n';
    out << "bitmap overhead: " << percent(sec.bitmaps, original) << '\n';
    if (loaded.bitmaps) {
        out << "bitmap words: " << loaded.bitmaps->all().size() << " (epsilon " << loaded.epsilon << ")\n";
    }
    out << "compression ratio: " << percent(file_size, original) << '\n';
    out << "compression ratio with counters: " << percent(file_size - sec.stored_counters + counters, original)
        << '\n';
}

void bench(const BenchArgs& args, std::ostream& out) {
    if (args.repeat == 0) {
        throw Error("--repeat must be at least 1");
    }
    std::ifstream in(args.queries);
    if (!in) {
        throw Error("cannot read queries file " + args.queries.string());
    }
    const LoadedIndex loaded = load_index(args.index);
    const auto corpus = load_corpus(args.algo, args.corpus, args.delimiter);
    out << "query,n_words,mode,algo,k,mean_ms,results_count\n";
    std::string line;
    while (std::getline(in, line)) {
        const Query q = parse_query(line, args.mode);
        if (q.words.empty()) {
            continue;
        }
        std::size_t count = 0;
        const auto start = Clock::now();
        for (unsigned r = 0; r < args.repeat; ++r) {
            count = run_query(loaded, q, args.algo, args.k, corpus ? &*corpus : nullptr).size();
        }
        const double mean = elapsed_ms(start) / args.repeat;
        out << csv_quote(line) << ',' << q.words.size() << ',' << mode_name(args.mode) << ','
            << algo_name(args.algo) << ',' << args.k << ',' << fixed(mean, 4) << ',' << count << '\n';
    }
}

}  // namespace wtbc::cli
