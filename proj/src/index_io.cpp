#include <wtbc/index_io.hpp>

#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace wtbc {

namespace {

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    template <class T>
    void put(T value) {
        static_assert(std::is_unsigned_v<T>);
        char buf[sizeof(T)];
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            buf[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
        }
        write(buf, sizeof(T));
    }
    void put_u32(std::uint64_t value, const char* what) {
        if (value > std::numeric_limits<std::uint32_t>::max()) {
            throw CapacityError(std::string(what) + " does not fit in 32 bits");
        }
        put(static_cast<std::uint32_t>(value));
    }
    void put_f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        put(bits);
    }
    void bytes(std::span<const std::uint8_t> b) { write(reinterpret_cast<const char*>(b.data()), b.size()); }
    void write(const char* p, std::size_t n) {
        out_.write(p, static_cast<std::streamsize>(n));
        written_ += n;
    }
    [[nodiscard]] std::uint64_t written() const noexcept { return written_; }

private:
    std::ostream& out_;
    std::uint64_t written_ = 0;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    template <class T>
    T get() {
        char buf[sizeof(T)];
        read(buf, sizeof(T));
        T value = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            value |= static_cast<T>(static_cast<unsigned char>(buf[i])) << (8 * i);
        }
        return value;
    }
    double get_f64() {
        const auto bits = get<std::uint64_t>();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::vector<std::uint8_t> bytes(std::uint64_t n) {
        std::vector<std::uint8_t> out;
        // Grow in chunks so a corrupt length cannot trigger a huge allocation up front.
        constexpr std::uint64_t kChunk = 1 << 20;
        while (out.size() < n) {
            const std::uint64_t take = std::min(kChunk, n - out.size());
            const std::size_t old = out.size();
            out.resize(old + take);
            read(reinterpret_cast<char*>(out.data() + old), take);
        }
        return out;
    }
    void read(char* p, std::size_t n) {
        if (!in_.read(p, static_cast<std::streamsize>(n))) {
            throw CorruptData("index file truncated");
        }
        consumed_ += n;
    }
    [[nodiscard]] std::uint64_t consumed() const noexcept { return consumed_; }

private:
    std::istream& in_;
    std::uint64_t consumed_ = 0;
};

TokenKind kind_of(WordId rank, const std::string& word) {
    if (rank == kDocEnd) {
        return TokenKind::doc_end;
    }
    const auto tokens = tokenize(word);
    if (tokens.size() != 1) {
        throw CorruptData("vocabulary entry is not a single token: " + word);
    }
    return tokens.front().kind;
}

}  // namespace

SectionSizes write_index(std::ostream& out, const WtbcIndex& idx, const WordBitmaps* bitmaps,
                         const SaveOptions& options) {
    Writer w(out);
    SectionSizes sizes;
    const auto& stats = idx.stats();
    const double epsilon = bitmaps ? bitmaps->epsilon() : options.epsilon;
    std::uint32_t flags = 0;
    if (bitmaps) {
        flags |= kHasBitmaps;
    }
    if (options.store_counters) {
        flags |= kStoreCounters;
    }

    w.write(kIndexMagic, sizeof kIndexMagic);
    w.put(kIndexVersion);
    w.put(idx.params().s);
    w.put(idx.params().c);
    w.put(static_cast<std::uint64_t>(stats.num_docs));
    w.put(static_cast<std::uint64_t>(stats.num_tokens));
    w.put_u32(stats.vocab_size, "vocabulary size");
    w.put(flags);
    w.put_f64(epsilon);
    w.put(idx.block_size());
    w.put(static_cast<std::uint64_t>(stats.original_bytes));
    sizes.header = w.written();

    for (const VocabEntry& e : idx.vocab().entries()) {
        w.put_u32(e.word.size(), "word length");
        w.write(e.word.data(), e.word.size());
        w.put_u32(e.freq, "word frequency");
        w.put_u32(e.df, "document frequency");
    }
    sizes.vocab = w.written() - sizes.header;

    const auto nodes = idx.tree().nodes();
    w.put_u32(nodes.size(), "node count");
    for (const TreeNode& node : nodes) {
        w.put_u32(node.path.size(), "path length");
        w.bytes(node.path);
        w.put(static_cast<std::uint64_t>(node.bytes.size()));
        w.bytes(node.bytes.data());
        if (options.store_counters) {
            const std::uint64_t before = w.written();
            const auto values = node.bytes.counter_values();
            w.put_u32(values.size(), "counter value count");
            for (std::uint8_t v : values) {
                const auto counters = node.bytes.counters_for(v);
                w.put(v);
                w.put_u32(counters.size(), "counter count");
                for (std::uint32_t c : counters) {
                    w.put(c);
                }
            }
            sizes.stored_counters += w.written() - before;
        }
    }
    sizes.tree = w.written() - sizes.header - sizes.vocab;

    const auto ends = idx.bounds().ends();
    w.put(static_cast<std::uint64_t>(ends.size()));
    for (Position p : ends) {
        w.put(static_cast<std::uint64_t>(p));
    }
    sizes.bounds = w.written() - sizes.header - sizes.vocab - sizes.tree;

    if (bitmaps) {
        const std::uint64_t start = w.written();
        std::uint64_t total_bits = 0;
        for (WordId id = 0; id < idx.vocab().size(); ++id) {
            const VocabEntry& e = idx.vocab()[id];
            if (!has_bitmap(e, stats.num_docs, epsilon)) {
                continue;
            }
            const BitVectorRS* bm = bitmaps->find(id);
            if (bm == nullptr || bm->size() != e.freq) {
                throw Error("bitmap set does not match the vocabulary for epsilon " + std::to_string(epsilon));
            }
            total_bits += bm->size();
        }
        if (total_bits != bitmaps->total_bits()) {
            throw Error("bitmap set holds words at or below epsilon");
        }
        w.put(total_bits);
        std::uint64_t word = 0;
        std::uint64_t fill = 0;
        for (const auto& [id, bm] : bitmaps->all()) {
            for (std::uint64_t i = 1; i <= bm.size(); ++i) {
                if (bm.get(i)) {
                    word |= std::uint64_t{1} << fill;
                }
                if (++fill == 64) {
                    w.put(word);
                    word = 0;
                    fill = 0;
                }
            }
        }
        if (fill > 0) {
            w.put(word);
        }
        sizes.bitmaps = w.written() - start;
    }
    if (!out) {
        throw Error("failed writing index");
    }
    return sizes;
}

SectionSizes save_index(const std::filesystem::path& path, const WtbcIndex& idx, const WordBitmaps* bitmaps,
                        const SaveOptions& options) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    auto sizes = write_index(out, idx, bitmaps, options);
    out.close();
    if (!out) {
        throw Error("failed writing " + path.string());
    }
    return sizes;
}

LoadedIndex read_index(std::istream& in) {
    Reader r(in);
    LoadedIndex loaded;
    char magic[sizeof kIndexMagic];
    r.read(magic, sizeof magic);
    if (std::memcmp(magic, kIndexMagic, sizeof magic) != 0) {
        throw CorruptData("not a WTBC index (bad magic)");
    }
    if (const auto version = r.get<std::uint32_t>(); version != kIndexVersion) {
        throw CorruptData("unsupported index version " + std::to_string(version));
    }
    const auto s = r.get<std::uint32_t>();
    const auto c = r.get<std::uint32_t>();
    if (s < 1 || s > 255 || s + c != 256) {
        throw CorruptData("invalid (s, c) in header");
    }
    CollectionStats stats;
    stats.num_docs = r.get<std::uint64_t>();
    stats.num_tokens = r.get<std::uint64_t>();
    stats.vocab_size = r.get<std::uint32_t>();
    loaded.flags = r.get<std::uint32_t>();
    if ((loaded.flags & ~(kHasBitmaps | kStoreCounters)) != 0) {
        throw CorruptData("unknown header flags");
    }
    loaded.epsilon = r.get_f64();
    const auto block_size = r.get<std::uint32_t>();
    if (block_size == 0) {
        throw CorruptData("block size must be positive");
    }
    stats.original_bytes = r.get<std::uint64_t>();
    loaded.sections.header = r.consumed();

    std::vector<VocabEntry> entries;
    entries.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(stats.vocab_size, 1u << 20)));
    for (std::uint64_t id = 0; id < stats.vocab_size; ++id) {
        VocabEntry e;
        const auto len = r.get<std::uint32_t>();
        const auto raw = r.bytes(len);
        e.word.assign(raw.begin(), raw.end());
        e.freq = r.get<std::uint32_t>();
        e.df = r.get<std::uint32_t>();
        e.kind = kind_of(static_cast<WordId>(id), e.word);
        entries.push_back(std::move(e));
    }
    loaded.sections.vocab = r.consumed() - loaded.sections.header;

    const auto node_count = r.get<std::uint32_t>();
    std::vector<TreeNode> nodes;
    for (std::uint32_t v = 0; v < node_count; ++v) {
        TreeNode node;
        const auto path_len = r.get<std::uint32_t>();
        if (path_len >= kMaxCodewordLength) {
            throw CorruptData("tree node path too long");
        }
        node.path = r.bytes(path_len);
        const auto len = r.get<std::uint64_t>();
        node.bytes = ByteSequenceRS(r.bytes(len), block_size);
        if (loaded.flags & kStoreCounters) {
            const std::uint64_t before = r.consumed();
            const auto nvalues = r.get<std::uint32_t>();
            std::vector<std::uint8_t> values;
            std::vector<std::vector<std::uint32_t>> counters;
            for (std::uint32_t i = 0; i < nvalues; ++i) {
                values.push_back(r.get<std::uint8_t>());
                const auto ncounters = r.get<std::uint32_t>();
                std::vector<std::uint32_t> cs;
                for (std::uint32_t j = 0; j < ncounters; ++j) {
                    cs.push_back(r.get<std::uint32_t>());
                }
                counters.push_back(std::move(cs));
            }
            node.bytes.adopt_counters(std::move(values), std::move(counters));
            loaded.sections.stored_counters += r.consumed() - before;
        }
        nodes.push_back(std::move(node));
    }
    loaded.sections.tree = r.consumed() - loaded.sections.header - loaded.sections.vocab;

    const auto nbounds = r.get<std::uint64_t>();
    std::vector<Position> ends;
    for (std::uint64_t i = 0; i < nbounds; ++i) {
        ends.push_back(r.get<std::uint64_t>());
    }
    loaded.sections.bounds =
        r.consumed() - loaded.sections.header - loaded.sections.vocab - loaded.sections.tree;

    loaded.index = WtbcIndex(ScdcParams(s), Vocabulary(std::move(entries)), stats,
                             ByteCodeTree::from_nodes(std::move(nodes), s), block_size);
    const auto rebuilt = loaded.index.bounds().ends();
    if (!std::equal(rebuilt.begin(), rebuilt.end(), ends.begin(), ends.end())) {
        throw CorruptData("stored document boundaries disagree with the tree");
    }
    for (WordId id = 0; id < loaded.index.vocab().size(); ++id) {
        const VocabEntry& e = loaded.index.vocab()[id];
        if (e.df == 0 || e.df > e.freq || e.df > stats.num_docs ||
            (id > 1 && e.freq > loaded.index.vocab()[id - 1].freq)) {
            throw CorruptData("vocabulary counts are inconsistent");
        }
    }

    if (loaded.flags & kHasBitmaps) {
        const std::uint64_t start = r.consumed();
        const auto total_bits = r.get<std::uint64_t>();
        std::vector<std::uint64_t> packed((total_bits + 63) / 64);
        for (auto& word : packed) {
            word = r.get<std::uint64_t>();
        }
        std::map<WordId, BitVectorRS> bitmaps;
        std::uint64_t offset = 0;
        for (WordId id = 0; id < loaded.index.vocab().size(); ++id) {
            const VocabEntry& e = loaded.index.vocab()[id];
            if (!has_bitmap(e, stats.num_docs, loaded.epsilon)) {
                continue;
            }
            if (offset + e.freq > total_bits) {
                throw CorruptData("bitmap section shorter than the vocabulary requires");
            }
            BitVectorBuilder b;
            for (std::uint64_t i = 0; i < e.freq; ++i, ++offset) {
                b.push_back((packed[offset / 64] >> (offset % 64)) & 1u);
            }
            BitVectorRS bm = std::move(b).build();
            if (bm.count_ones() != e.df || !bm.get(1)) {
                throw CorruptData("bitmap of '" + e.word + "' disagrees with its document frequency");
            }
            bitmaps.emplace(id, std::move(bm));
        }
        if (offset != total_bits) {
            throw CorruptData("bitmap section longer than the vocabulary requires");
        }
        loaded.bitmaps.emplace(loaded.epsilon, std::move(bitmaps));
        loaded.sections.bitmaps = r.consumed() - start;
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw CorruptData("trailing bytes after the index");
    }
    return loaded;
}

LoadedIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open index " + path.string());
    }
    return read_index(in);
}

}  // namespace wtbc
