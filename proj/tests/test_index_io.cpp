#include <wtbc/index_io.hpp>

#include "support.hpp"

#include <doctest.h>

#include <cstring>
#include <random>
#include <sstream>

using namespace wtbc;

namespace {

std::string serialize(const WtbcIndex& idx, const WordBitmaps* bms, SaveOptions opt = {}) {
    std::ostringstream out;
    const SectionSizes sizes = write_index(out, idx, bms, opt);
    REQUIRE(sizes.total() == out.str().size());
    return out.str();
}

LoadedIndex deserialize(const std::string& bytes) {
    std::istringstream in(bytes);
    return read_index(in);
}

struct Built {
    std::vector<std::string> docs;
    WtbcIndex idx;
    WordBitmaps bitmaps;

    explicit Built(std::uint64_t seed, double epsilon = 1e-6)
        : docs(testing::zipf_corpus(seed, 250, 900)),
          idx(WtbcIndex::build(build_collection(docs))),
          bitmaps(build_bitmaps(idx, DrbConfig{epsilon})) {}
};

}  // namespace

TEST_CASE("save, load and save again is byte-identical") {
    const Built b(1);
    for (bool with_bitmaps : {false, true}) {
        for (bool counters : {false, true}) {
            SaveOptions opt;
            opt.store_counters = counters;
            const std::string first = serialize(b.idx, with_bitmaps ? &b.bitmaps : nullptr, opt);
            const LoadedIndex loaded = deserialize(first);
            CHECK(loaded.bitmaps.has_value() == with_bitmaps);
            CHECK(((loaded.flags & kStoreCounters) != 0) == counters);
            const WordBitmaps* again = loaded.bitmaps ? &*loaded.bitmaps : nullptr;
            CHECK(serialize(loaded.index, again, opt) == first);
            CHECK(loaded.sections.total() == first.size());
            CHECK((loaded.sections.stored_counters > 0) == counters);
        }
    }
}

TEST_CASE("a reloaded index answers like the original") {
    const Built b(2, 0.0);
    const LoadedIndex loaded = deserialize(serialize(b.idx, &b.bitmaps));
    const WtbcIndex& idx = loaded.index;
    REQUIRE(loaded.bitmaps.has_value());
    CHECK(loaded.epsilon == 0.0);
    CHECK(idx.params().s == b.idx.params().s);
    CHECK(idx.num_docs() == b.idx.num_docs());
    CHECK(idx.stats().original_bytes == b.idx.stats().original_bytes);
    CHECK(idx.decode_range(1, idx.num_tokens()) == b.idx.decode_range(1, b.idx.num_tokens()));
    CHECK(loaded.bitmaps->all().size() == b.bitmaps.all().size());
    for (const auto& [w, bm] : b.bitmaps.all()) {
        REQUIRE(loaded.bitmaps->find(w) != nullptr);
        REQUIRE(loaded.bitmaps->find(w)->to_string() == bm.to_string());
    }

    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const std::string text = testing::vocab_word(rng() % 40) + " " + testing::vocab_word(rng() % 200);
        for (QueryMode mode : {QueryMode::conjunctive, QueryMode::disjunctive}) {
            const Query q = parse_query(text, mode);
            CHECK(topk_dr(idx, q, 10) == topk_dr(b.idx, q, 10));
            const auto drb = mode == QueryMode::conjunctive ? topk_drb_and(idx, *loaded.bitmaps, q, 10)
                                                            : topk_drb_or(idx, *loaded.bitmaps, q, 10);
            CHECK(drb == topk_dr(b.idx, q, 10));
        }
    }
}

TEST_CASE("files round-trip through disk") {
    const Built b(4);
    const auto path = std::filesystem::temp_directory_path() / "wtbc_io_test.idx";
    const SectionSizes sizes = save_index(path, b.idx, &b.bitmaps);
    CHECK(std::filesystem::file_size(path) == sizes.total());
    const LoadedIndex loaded = load_index(path);
    CHECK(loaded.index.decode_range(1, 50) == b.idx.decode_range(1, 50));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_index(path), Error);
}

TEST_CASE("malformed input is rejected") {
    const Built b(5);
    const std::string good = serialize(b.idx, &b.bitmaps);

    std::string bad_magic = good;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(deserialize(bad_magic), CorruptData);

    std::string bad_version = good;
    bad_version[5] = 2;
    CHECK_THROWS_AS(deserialize(bad_version), CorruptData);

    // flags sit after magic, version, s, c, N, n and V
    std::string bad_flags = good;
    bad_flags[5 + 4 + 4 + 4 + 8 + 8 + 4] |= 0x40;
    CHECK_THROWS_AS(deserialize(bad_flags), CorruptData);

    CHECK_THROWS_AS(deserialize(good + '\0'), CorruptData);
    CHECK_THROWS_AS(deserialize(""), CorruptData);
    for (std::size_t cut : {std::size_t{3}, std::size_t{40}, good.size() / 2, good.size() - 1}) {
        CHECK_THROWS_AS(deserialize(good.substr(0, cut)), CorruptData);
    }

    std::mt19937_64 rng(9);
    for (int t = 0; t < 200; ++t) {
        std::string mutated = good;
        mutated[rng() % mutated.size()] ^= static_cast<char>(1 + rng() % 255);
        // Flipped bytes either fail validation or produce some other well-formed index.
        try {
            (void)deserialize(mutated);
        } catch (const Error&) {
        }
    }
}
