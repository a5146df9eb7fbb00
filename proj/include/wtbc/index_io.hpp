#pragma once

#include <wtbc/retrieval.hpp>
#include <wtbc/wavelet_tree.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace wtbc {

/// On-disk index layout (all integers little-endian):
///
///   header   "WTBC1", u32 version, u32 s, u32 c, u64 N, u64 n, u32 V, u32 flags,
///            f64 epsilon, u32 block size, u64 original text bytes
///   vocab    V x (u32 byte length, UTF-8 bytes, u32 freq, u32 df), rank order
///   tree     u32 node count, then per node in breadth-first path order:
///            u32 path length, path bytes, u64 bytemap length, bytemap bytes
///            [if flags & kStoreCounters: u32 value count, then per value
///             u8 value, u32 counter count, u32 counters...]
///   bounds   u64 count, u64 doc_end positions
///   bitmaps  [if flags & kHasBitmaps] u64 total bits, packed u64 words: the bitmaps of
///            every word with idf > epsilon, concatenated in word-id order
inline constexpr char kIndexMagic[5] = {'W', 'T', 'B', 'C', '1'};
inline constexpr std::uint32_t kIndexVersion = 1;
inline constexpr std::uint32_t kHasBitmaps = 1u << 0;
inline constexpr std::uint32_t kStoreCounters = 1u << 1;

struct SectionSizes {
    std::uint64_t header = 0;
    std::uint64_t vocab = 0;
    std::uint64_t tree = 0;
    /// Part of `tree` taken by stored counters (0 when rebuilt on load).
    std::uint64_t stored_counters = 0;
    std::uint64_t bounds = 0;
    std::uint64_t bitmaps = 0;

    [[nodiscard]] std::uint64_t total() const noexcept { return header + vocab + tree + bounds + bitmaps; }
};

struct SaveOptions {
    bool store_counters = false;
    /// Recorded in the header; used to tell which words own bitmaps.
    double epsilon = 1e-6;
};

struct LoadedIndex {
    WtbcIndex index;
    std::optional<WordBitmaps> bitmaps;
    std::uint32_t flags = 0;
    double epsilon = 0.0;
    SectionSizes sections;
};

/// `bitmaps` may be null; when present its epsilon overrides options.epsilon.
SectionSizes write_index(std::ostream& out, const WtbcIndex& idx, const WordBitmaps* bitmaps,
                         const SaveOptions& options = {});
SectionSizes save_index(const std::filesystem::path& path, const WtbcIndex& idx, const WordBitmaps* bitmaps,
                        const SaveOptions& options = {});

/// Throws CorruptData on malformed input or unknown versions / flags.
LoadedIndex read_index(std::istream& in);
LoadedIndex load_index(const std::filesystem::path& path);

}  // namespace wtbc
