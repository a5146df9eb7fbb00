#pragma once

#include <wtbc/types.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wtbc {

/// Byte sequence with rank/select for every byte value, backed by absolute
/// 32-bit counters sampled every `block_size` positions. Counters are kept
/// only for byte values that occur. Positions are 1-based.
class ByteSequenceRS {
public:
    static constexpr std::uint32_t kDefaultBlockSize = 1u << 14;

    ByteSequenceRS() = default;
    explicit ByteSequenceRS(std::vector<std::uint8_t> data, std::uint32_t block_size = kDefaultBlockSize);

    [[nodiscard]] std::uint64_t size() const noexcept { return data_.size(); }
    [[nodiscard]] std::uint32_t block_size() const noexcept { return block_size_; }
    [[nodiscard]] std::span<const std::uint8_t> data() const noexcept { return data_; }

    /// Byte at 1-based position i.
    [[nodiscard]] std::uint8_t at(std::uint64_t i) const;
    /// Unchecked access, 1-based.
    [[nodiscard]] std::uint8_t operator[](std::uint64_t i) const noexcept { return data_[i - 1]; }

    /// Occurrences of b in positions [1, i]. Throws OutOfRange if i > size().
    [[nodiscard]] std::uint64_t rank(std::uint8_t b, std::uint64_t i) const;
    /// Position of the j-th occurrence of b (j >= 1). Throws NotFound.
    [[nodiscard]] std::uint64_t select(std::uint8_t b, std::uint64_t j) const;
    /// Total occurrences of b.
    [[nodiscard]] std::uint64_t count(std::uint8_t b) const noexcept;

    /// Bytes used by the sampled counters.
    [[nodiscard]] std::uint64_t counter_bytes() const noexcept;
    /// Number of byte values with counters.
    [[nodiscard]] std::size_t distinct_values() const noexcept { return values_.size(); }

    /// Counter tables in value order, for serialization.
    [[nodiscard]] std::span<const std::uint8_t> counter_values() const noexcept { return values_; }
    [[nodiscard]] std::span<const std::uint32_t> counters_for(std::uint8_t b) const noexcept;
    /// Replaces the rebuilt counters with stored ones. Throws CorruptData if they disagree in shape.
    void adopt_counters(std::vector<std::uint8_t> values, std::vector<std::vector<std::uint32_t>> counters);

private:
    void build_counters();

    std::vector<std::uint8_t> data_;
    std::uint32_t block_size_ = kDefaultBlockSize;
    // slot_[b] indexes counters_ or is kNoSlot.
    static constexpr std::uint16_t kNoSlot = 0xFFFF;
    std::array<std::uint16_t, 256> slot_{};
    std::vector<std::uint8_t> values_;
    // counters_[slot][t] = occurrences in data_[0, t * block_size_), plus a final total.
    std::vector<std::vector<std::uint32_t>> counters_;
};

/// Plain bitvector with rank/select/next-one. Cumulative 1-counts every 512 bits.
/// Positions are 1-based.
class BitVectorRS {
public:
    static constexpr std::uint64_t kBlockBits = 512;

    BitVectorRS() = default;
    /// Takes ownership of packed words; bit i (1-based) is bit (i-1)%64 of word (i-1)/64.
    BitVectorRS(std::vector<std::uint64_t> words, std::uint64_t num_bits);

    [[nodiscard]] static BitVectorRS from_string(std::string_view bits);
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] std::uint64_t size() const noexcept { return num_bits_; }
    [[nodiscard]] std::uint64_t count_ones() const noexcept { return ones_; }
    [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

    [[nodiscard]] bool get(std::uint64_t i) const;
    /// Ones in [1, i]; i in [0, size()].
    [[nodiscard]] std::uint64_t rank1(std::uint64_t i) const;
    /// Position of the j-th one; throws NotFound past the population.
    [[nodiscard]] std::uint64_t select1(std::uint64_t j) const;
    /// Smallest p > i with bit p set, or size() + 1.
    [[nodiscard]] std::uint64_t next1(std::uint64_t i) const;

    [[nodiscard]] std::uint64_t counter_bytes() const noexcept { return blocks_.size() * sizeof(std::uint64_t); }

private:
    void build_blocks();

    std::vector<std::uint64_t> words_;
    std::uint64_t num_bits_ = 0;
    std::uint64_t ones_ = 0;
    std::vector<std::uint64_t> blocks_;  // ones before each 512-bit block
};

/// Incremental builder for BitVectorRS.
class BitVectorBuilder {
public:
    void push_back(bool bit) {
        if (size_ % 64 == 0) {
            words_.push_back(0);
        }
        if (bit) {
            words_.back() |= std::uint64_t{1} << (size_ % 64);
        }
        ++size_;
    }
    [[nodiscard]] std::uint64_t size() const noexcept { return size_; }
    [[nodiscard]] BitVectorRS build() && { return BitVectorRS(std::move(words_), size_); }

private:
    std::vector<std::uint64_t> words_;
    std::uint64_t size_ = 0;
};

/// Root positions of every doc_end token, giving O(1) select and O(log N) rank
/// on the sentinel.
class DocBoundaries {
public:
    DocBoundaries() = default;
    /// `ends` must be strictly increasing and non-empty.
    explicit DocBoundaries(std::vector<Position> ends);

    [[nodiscard]] std::uint64_t num_docs() const noexcept { return ends_.size(); }
    [[nodiscard]] std::span<const Position> ends() const noexcept { return ends_; }

    /// Boundaries at positions <= p.
    [[nodiscard]] std::uint64_t doc_rank(Position p) const noexcept;
    /// ends[d] for d in [1, N]; 0 for d = 0. Throws OutOfRange past N.
    [[nodiscard]] Position doc_select(std::uint64_t d) const;

private:
    std::vector<Position> ends_;
};

}  // namespace wtbc
