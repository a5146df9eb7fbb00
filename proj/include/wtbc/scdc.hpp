#pragma once

#include <wtbc/types.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace wtbc {

/// Stopper / continuer split of the byte alphabet for (s,c)-Dense Codes.
/// Bytes [0, s) end a codeword, bytes [s, 256) continue it.
struct ScdcParams {
    std::uint32_t s = 128;
    std::uint32_t c = 128;

    ScdcParams() = default;
    explicit ScdcParams(std::uint32_t stoppers);

    [[nodiscard]] bool is_stopper(std::uint8_t b) const noexcept { return b < s; }

    friend bool operator==(const ScdcParams&, const ScdcParams&) = default;
};

inline constexpr std::size_t kMaxCodewordLength = 5;

/// Codeword bytes: continuers followed by one stopper.
class Codeword {
public:
    Codeword() = default;

    [[nodiscard]] std::size_t size() const noexcept { return len_; }
    [[nodiscard]] std::uint8_t operator[](std::size_t i) const noexcept { return bytes_[i]; }
    [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept { return {bytes_.data(), len_}; }
    [[nodiscard]] std::uint8_t last() const noexcept { return bytes_[len_ - 1]; }

    void push_back(std::uint8_t b) { bytes_[len_++] = b; }

    friend bool operator==(const Codeword& a, const Codeword& b) {
        return std::equal(a.bytes().begin(), a.bytes().end(), b.bytes().begin(), b.bytes().end());
    }

private:
    std::array<std::uint8_t, kMaxCodewordLength> bytes_{};
    std::size_t len_ = 0;
};

/// Number of distinct ranks representable with codewords of at most kMaxCodewordLength bytes.
[[nodiscard]] std::uint64_t codeword_capacity(const ScdcParams& p);

/// Length in bytes of the codeword for `rank`. Throws CapacityError past 5 bytes.
[[nodiscard]] std::size_t codeword_len(std::uint64_t rank, const ScdcParams& p);

[[nodiscard]] Codeword encode_rank(std::uint64_t rank, const ScdcParams& p);

/// Decodes one codeword from the front of `stream` and advances it past the stopper.
/// Throws CorruptData if the stream ends before a stopper.
[[nodiscard]] std::uint64_t decode_bytes(std::span<const std::uint8_t>& stream, const ScdcParams& p);

/// Total encoded size Σ freq[r]·codeword_len(r) for the split `p`, or UINT64_MAX when
/// the vocabulary does not fit.
[[nodiscard]] std::uint64_t encoded_size(std::span<const std::uint64_t> freqs, const ScdcParams& p);

/// Exhaustive scan over s in [1, 255] for the smallest encoded size; ties go to smaller s.
/// `freqs` is indexed by rank.
[[nodiscard]] ScdcParams optimize_sc(std::span<const std::uint64_t> freqs);

/// Appends the codewords of `ranks` to one byte stream.
[[nodiscard]] std::vector<std::uint8_t> encode_stream(std::span<const WordId> ranks, const ScdcParams& p);

}  // namespace wtbc
