#include <wtbc/rank_select.hpp>

#include <algorithm>
#include <bit>
#include <functional>

namespace wtbc {

ByteSequenceRS::ByteSequenceRS(std::vector<std::uint8_t> data, std::uint32_t block_size)
    : data_(std::move(data)), block_size_(block_size) {
    if (block_size_ == 0) {
        throw Error("block size must be positive");
    }
    build_counters();
}

void ByteSequenceRS::build_counters() {
    std::array<std::uint64_t, 256> totals{};
    for (std::uint8_t b : data_) {
        ++totals[b];
    }
    slot_.fill(kNoSlot);
    values_.clear();
    for (std::size_t v = 0; v < 256; ++v) {
        if (totals[v] > 0) {
            slot_[v] = static_cast<std::uint16_t>(values_.size());
            values_.push_back(static_cast<std::uint8_t>(v));
        }
    }
    // counters_[slot][t-1] holds the count in [0, t*B); block 0 is implicit.
    const std::uint64_t sampled = data_.size() / block_size_;
    counters_.assign(values_.size(), std::vector<std::uint32_t>(sampled));
    std::array<std::uint32_t, 256> running{};
    for (std::uint64_t t = 1; t <= sampled; ++t) {
        const auto begin = data_.begin() + static_cast<std::ptrdiff_t>((t - 1) * block_size_);
        std::for_each(begin, begin + block_size_, [&](std::uint8_t b) { ++running[b]; });
        for (std::size_t k = 0; k < values_.size(); ++k) {
            counters_[k][t - 1] = running[values_[k]];
        }
    }
}

void ByteSequenceRS::adopt_counters(std::vector<std::uint8_t> values,
                                    std::vector<std::vector<std::uint32_t>> counters) {
    if (values != values_ || counters.size() != counters_.size()) {
        throw CorruptData("stored counters do not match bytemap contents");
    }
    for (std::size_t k = 0; k < counters.size(); ++k) {
        if (counters[k] != counters_[k]) {
            throw CorruptData("stored counters disagree with bytemap contents");
        }
    }
}

std::uint8_t ByteSequenceRS::at(std::uint64_t i) const {
    if (i == 0 || i > data_.size()) {
        throw OutOfRange("position " + std::to_string(i) + " outside bytemap of length " +
                         std::to_string(data_.size()));
    }
    return data_[i - 1];
}

std::uint64_t ByteSequenceRS::rank(std::uint8_t b, std::uint64_t i) const {
    if (i > data_.size()) {
        throw OutOfRange("rank position " + std::to_string(i) + " past bytemap length " +
                         std::to_string(data_.size()));
    }
    const std::uint16_t slot = slot_[b];
    if (slot == kNoSlot) {
        return 0;
    }
    const std::uint64_t t = i / block_size_;
    const std::uint64_t base = t == 0 ? 0 : counters_[slot][t - 1];
    const auto first = data_.data() + t * block_size_;
    return base + static_cast<std::uint64_t>(std::count(first, data_.data() + i, b));
}

std::uint64_t ByteSequenceRS::count(std::uint8_t b) const noexcept {
    if (slot_[b] == kNoSlot) {
        return 0;
    }
    return rank(b, data_.size());
}

std::uint64_t ByteSequenceRS::select(std::uint8_t b, std::uint64_t j) const {
    const std::uint16_t slot = slot_[b];
    if (j == 0 || slot == kNoSlot) {
        throw NotFound("select: occurrence " + std::to_string(j) + " of byte " + std::to_string(b) +
                       " does not exist");
    }
    const auto& cnt = counters_[slot];
    // Number of sampled blocks whose prefix count is < j; that many full blocks can be skipped.
    const auto t = static_cast<std::uint64_t>(
        std::lower_bound(cnt.begin(), cnt.end(), j) - cnt.begin());
    std::uint64_t seen = t == 0 ? 0 : cnt[t - 1];
    for (std::uint64_t pos = t * block_size_; pos < data_.size(); ++pos) {
        if (data_[pos] == b && ++seen == j) {
            return pos + 1;
        }
    }
    throw NotFound("select: occurrence " + std::to_string(j) + " of byte " + std::to_string(b) +
                   " does not exist");
}

std::uint64_t ByteSequenceRS::counter_bytes() const noexcept {
    std::uint64_t total = 0;
    for (const auto& c : counters_) {
        total += c.size() * sizeof(std::uint32_t);
    }
    return total;
}

std::span<const std::uint32_t> ByteSequenceRS::counters_for(std::uint8_t b) const noexcept {
    if (slot_[b] == kNoSlot) {
        return {};
    }
    return counters_[slot_[b]];
}

BitVectorRS::BitVectorRS(std::vector<std::uint64_t> words, std::uint64_t num_bits)
    : words_(std::move(words)), num_bits_(num_bits) {
    if (words_.size() != (num_bits_ + 63) / 64) {
        throw Error("bitvector word count does not match bit length");
    }
    if (num_bits_ % 64 != 0 && !words_.empty()) {
        words_.back() &= (std::uint64_t{1} << (num_bits_ % 64)) - 1;
    }
    build_blocks();
}

void BitVectorRS::build_blocks() {
    constexpr std::uint64_t words_per_block = kBlockBits / 64;
    blocks_.clear();
    blocks_.reserve(words_.size() / words_per_block + 1);
    std::uint64_t ones = 0;
    for (std::uint64_t w = 0; w < words_.size(); ++w) {
        if (w % words_per_block == 0) {
            blocks_.push_back(ones);
        }
        ones += static_cast<std::uint64_t>(std::popcount(words_[w]));
    }
    ones_ = ones;
}

BitVectorRS BitVectorRS::from_string(std::string_view bits) {
    BitVectorBuilder b;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw Error("bit string may only contain '0' and '1'");
        }
        b.push_back(ch == '1');
    }
    return std::move(b).build();
}

std::string BitVectorRS::to_string() const {
    std::string out(num_bits_, '0');
    for (std::uint64_t i = 1; i <= num_bits_; ++i) {
        if (get(i)) {
            out[i - 1] = '1';
        }
    }
    return out;
}

bool BitVectorRS::get(std::uint64_t i) const {
    if (i == 0 || i > num_bits_) {
        throw OutOfRange("bit position " + std::to_string(i) + " outside bitvector of length " +
                         std::to_string(num_bits_));
    }
    return (words_[(i - 1) / 64] >> ((i - 1) % 64)) & 1u;
}

std::uint64_t BitVectorRS::rank1(std::uint64_t i) const {
    if (i > num_bits_) {
        throw OutOfRange("rank1 position " + std::to_string(i) + " past bitvector length " +
                         std::to_string(num_bits_));
    }
    const std::uint64_t block = i / kBlockBits;
    if (block == blocks_.size()) {
        return ones_;
    }
    std::uint64_t r = blocks_[block];
    const std::uint64_t full_words = i / 64;
    for (std::uint64_t w = block * (kBlockBits / 64); w < full_words; ++w) {
        r += static_cast<std::uint64_t>(std::popcount(words_[w]));
    }
    if (const std::uint64_t rem = i % 64; rem != 0) {
        r += static_cast<std::uint64_t>(std::popcount(words_[full_words] & ((std::uint64_t{1} << rem) - 1)));
    }
    return r;
}

std::uint64_t BitVectorRS::select1(std::uint64_t j) const {
    if (j == 0 || j > ones_) {
        throw NotFound("select1: one number " + std::to_string(j) + " of " + std::to_string(ones_) +
                       " does not exist");
    }
    const auto it = std::lower_bound(blocks_.begin(), blocks_.end(), j);
    const auto block = static_cast<std::uint64_t>(it - blocks_.begin()) - 1;
    std::uint64_t remaining = j - blocks_[block];
    for (std::uint64_t w = block * (kBlockBits / 64);; ++w) {
        const auto pop = static_cast<std::uint64_t>(std::popcount(words_[w]));
        if (remaining <= pop) {
            std::uint64_t word = words_[w];
            for (std::uint64_t k = 1; k < remaining; ++k) {
                word &= word - 1;
            }
            return w * 64 + static_cast<std::uint64_t>(std::countr_zero(word)) + 1;
        }
        remaining -= pop;
    }
}

std::uint64_t BitVectorRS::next1(std::uint64_t i) const {
    if (i >= num_bits_) {
        return num_bits_ + 1;
    }
    // 0-based index i is the first candidate (1-based position i + 1).
    const std::uint64_t w = i / 64;
    const std::uint64_t masked = words_[w] & (~std::uint64_t{0} << (i % 64));
    if (masked != 0) {
        return w * 64 + static_cast<std::uint64_t>(std::countr_zero(masked)) + 1;
    }
    const std::uint64_t before = rank1(std::min(num_bits_, (w + 1) * 64));
    return before < ones_ ? select1(before + 1) : num_bits_ + 1;
}

DocBoundaries::DocBoundaries(std::vector<Position> ends) : ends_(std::move(ends)) {
    if (ends_.empty()) {
        throw Error("document boundaries must be non-empty");
    }
    if (ends_.front() == 0 || std::adjacent_find(ends_.begin(), ends_.end(), std::greater_equal<>()) != ends_.end()) {
        throw CorruptData("document boundaries must be strictly increasing positive positions");
    }
}

std::uint64_t DocBoundaries::doc_rank(Position p) const noexcept {
    return static_cast<std::uint64_t>(std::upper_bound(ends_.begin(), ends_.end(), p) - ends_.begin());
}

Position DocBoundaries::doc_select(std::uint64_t d) const {
    if (d == 0) {
        return 0;
    }
    if (d > ends_.size()) {
        throw OutOfRange("document " + std::to_string(d) + " past collection of " + std::to_string(ends_.size()));
    }
    return ends_[d - 1];
}

}  // namespace wtbc
