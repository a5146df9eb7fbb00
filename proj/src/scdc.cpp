#include <wtbc/scdc.hpp>

#include <algorithm>
#include <limits>
#include <numeric>

namespace wtbc {

ScdcParams::ScdcParams(std::uint32_t stoppers) : s(stoppers), c(256 - stoppers) {
    if (stoppers < 1 || stoppers > 255) {
        throw Error("stopper count must be in [1, 255], got " + std::to_string(stoppers));
    }
}

namespace {

// First rank of each length block: starts[k] = Σ_{j<k} s·c^(j-1), starts[0] = 0.
std::array<std::uint64_t, kMaxCodewordLength + 1> block_starts(const ScdcParams& p) {
    std::array<std::uint64_t, kMaxCodewordLength + 1> starts{};
    std::uint64_t block = p.s;
    for (std::size_t k = 1; k <= kMaxCodewordLength; ++k) {
        starts[k] = starts[k - 1] + block;
        block *= p.c;
    }
    return starts;
}

}  // namespace

std::uint64_t codeword_capacity(const ScdcParams& p) { return block_starts(p)[kMaxCodewordLength]; }

std::size_t codeword_len(std::uint64_t rank, const ScdcParams& p) {
    const auto starts = block_starts(p);
    for (std::size_t k = 1; k <= kMaxCodewordLength; ++k) {
        if (rank < starts[k]) {
            return k;
        }
    }
    throw CapacityError("rank " + std::to_string(rank) + " exceeds the 5-byte codeword capacity for s=" +
                        std::to_string(p.s));
}

Codeword encode_rank(std::uint64_t rank, const ScdcParams& p) {
    const std::size_t len = codeword_len(rank, p);
    const std::uint64_t offset = rank - block_starts(p)[len - 1];
    std::uint64_t high = offset / p.s;
    std::array<std::uint8_t, kMaxCodewordLength> digits{};
    for (std::size_t i = len - 1; i-- > 0;) {
        digits[i] = static_cast<std::uint8_t>(p.s + high % p.c);
        high /= p.c;
    }
    Codeword cw;
    for (std::size_t i = 0; i + 1 < len; ++i) {
        cw.push_back(digits[i]);
    }
    cw.push_back(static_cast<std::uint8_t>(offset % p.s));
    return cw;
}

std::uint64_t decode_bytes(std::span<const std::uint8_t>& stream, const ScdcParams& p) {
    const auto starts = block_starts(p);
    std::uint64_t high = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const std::uint8_t b = stream[i];
        if (p.is_stopper(b)) {
            if (i >= kMaxCodewordLength) {
                throw CorruptData("codeword longer than 5 bytes");
            }
            stream = stream.subspan(i + 1);
            return starts[i] + high * p.s + b;
        }
        high = high * p.c + (b - p.s);
    }
    throw CorruptData("byte stream ended before a stopper");
}

std::uint64_t encoded_size(std::span<const std::uint64_t> freqs, const ScdcParams& p) {
    const auto starts = block_starts(p);
    if (freqs.size() > starts[kMaxCodewordLength]) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    std::uint64_t total = 0;
    for (std::size_t k = 1; k <= kMaxCodewordLength; ++k) {
        const auto lo = static_cast<std::size_t>(std::min<std::uint64_t>(starts[k - 1], freqs.size()));
        const auto hi = static_cast<std::size_t>(std::min<std::uint64_t>(starts[k], freqs.size()));
        total += k * std::accumulate(freqs.begin() + lo, freqs.begin() + hi, std::uint64_t{0});
    }
    return total;
}

ScdcParams optimize_sc(std::span<const std::uint64_t> freqs) {
    if (freqs.empty()) {
        throw Error("optimize_sc needs a non-empty frequency list");
    }
    // Cumulative sums make each candidate O(max codeword length).
    std::vector<std::uint64_t> prefix(freqs.size() + 1, 0);
    std::partial_sum(freqs.begin(), freqs.end(), prefix.begin() + 1);

    std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();
    std::uint32_t best_s = 0;
    for (std::uint32_t s = 1; s <= 255; ++s) {
        const ScdcParams p(s);
        const auto starts = block_starts(p);
        if (freqs.size() > starts[kMaxCodewordLength]) {
            continue;
        }
        std::uint64_t cost = 0;
        for (std::size_t k = 1; k <= kMaxCodewordLength; ++k) {
            const auto lo = std::min<std::uint64_t>(starts[k - 1], freqs.size());
            const auto hi = std::min<std::uint64_t>(starts[k], freqs.size());
            cost += k * (prefix[hi] - prefix[lo]);
        }
        if (cost < best_cost) {
            best_cost = cost;
            best_s = s;
        }
    }
    if (best_s == 0) {
        throw CapacityError("vocabulary of " + std::to_string(freqs.size()) +
                            " words exceeds 5-byte codeword capacity for every (s,c)");
    }
    return ScdcParams(best_s);
}

std::vector<std::uint8_t> encode_stream(std::span<const WordId> ranks, const ScdcParams& p) {
    std::vector<std::uint8_t> out;
    out.reserve(ranks.size() * 2);
    for (WordId r : ranks) {
        const Codeword cw = encode_rank(r, p);
        out.insert(out.end(), cw.bytes().begin(), cw.bytes().end());
    }
    return out;
}

}  // namespace wtbc
