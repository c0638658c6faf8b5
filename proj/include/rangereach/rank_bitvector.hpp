#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "rangereach/binary_io.hpp"

namespace rangereach {

/// Plain bit vector with constant-time rank. Cumulative popcounts are kept
/// per 512-bit block; rank adds at most seven word popcounts to a block rank.
class RankBitVector {
public:
    static constexpr std::size_t kWordsPerBlock = 8;

    RankBitVector() = default;
    explicit RankBitVector(const std::vector<bool>& bits);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] bool get(std::size_t i) const noexcept {
        return (words_[i >> 6] >> (i & 63)) & 1U;
    }
    /// Number of set bits in positions [0, i).
    [[nodiscard]] std::size_t rank1(std::size_t i) const noexcept {
        const std::size_t word = i >> 6;
        const std::size_t block = word / kWordsPerBlock;
        std::size_t r = block_ranks_[block];
        for (std::size_t w = block * kWordsPerBlock; w < word; ++w) r += std::popcount(words_[w]);
        const std::size_t bit = i & 63;
        if (bit != 0) r += std::popcount(words_[word] & ((std::uint64_t{1} << bit) - 1));
        return r;
    }
    [[nodiscard]] std::size_t count_ones() const noexcept { return block_ranks_.back(); }

    /// Bit words plus block rank table.
    [[nodiscard]] std::size_t memory_bytes() const noexcept {
        return words_.size() * sizeof(std::uint64_t) + block_ranks_.size() * sizeof(std::uint64_t);
    }

    void serialize(ByteWriter& out) const;
    static RankBitVector deserialize(ByteReader& in);

private:
    void build_ranks();

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_{0};
    std::vector<std::uint64_t> block_ranks_{0, 0};
};

}  // namespace rangereach
