#include "rangereach/rank_bitvector.hpp"

namespace rangereach {

RankBitVector::RankBitVector(const std::vector<bool>& bits) : size_(bits.size()) {
    // one spare word so rank1(size()) never reads past the end
    words_.assign(size_ / 64 + 1, 0);
    for (std::size_t i = 0; i < size_; ++i) {
        if (bits[i]) words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    build_ranks();
}

void RankBitVector::build_ranks() {
    const std::size_t blocks = (words_.size() + kWordsPerBlock - 1) / kWordsPerBlock;
    block_ranks_.assign(blocks + 1, 0);
    std::uint64_t running = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        if (w % kWordsPerBlock == 0) block_ranks_[w / kWordsPerBlock] = running;
        running += static_cast<std::uint64_t>(std::popcount(words_[w]));
    }
    block_ranks_.back() = running;
}

void RankBitVector::serialize(ByteWriter& out) const {
    out.u64(size_);
    for (std::uint64_t w : words_) out.u64(w);
}

RankBitVector RankBitVector::deserialize(ByteReader& in) {
    RankBitVector bv;
    bv.size_ = in.u64();
    if (bv.size_ > (std::uint64_t{1} << 40)) throw FormatError("bad bit vector size");
    bv.words_.assign(bv.size_ / 64 + 1, 0);
    for (auto& w : bv.words_) w = in.u64();
    const std::size_t tail = bv.size_ & 63;
    if ((bv.words_.back() >> tail) != 0 && tail != 0) throw FormatError("bit vector padding is not zero");
    if (tail == 0 && bv.words_.back() != 0) throw FormatError("bit vector padding is not zero");
    bv.build_ranks();
    return bv;
}

}  // namespace rangereach
