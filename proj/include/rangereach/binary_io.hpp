#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "rangereach/error.hpp"

namespace rangereach {

/// Little-endian primitive writer over an ostream.
class ByteWriter {
public:
    explicit ByteWriter(std::ostream& out) : out_(out) {}

    void u8(std::uint8_t v) { put(v, 1); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
    void bytes(const void* data, std::size_t size) {
        out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        written_ += size;
    }

    template <typename T>
    void u32_array(const std::vector<T>& values) {
        u64(values.size());
        for (T v : values) u32(static_cast<std::uint32_t>(v));
    }

    [[nodiscard]] std::size_t written() const noexcept { return written_; }
    [[nodiscard]] bool ok() const { return static_cast<bool>(out_); }

private:
    void put(std::uint64_t v, int width) {
        char buf[8];
        for (int i = 0; i < width; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffU);
        out_.write(buf, width);
        written_ += static_cast<std::size_t>(width);
    }

    std::ostream& out_;
    std::size_t written_ = 0;
};

/// Little-endian primitive reader; throws FormatError on a short read.
class ByteReader {
public:
    explicit ByteReader(std::istream& in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    double f64() { return std::bit_cast<double>(get(8)); }
    void bytes(void* data, std::size_t size) {
        in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
        if (static_cast<std::size_t>(in_.gcount()) != size) truncated();
    }

    /// Length-prefixed u32 array; `limit` bounds the length against corrupt input.
    std::vector<std::uint32_t> u32_array(std::uint64_t limit) {
        const std::uint64_t size = u64();
        if (size > limit) throw FormatError("array length " + std::to_string(size) + " exceeds bound");
        std::vector<std::uint32_t> values(size);
        for (auto& v : values) v = u32();
        return values;
    }

private:
    [[noreturn]] static void truncated() { throw FormatError("unexpected end of index file"); }

    std::uint64_t get(int width) {
        unsigned char buf[8];
        in_.read(reinterpret_cast<char*>(buf), width);
        if (in_.gcount() != width) truncated();
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        return v;
    }

    std::istream& in_;
};

}  // namespace rangereach
