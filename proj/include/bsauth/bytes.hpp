#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bsauth {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Big-endian append-only encoder used by every canonical format.
class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put_be(v, 2); }
    void u32(std::uint32_t v) { put_be(v, 4); }
    void u64(std::uint64_t v) { put_be(v, 8); }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
    /// u32 length prefix followed by the bytes.
    void blob(ByteView b) {
        u32(static_cast<std::uint32_t>(b.size()));
        raw(b);
    }
    void str(std::string_view s) { blob(as_bytes(s)); }

    const Bytes& bytes() const& { return out_; }
    Bytes take() && { return std::move(out_); }
    std::size_t size() const { return out_.size(); }

private:
    void put_be(std::uint64_t v, int width) {
        for (int i = width - 1; i >= 0; --i) {
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }

    Bytes out_;
};

/// Bounds-checked decoder; any overrun throws Error{kParse}.
class ByteReader {
public:
    explicit ByteReader(ByteView in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get_be(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get_be(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get_be(4)); }
    std::uint64_t u64() { return get_be(8); }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    ByteView raw(std::size_t n);
    ByteView blob() { return raw(u32()); }
    std::string str();
    template <std::size_t N>
    std::array<std::uint8_t, N> fixed() {
        std::array<std::uint8_t, N> out{};
        auto v = raw(N);
        std::copy(v.begin(), v.end(), out.begin());
        return out;
    }

    std::size_t remaining() const { return in_.size() - pos_; }
    std::size_t position() const { return pos_; }
    bool done() const { return pos_ == in_.size(); }
    /// Throws unless every input byte was consumed.
    void expect_done(const char* what) const;

private:
    std::uint64_t get_be(int width);

    ByteView in_;
    std::size_t pos_ = 0;
};

}  // namespace bsauth
