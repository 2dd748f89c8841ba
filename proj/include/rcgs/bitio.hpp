#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rcgs {

inline constexpr uint32_t kBitMask[9] = {
    0x00, 0x01, 0x03, 0x07, 0x0F, 0x1F, 0x3F, 0x7F, 0xFF};

// MSB-first bit accumulator. Bits go into the high end of each output byte
// first; a partial final byte is zero-padded on align_to_byte().
class BitSink {
public:
    void reserve_bits(size_t n_bits) { buf_.reserve((n_bits + 7) / 8); }

    // n_bits must be 0..8 and value must fit in n_bits.
    void write_bits(uint32_t value, unsigned n_bits) {
        if (n_bits > 8)
            throw std::invalid_argument("bitio: write width must be 0..8");
        if ((value & ~kBitMask[n_bits]) != 0)
            throw std::invalid_argument("bitio: value does not fit in n_bits");
        acc_ = (acc_ << n_bits) | value;
        pending_ += n_bits;
        bit_count_ += n_bits;
        while (pending_ >= 8) {
            pending_ -= 8;
            buf_.push_back(static_cast<uint8_t>(acc_ >> pending_));
        }
    }

    void align_to_byte() {
        if (pending_ > 0) {
            unsigned pad = 8 - pending_;
            buf_.push_back(static_cast<uint8_t>(acc_ << pad));
            bit_count_ += pad;
            pending_ = 0;
        }
    }

    // Total bits accepted so far, including any pad added by align_to_byte.
    size_t bit_position() const { return bit_count_; }

    const std::vector<uint8_t>& bytes() const {
        if (pending_ != 0)
            throw std::logic_error("bitio: bytes() on unaligned sink");
        return buf_;
    }

    std::vector<uint8_t> take_bytes() {
        align_to_byte();
        bit_count_ = 0;
        return std::move(buf_);
    }

private:
    std::vector<uint8_t> buf_;
    uint32_t acc_ = 0;
    unsigned pending_ = 0;
    size_t bit_count_ = 0;
};

// Reader over an externally owned buffer. bit_count bounds the logical
// stream; reading past it throws rather than zero-filling.
class BitSource {
public:
    BitSource(std::span<const uint8_t> bytes, size_t bit_count)
        : buf_(bytes), bits_left_(bit_count) {
        if (bit_count > bytes.size() * 8)
            throw std::invalid_argument("bitio: bit count exceeds buffer");
    }

    explicit BitSource(std::span<const uint8_t> bytes)
        : BitSource(bytes, bytes.size() * 8) {}

    uint32_t read_bits(unsigned n_bits) {
        if (n_bits > 8)
            throw std::invalid_argument("bitio: read width must be 0..8");
        if (n_bits > bits_left_)
            throw std::out_of_range("bitio: bit source exhausted");
        while (avail_ < n_bits) {
            acc_ = (acc_ << 8) | buf_[byte_pos_++];
            avail_ += 8;
        }
        bits_left_ -= n_bits;
        avail_ -= n_bits;
        return (acc_ >> avail_) & kBitMask[n_bits];
    }

    size_t bits_remaining() const { return bits_left_; }

private:
    std::span<const uint8_t> buf_;
    size_t byte_pos_ = 0;
    uint32_t acc_ = 0;
    unsigned avail_ = 0;
    size_t bits_left_;
};

// LEB128-style varint: 7 bits per byte, low group first, high bit marks
// continuation.
inline void write_uvarint(std::vector<uint8_t>& out, uint64_t value) {
    while (value >= 0x80) {
        out.push_back(static_cast<uint8_t>(value) | 0x80);
        value >>= 7;
    }
    out.push_back(static_cast<uint8_t>(value));
}

struct ByteCursor {
    std::span<const uint8_t> buf;
    size_t pos = 0;

    uint8_t read_u8() {
        if (pos >= buf.size())
            throw std::out_of_range("bitio: truncated input");
        return buf[pos++];
    }

    std::span<const uint8_t> read_bytes(size_t n) {
        if (n > buf.size() - pos)
            throw std::out_of_range("bitio: truncated input");
        auto s = buf.subspan(pos, n);
        pos += n;
        return s;
    }

    size_t remaining() const { return buf.size() - pos; }
    bool at_end() const { return pos == buf.size(); }
};

inline uint64_t read_uvarint(ByteCursor& in) {
    uint64_t value = 0;
    unsigned shift = 0;
    for (int i = 0; i < 10; ++i) {
        uint8_t b = in.read_u8();
        if (shift == 63 && (b & 0x7E) != 0)
            throw std::runtime_error("bitio: uvarint overflows 64 bits");
        value |= static_cast<uint64_t>(b & 0x7F) << shift;
        if ((b & 0x80) == 0)
            return value;
        shift += 7;
    }
    throw std::runtime_error("bitio: uvarint longer than 10 bytes");
}

}  // namespace rcgs
