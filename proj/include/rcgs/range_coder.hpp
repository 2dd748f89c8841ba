#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rcgs/model.hpp"

namespace rcgs {

// Static order-0 model with counts rescaled to a 14-bit total so the 32-bit
// carry-less range coder below never underflows (it needs total <= 2^16).
class CumulativeModel {
public:
    static constexpr uint32_t kMaxTotal = 1u << 14;

    explicit CumulativeModel(const FrequencyTable& t) {
        if (t.total == 0)
            throw std::invalid_argument("range coder: empty model");
        std::array<uint32_t, 256> scaled{};
        if (t.total <= kMaxTotal) {
            for (unsigned s = 0; s < 256; ++s)
                scaled[s] = static_cast<uint32_t>(t.counts[s]);
        } else {
            // floor-scale, but keep every present symbol at >= 1; the floor
            // can overshoot the budget by at most the alphabet size, so trim
            // the largest entries down until the total fits again
            uint32_t sum = 0;
            for (unsigned s = 0; s < 256; ++s) {
                if (t.counts[s] == 0)
                    continue;
                auto v = static_cast<uint32_t>(
                    (static_cast<unsigned __int128>(t.counts[s]) * kMaxTotal) / t.total);
                if (v == 0)
                    v = 1;
                scaled[s] = v;
                sum += v;
            }
            while (sum > kMaxTotal) {
                unsigned best = 0;
                for (unsigned s = 1; s < 256; ++s)
                    if (scaled[s] > scaled[best])
                        best = s;
                uint32_t cut = std::min(sum - kMaxTotal, scaled[best] - 1);
                scaled[best] -= cut;
                sum -= cut;
            }
        }
        init(scaled);
    }

    explicit CumulativeModel(const std::array<uint32_t, 256>& scaled) { init(scaled); }

    uint32_t total() const { return cum_[256]; }
    uint32_t freq(uint8_t s) const { return cum_[s + 1u] - cum_[s]; }
    uint32_t cum(uint8_t s) const { return cum_[s]; }

    std::array<uint32_t, 256> scaled_counts() const {
        std::array<uint32_t, 256> out;
        for (unsigned s = 0; s < 256; ++s)
            out[s] = freq(static_cast<uint8_t>(s));
        return out;
    }

    // symbol whose cumulative slice contains f (f < total)
    uint8_t symbol_for(uint32_t f) const {
        auto it = std::upper_bound(cum_.begin() + 1, cum_.end(), f);
        return static_cast<uint8_t>((it - cum_.begin()) - 1);
    }

private:
    void init(const std::array<uint32_t, 256>& scaled) {
        cum_[0] = 0;
        for (unsigned s = 0; s < 256; ++s)
            cum_[s + 1] = cum_[s] + scaled[s];
        if (cum_[256] == 0 || cum_[256] > kMaxTotal)
            throw std::invalid_argument("range coder: model total out of range");
    }

    std::array<uint32_t, 257> cum_{};
};

inline constexpr uint32_t kRangeTopMask = 0xFF000000u;
inline constexpr uint32_t kRangeBottom = 1u << 16;

class RangeEncoder {
public:
    explicit RangeEncoder(std::vector<uint8_t>& out) : out_(out) {}

    void encode(uint32_t cum_freq, uint32_t freq, uint32_t total) {
        range_ /= total;
        low_ += cum_freq * range_;
        range_ *= freq;
        for (;;) {
            if (((low_ ^ (low_ + range_)) & kRangeTopMask) != 0) {
                if (range_ >= kRangeBottom)
                    break;
                range_ = (0u - low_) & (kRangeBottom - 1);
            }
            out_.push_back(static_cast<uint8_t>(low_ >> 24));
            low_ <<= 8;
            range_ <<= 8;
        }
    }

    void flush() {
        for (int i = 0; i < 4; ++i) {
            out_.push_back(static_cast<uint8_t>(low_ >> 24));
            low_ <<= 8;
        }
    }

private:
    std::vector<uint8_t>& out_;
    uint32_t low_ = 0;
    uint32_t range_ = 0xFFFFFFFFu;
};

class RangeDecoder {
public:
    explicit RangeDecoder(std::span<const uint8_t> in) : in_(in) {
        for (int i = 0; i < 4; ++i)
            code_ = (code_ << 8) | next_byte();
    }

    uint32_t decode_freq(uint32_t total) {
        range_ /= total;
        uint32_t f = (code_ - low_) / range_;
        return f >= total ? total - 1 : f;
    }

    void decode_update(uint32_t cum_freq, uint32_t freq) {
        low_ += cum_freq * range_;
        range_ *= freq;
        for (;;) {
            if (((low_ ^ (low_ + range_)) & kRangeTopMask) != 0) {
                if (range_ >= kRangeBottom)
                    break;
                range_ = (0u - low_) & (kRangeBottom - 1);
            }
            code_ = (code_ << 8) | next_byte();
            low_ <<= 8;
            range_ <<= 8;
        }
    }

private:
    // the encoder's 4-byte flush covers the tail; reading past it yields zeros
    uint8_t next_byte() { return pos_ < in_.size() ? in_[pos_++] : 0; }

    std::span<const uint8_t> in_;
    size_t pos_ = 0;
    uint32_t code_ = 0;
    uint32_t low_ = 0;
    uint32_t range_ = 0xFFFFFFFFu;
};

inline std::vector<uint8_t> ac_encode(std::span<const uint8_t> input, const CumulativeModel& m) {
    std::vector<uint8_t> out;
    out.reserve(input.size() / 2 + 16);
    RangeEncoder enc(out);
    uint32_t total = m.total();
    for (uint8_t b : input) {
        uint32_t f = m.freq(b);
        if (f == 0)
            throw std::invalid_argument("range coder: symbol not in model");
        enc.encode(m.cum(b), f, total);
    }
    enc.flush();
    return out;
}

inline std::vector<uint8_t> ac_decode(std::span<const uint8_t> code, const CumulativeModel& m,
                                      size_t n_symbols) {
    std::vector<uint8_t> out(n_symbols);
    RangeDecoder dec(code);
    uint32_t total = m.total();
    for (size_t i = 0; i < n_symbols; ++i) {
        uint8_t s = m.symbol_for(dec.decode_freq(total));
        dec.decode_update(m.cum(s), m.freq(s));
        out[i] = s;
    }
    return out;
}

}  // namespace rcgs
