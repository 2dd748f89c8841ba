#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rcgs/bitio.hpp"
#include "rcgs/grouping.hpp"
#include "rcgs/model.hpp"

namespace rcgs {

inline constexpr uint8_t kMagic[4] = {'R', 'C', 'G', 'S'};
inline constexpr uint8_t kContainerVersion = 0x01;

struct EncoderConfig {
    double t_delta = 0.01;
    double t_delta_step = 0.005;
    int max_retries = 64;
    size_t raw_threshold = 64;  // streams at or below this length stay raw
    size_t max_levels = 40;
};

struct LevelDescriptor {
    uint8_t suffix_bits = 0;
    std::vector<uint8_t> members;  // exactly 2^suffix_bits entries
};

struct Level {
    std::vector<LevelDescriptor> descriptors;
    uint64_t stream_length = 0;     // symbols at this level, pre-pairing
    uint64_t suffix_bit_count = 0;  // data bits, excluding byte padding
    std::vector<uint8_t> suffix_bytes;
};

struct EncodedContainer {
    uint64_t original_length = 0;
    std::vector<Level> levels;
    std::vector<uint8_t> terminal_raw;
};

// --- nibble plumbing ---------------------------------------------------

struct SplitResult {
    std::vector<uint8_t> super_letter_stream;  // one nibble value per symbol
    BitSink suffixes;
};

inline SplitResult split_streams(std::span<const uint8_t> input, const GroupingTable& g) {
    SplitResult r;
    r.super_letter_stream.reserve(input.size());
    r.suffixes.reserve_bits(input.size() * 8);
    for (uint8_t b : input) {
        const PerSymbolCode& c = g.code[b];
        if (!c.mapped)
            throw std::invalid_argument("codec: symbol absent from grouping table");
        r.super_letter_stream.push_back(c.sl_index);
        r.suffixes.write_bits(c.suffix, c.suffix_bits);
    }
    return r;
}

// Sr = (S1 << 4) | S2; an odd tail is padded with a zero nibble.
inline std::vector<uint8_t> pair_nibbles(std::span<const uint8_t> nibbles) {
    std::vector<uint8_t> out((nibbles.size() + 1) / 2);
    size_t i = 0;
    size_t j = 0;
    while (i + 1 < nibbles.size()) {
        if (((nibbles[i] | nibbles[i + 1]) & 0xF0) != 0)
            throw std::invalid_argument("codec: nibble value out of range");
        out[j++] = static_cast<uint8_t>((nibbles[i] << 4) | nibbles[i + 1]);
        i += 2;
    }
    if (i < nibbles.size()) {
        if ((nibbles[i] & 0xF0) != 0)
            throw std::invalid_argument("codec: nibble value out of range");
        out[j] = static_cast<uint8_t>(nibbles[i] << 4);
    }
    return out;
}

inline std::vector<uint8_t> unpair_nibbles(std::span<const uint8_t> bytes, size_t out_length) {
    if (out_length > 2 * bytes.size() || out_length + 1 < 2 * bytes.size())
        throw std::invalid_argument("codec: out_length inconsistent with byte count");
    std::vector<uint8_t> out(out_length);
    size_t j = 0;
    for (size_t i = 0; i < bytes.size() && j < out_length; ++i) {
        out[j++] = bytes[i] >> 4;
        if (j < out_length)
            out[j++] = bytes[i] & 0x0F;
    }
    return out;
}

// --- container ----------------------------------------------------------

inline void validate_container(const EncodedContainer& c) {
    uint64_t expect_len = c.original_length;
    for (const Level& lv : c.levels) {
        if (lv.descriptors.empty() || lv.descriptors.size() > 16)
            throw std::runtime_error("codec: invalid super-letter count");
        for (const LevelDescriptor& d : lv.descriptors) {
            if (d.suffix_bits > 8)
                throw std::runtime_error("codec: invalid suffix width");
            if (d.members.size() != (size_t{1} << d.suffix_bits))
                throw std::runtime_error("codec: descriptor member count mismatch");
        }
        if (lv.stream_length == 0)
            throw std::runtime_error("codec: invalid stream length");
        if (lv.stream_length != expect_len)
            throw std::runtime_error("codec: level stream length inconsistent");
        if (lv.suffix_bytes.size() != (lv.suffix_bit_count + 7) / 8)
            throw std::runtime_error("codec: suffix byte count inconsistent with bit count");
        expect_len = (lv.stream_length + 1) / 2;  // pairing halves, rounding up
    }
    if (c.terminal_raw.size() != expect_len)
        throw std::runtime_error("codec: terminal stream length inconsistent");
}

inline size_t uvarint_size(uint64_t v) {
    size_t n = 1;
    while (v >= 0x80) {
        v >>= 7;
        ++n;
    }
    return n;
}

inline size_t serialized_size(const EncodedContainer& c) {
    size_t n = 4 + 1 + uvarint_size(c.original_length) + uvarint_size(c.levels.size());
    for (const Level& lv : c.levels) {
        n += 1;
        for (const LevelDescriptor& d : lv.descriptors)
            n += 1 + d.members.size();
        n += uvarint_size(lv.stream_length) + uvarint_size(lv.suffix_bit_count) +
             lv.suffix_bytes.size();
    }
    n += uvarint_size(c.terminal_raw.size()) + c.terminal_raw.size();
    return n;
}

inline std::vector<uint8_t> serialize(const EncodedContainer& c) {
    validate_container(c);
    std::vector<uint8_t> out;
    out.reserve(serialized_size(c));
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kContainerVersion);
    write_uvarint(out, c.original_length);
    write_uvarint(out, c.levels.size());
    for (const Level& lv : c.levels) {
        out.push_back(static_cast<uint8_t>(lv.descriptors.size()));
        for (const LevelDescriptor& d : lv.descriptors) {
            out.push_back(d.suffix_bits);
            out.insert(out.end(), d.members.begin(), d.members.end());
        }
        write_uvarint(out, lv.stream_length);
        write_uvarint(out, lv.suffix_bit_count);
        out.insert(out.end(), lv.suffix_bytes.begin(), lv.suffix_bytes.end());
    }
    write_uvarint(out, c.terminal_raw.size());
    out.insert(out.end(), c.terminal_raw.begin(), c.terminal_raw.end());
    return out;
}

inline EncodedContainer parse_container(std::span<const uint8_t> bytes) {
    ByteCursor in{bytes};
    auto magic = in.read_bytes(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic))
        throw std::runtime_error("codec: not an RCGS container (bad magic)");
    if (in.read_u8() != kContainerVersion)
        throw std::runtime_error("codec: unsupported container version");

    EncodedContainer c;
    c.original_length = read_uvarint(in);
    uint64_t n_levels = read_uvarint(in);
    for (uint64_t k = 0; k < n_levels; ++k) {
        Level lv;
        uint8_t n_sl = in.read_u8();
        if (n_sl == 0 || n_sl > 16)
            throw std::runtime_error("codec: invalid super-letter count");
        lv.descriptors.resize(n_sl);
        for (LevelDescriptor& d : lv.descriptors) {
            d.suffix_bits = in.read_u8();
            if (d.suffix_bits > 8)
                throw std::runtime_error("codec: invalid suffix width");
            auto m = in.read_bytes(size_t{1} << d.suffix_bits);
            d.members.assign(m.begin(), m.end());
        }
        lv.stream_length = read_uvarint(in);
        lv.suffix_bit_count = read_uvarint(in);
        size_t n_suffix_bytes =
            static_cast<size_t>(lv.suffix_bit_count / 8 + (lv.suffix_bit_count % 8 != 0));
        auto sb = in.read_bytes(n_suffix_bytes);
        lv.suffix_bytes.assign(sb.begin(), sb.end());
        c.levels.push_back(std::move(lv));
    }
    uint64_t n_raw = read_uvarint(in);
    if (n_raw > in.remaining())
        throw std::out_of_range("bitio: truncated input");
    auto raw = in.read_bytes(static_cast<size_t>(n_raw));
    c.terminal_raw.assign(raw.begin(), raw.end());
    if (!in.at_end())
        throw std::runtime_error("codec: trailing data after container");
    validate_container(c);
    return c;
}

// --- encode / decode ----------------------------------------------------

inline EncodedContainer encode(std::span<const uint8_t> input, const EncoderConfig& cfg = {}) {
    if (cfg.raw_threshold == 0)
        throw std::invalid_argument("codec: raw_threshold must be at least 1");
    EncodedContainer c;
    c.original_length = input.size();
    std::vector<uint8_t> cur(input.begin(), input.end());
    FrequencyTable table;
    if (cur.size() > cfg.raw_threshold)
        table = count_frequencies(cur);
    while (cur.size() > cfg.raw_threshold && c.levels.size() < cfg.max_levels) {
        GroupingTable g = form_super_letters(table, cfg.t_delta, cfg.t_delta_step, cfg.max_retries);

        Level lv;
        lv.descriptors.reserve(g.super_letters.size());
        for (const SuperLetter& sl : g.super_letters)
            lv.descriptors.push_back({sl.suffix_bits, sl.members});
        lv.stream_length = cur.size();

        uint64_t total_bits = 0;
        for (unsigned s = 0; s < 256; ++s)
            total_bits += table.counts[s] * g.code[s].suffix_bits;
        lv.suffix_bit_count = total_bits;
        lv.suffix_bytes.resize(static_cast<size_t>((total_bits + 7) / 8));

        // One fused pass: suffix bits stream out MSB-first, super-letter
        // nibbles pair straight into the next level's bytes, and that
        // stream's histogram is tallied on the way.
        size_t n = cur.size();
        std::vector<uint8_t> next((n + 1) / 2);
        FrequencyTable next_table{};
        uint64_t acc = 0;
        unsigned pending = 0;
        size_t sb = 0;
        for (size_t i = 0; i + 1 < n; i += 2) {
            const PerSymbolCode& a = g.code[cur[i]];
            const PerSymbolCode& b = g.code[cur[i + 1]];
            acc = (acc << a.suffix_bits) | a.suffix;
            acc = (acc << b.suffix_bits) | b.suffix;
            pending += a.suffix_bits + b.suffix_bits;
            while (pending >= 8) {
                pending -= 8;
                lv.suffix_bytes[sb++] = static_cast<uint8_t>(acc >> pending);
            }
            uint8_t paired = static_cast<uint8_t>((a.sl_index << 4) | b.sl_index);
            next[i / 2] = paired;
            ++next_table.counts[paired];
        }
        if (n & 1) {
            const PerSymbolCode& a = g.code[cur[n - 1]];
            acc = (acc << a.suffix_bits) | a.suffix;
            pending += a.suffix_bits;
            while (pending >= 8) {
                pending -= 8;
                lv.suffix_bytes[sb++] = static_cast<uint8_t>(acc >> pending);
            }
            uint8_t paired = static_cast<uint8_t>(a.sl_index << 4);
            next[n / 2] = paired;
            ++next_table.counts[paired];
        }
        if (pending > 0)
            lv.suffix_bytes[sb] = static_cast<uint8_t>(acc << (8 - pending));
        next_table.total = next.size();

        c.levels.push_back(std::move(lv));
        cur = std::move(next);
        table = next_table;
    }
    c.terminal_raw = std::move(cur);
    return c;
}

inline std::vector<uint8_t> decode(const EncodedContainer& c) {
    validate_container(c);
    std::vector<uint8_t> cur = c.terminal_raw;
    for (size_t k = c.levels.size(); k-- > 0;) {
        const Level& lv = c.levels[k];
        size_t n_sl = lv.descriptors.size();
        uint8_t bits_of[16];
        uint16_t offset_of[16];
        std::vector<uint8_t> flat;
        flat.reserve(256);
        for (size_t i = 0; i < n_sl; ++i) {
            bits_of[i] = lv.descriptors[i].suffix_bits;
            offset_of[i] = static_cast<uint16_t>(flat.size());
            flat.insert(flat.end(), lv.descriptors[i].members.begin(),
                        lv.descriptors[i].members.end());
        }
        std::vector<uint8_t> nib =
            unpair_nibbles(cur, static_cast<size_t>(lv.stream_length));
        std::vector<uint8_t> out(static_cast<size_t>(lv.stream_length));
        BitSource src(lv.suffix_bytes, static_cast<size_t>(lv.suffix_bit_count));
        try {
            for (size_t i = 0; i < out.size(); ++i) {
                uint8_t s = nib[i];
                if (s >= n_sl)
                    throw std::runtime_error("codec: unmapped super-letter index");
                out[i] = flat[offset_of[s] + src.read_bits(bits_of[s])];
            }
        } catch (const std::out_of_range&) {
            throw std::runtime_error("codec: suffix bitstream exhausted");
        }
        if (src.bits_remaining() != 0)
            throw std::runtime_error("codec: suffix bitstream length mismatch");
        cur = std::move(out);
    }
    if (cur.size() != c.original_length)
        throw std::runtime_error("codec: decoded length mismatch");
    return cur;
}

inline std::vector<uint8_t> decode(std::span<const uint8_t> container_bytes) {
    return decode(parse_container(container_bytes));
}

inline double encoded_bits_per_symbol(const EncodedContainer& c) {
    if (c.original_length == 0)
        throw std::invalid_argument("codec: bits per symbol undefined for empty stream");
    return 8.0 * static_cast<double>(serialized_size(c)) /
           static_cast<double>(c.original_length);
}

}  // namespace rcgs
