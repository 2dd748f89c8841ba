#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rcgs/bitio.hpp"
#include "rcgs/huffman.hpp"
#include "rcgs/model.hpp"
#include "rcgs/range_coder.hpp"

namespace rcgs {

// 256 uvarint counts; a zero count is followed by a uvarint run of further
// zeros so sparse alphabets stay compact.
inline void serialize_counts(std::vector<uint8_t>& out, const std::array<uint64_t, 256>& counts) {
    for (size_t i = 0; i < 256;) {
        write_uvarint(out, counts[i]);
        if (counts[i] == 0) {
            size_t j = i + 1;
            while (j < 256 && counts[j] == 0)
                ++j;
            write_uvarint(out, j - i - 1);
            i = j;
        } else {
            ++i;
        }
    }
}

inline std::array<uint64_t, 256> parse_counts(ByteCursor& in) {
    std::array<uint64_t, 256> counts{};
    size_t i = 0;
    while (i < 256) {
        uint64_t v = read_uvarint(in);
        counts[i++] = v;
        if (v == 0) {
            uint64_t run = read_uvarint(in);
            if (run > 256 - i)
                throw std::runtime_error("baselines: zero run exceeds table");
            i += static_cast<size_t>(run);
        }
    }
    return counts;
}

// Self-contained blobs (model || length || payload) used by the benchmark
// round-trips; the model bytes count toward the reported size.

inline std::vector<uint8_t> ac_compress(std::span<const uint8_t> input) {
    std::vector<uint8_t> out;
    if (input.empty()) {
        std::array<uint64_t, 256> zeros{};
        serialize_counts(out, zeros);
        write_uvarint(out, 0);
        return out;
    }
    CumulativeModel m(count_frequencies(input));
    std::array<uint32_t, 256> sc = m.scaled_counts();
    std::array<uint64_t, 256> wide{};
    for (unsigned s = 0; s < 256; ++s)
        wide[s] = sc[s];
    serialize_counts(out, wide);
    write_uvarint(out, input.size());
    std::vector<uint8_t> payload = ac_encode(input, m);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

inline std::vector<uint8_t> ac_decompress(std::span<const uint8_t> blob) {
    ByteCursor in{blob};
    std::array<uint64_t, 256> wide = parse_counts(in);
    uint64_t n = read_uvarint(in);
    if (n == 0)
        return {};
    std::array<uint32_t, 256> scaled{};
    for (unsigned s = 0; s < 256; ++s) {
        if (wide[s] > CumulativeModel::kMaxTotal)
            throw std::runtime_error("baselines: corrupt model count");
        scaled[s] = static_cast<uint32_t>(wide[s]);
    }
    CumulativeModel m(scaled);
    return ac_decode(in.buf.subspan(in.pos), m, static_cast<size_t>(n));
}

inline std::vector<uint8_t> hc_compress(std::span<const uint8_t> input) {
    std::vector<uint8_t> out;
    FrequencyTable t = count_frequencies(input);
    serialize_counts(out, t.counts);
    write_uvarint(out, input.size());
    if (input.empty())
        return out;
    HuffmanCode hc = huffman_build(t);
    auto [payload, bits] = huffman_encode(input, hc);
    write_uvarint(out, bits);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

inline std::vector<uint8_t> hc_decompress(std::span<const uint8_t> blob) {
    ByteCursor in{blob};
    std::array<uint64_t, 256> counts = parse_counts(in);
    uint64_t n = read_uvarint(in);
    if (n == 0)
        return {};
    uint64_t bits = read_uvarint(in);
    size_t n_bytes = static_cast<size_t>(bits / 8 + (bits % 8 != 0));
    auto payload = in.read_bytes(n_bytes);
    FrequencyTable t;
    t.counts = counts;
    for (uint64_t c : counts)
        t.total += c;
    HuffmanCode hc = huffman_build(t);
    return huffman_decode(payload, static_cast<size_t>(bits), hc, static_cast<size_t>(n));
}

}  // namespace rcgs
