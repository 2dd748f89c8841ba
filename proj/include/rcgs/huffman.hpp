#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <queue>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rcgs/bitio.hpp"
#include "rcgs/model.hpp"

namespace rcgs {

struct HuffmanCode {
    std::array<uint8_t, 256> length{};  // 0 marks an absent symbol
    std::array<uint64_t, 256> code{};   // canonical value in the low `length` bits
};

// Optimal prefix code lengths via the classic two-smallest merge, then
// canonical code assignment (shorter codes first, ties by symbol value).
// A one-symbol alphabet degenerates to a single 1-bit code.
inline HuffmanCode huffman_build(const FrequencyTable& t) {
    if (t.total == 0)
        throw std::invalid_argument("huffman: empty frequency table");

    HuffmanCode hc;
    std::vector<uint8_t> present;
    for (unsigned s = 0; s < 256; ++s)
        if (t.counts[s] > 0)
            present.push_back(static_cast<uint8_t>(s));

    if (present.size() == 1) {
        hc.length[present[0]] = 1;
        hc.code[present[0]] = 0;
        return hc;
    }

    // Nodes: leaves first (in symbol order), internals appended as created.
    // The (weight, id) ordering makes the tree, and so the lengths,
    // deterministic for a given table.
    struct Node {
        int left = -1;
        int right = -1;
    };
    std::vector<Node> nodes(present.size());
    std::vector<int> parent(2 * present.size() - 1, -1);
    using Item = std::pair<uint64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (size_t i = 0; i < present.size(); ++i)
        heap.push({t.counts[present[i]], static_cast<int>(i)});
    while (heap.size() > 1) {
        Item a = heap.top();
        heap.pop();
        Item b = heap.top();
        heap.pop();
        int id = static_cast<int>(nodes.size());
        nodes.push_back({a.second, b.second});
        parent[a.second] = id;
        parent[b.second] = id;
        heap.push({a.first + b.first, id});
    }

    for (size_t i = 0; i < present.size(); ++i) {
        unsigned depth = 0;
        for (int n = static_cast<int>(i); parent[n] != -1; n = parent[n])
            ++depth;
        if (depth > 64)
            throw std::runtime_error("huffman: code length exceeds 64 bits");
        hc.length[present[i]] = static_cast<uint8_t>(depth);
    }

    // canonical assignment
    std::sort(present.begin(), present.end(), [&](uint8_t a, uint8_t b) {
        return hc.length[a] != hc.length[b] ? hc.length[a] < hc.length[b] : a < b;
    });
    uint64_t next = 0;
    unsigned prev_len = hc.length[present[0]];
    next <<= prev_len;  // zero stays zero; the first code is all zeros
    for (uint8_t s : present) {
        next <<= (hc.length[s] - prev_len);
        prev_len = hc.length[s];
        hc.code[s] = next++;
    }
    return hc;
}

inline double expected_code_length(const FrequencyTable& t, const HuffmanCode& hc) {
    if (t.total == 0)
        throw std::invalid_argument("huffman: empty frequency table");
    double bits = 0.0;
    double total = static_cast<double>(t.total);
    for (unsigned s = 0; s < 256; ++s)
        if (t.counts[s] > 0)
            bits += static_cast<double>(t.counts[s]) / total * hc.length[s];
    return bits;
}

// Returns (payload bytes, payload bit count).
inline std::pair<std::vector<uint8_t>, size_t> huffman_encode(std::span<const uint8_t> input,
                                                              const HuffmanCode& hc) {
    BitSink sink;
    sink.reserve_bits(input.size() * 8);
    for (uint8_t b : input) {
        unsigned len = hc.length[b];
        if (len == 0)
            throw std::invalid_argument("huffman: symbol absent from code");
        uint64_t code = hc.code[b];
        while (len > 8) {
            len -= 8;
            sink.write_bits(static_cast<uint32_t>((code >> len) & 0xFF), 8);
        }
        sink.write_bits(static_cast<uint32_t>(code & kBitMask[len]), len);
    }
    size_t bits = sink.bit_position();
    return {sink.take_bytes(), bits};
}

inline std::vector<uint8_t> huffman_decode(std::span<const uint8_t> bytes, size_t bit_count,
                                           const HuffmanCode& hc, size_t n_symbols) {
    // canonical decoding tables: count and first code per length, plus the
    // symbols flattened in (length, symbol) order
    std::array<uint32_t, 65> count_at{};
    std::array<uint64_t, 65> first_code{};
    std::array<uint32_t, 65> offset{};
    unsigned max_len = 0;
    for (unsigned s = 0; s < 256; ++s)
        if (hc.length[s] > 0) {
            ++count_at[hc.length[s]];
            max_len = std::max<unsigned>(max_len, hc.length[s]);
        }
    if (max_len == 0)
        throw std::invalid_argument("huffman: empty code");
    std::vector<uint8_t> flat;
    uint64_t code = 0;
    uint32_t off = 0;
    for (unsigned l = 1; l <= max_len; ++l) {
        code = (code + count_at[l - 1]) << 1;
        first_code[l] = code;
        offset[l] = off;
        off += count_at[l];
    }
    for (unsigned l = 1; l <= max_len; ++l)
        for (unsigned s = 0; s < 256; ++s)
            if (hc.length[s] == l)
                flat.push_back(static_cast<uint8_t>(s));

    std::vector<uint8_t> out;
    out.reserve(n_symbols);
    BitSource src(bytes, bit_count);
    for (size_t i = 0; i < n_symbols; ++i) {
        uint64_t val = 0;
        unsigned len = 0;
        for (;;) {
            val = (val << 1) | src.read_bits(1);
            ++len;
            if (count_at[len] > 0 && val - first_code[len] < count_at[len]) {
                out.push_back(flat[offset[len] + static_cast<uint32_t>(val - first_code[len])]);
                break;
            }
            if (len == max_len)
                throw std::runtime_error("huffman: invalid code stream");
        }
    }
    return out;
}

}  // namespace rcgs
