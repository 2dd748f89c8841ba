#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace rcgs {

struct FrequencyTable {
    std::array<uint64_t, 256> counts{};
    uint64_t total = 0;
};

inline FrequencyTable count_frequencies(std::span<const uint8_t> data) {
    FrequencyTable t;
    for (uint8_t b : data)
        ++t.counts[b];
    t.total = data.size();
    return t;
}

// Order-0 Shannon entropy in bits per symbol.
inline double entropy_bits_per_symbol(const FrequencyTable& t) {
    if (t.total == 0)
        throw std::invalid_argument("model: entropy of empty stream is undefined");
    double h = 0.0;
    double total = static_cast<double>(t.total);
    for (uint64_t c : t.counts) {
        if (c == 0)
            continue;
        double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

struct AlphabetStats {
    int distinct_symbols = 0;
    double entropy_bits = 0.0;
};

inline AlphabetStats alphabet_stats(const FrequencyTable& t) {
    AlphabetStats s;
    for (uint64_t c : t.counts)
        if (c > 0)
            ++s.distinct_symbols;
    s.entropy_bits = entropy_bits_per_symbol(t);
    return s;
}

}  // namespace rcgs
