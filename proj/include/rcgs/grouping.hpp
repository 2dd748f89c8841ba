#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcgs/model.hpp"

namespace rcgs {

// Relative redundancy of coding a group of M symbols as one super-letter plus
// a fixed-width log2(M)-bit suffix, against the group's own entropy share.
// Zero means the fixed-width suffix is free (members equiprobable, or M == 1).
inline double group_redundancy(std::span<const double> member_probs) {
    size_t m = member_probs.size();
    if (m == 0 || m > 256 || (m & (m - 1)) != 0)
        throw std::invalid_argument("grouping: group size must be a power of two in 1..256");
    double ps = 0.0;
    double hg = 0.0;
    for (double p : member_probs) {
        if (!(p > 0.0))
            throw std::invalid_argument("grouping: member probabilities must be positive");
        ps += p;
        hg -= p * std::log2(p);
    }
    if (hg == 0.0)
        return 0.0;
    double bits = static_cast<double>(std::countr_zero(m));
    double l = ps * (bits - std::log2(ps));
    return (l - hg) / hg;
}

struct SuperLetter {
    uint8_t index = 0;
    uint8_t suffix_bits = 0;
    std::vector<uint8_t> members;  // ascending probability; suffix = position here
    double aggregate_prob = 0.0;
};

struct PerSymbolCode {
    uint8_t sl_index = 0;
    uint8_t suffix = 0;
    uint8_t suffix_bits = 0;
    bool mapped = false;
};

struct GroupingTable {
    std::vector<SuperLetter> super_letters;  // at most 16
    std::array<PerSymbolCode, 256> code{};
    double t_delta_used = 0.0;
};

// Greedy partition of the alphabet into power-of-two groups. Symbols are
// sorted ascending by probability (ties by symbol value) and the scan tries
// the largest group size first, accepting the first one whose redundancy
// stays under the threshold. If more than 16 groups come out, the threshold
// is raised by t_delta_step and the whole partition is redone from scratch.
inline GroupingTable form_super_letters(const FrequencyTable& table,
                                        double t_delta = 0.01,
                                        double t_delta_step = 0.005,
                                        int max_retries = 64) {
    if (table.total == 0)
        throw std::invalid_argument("grouping: empty frequency table");
    if (!(t_delta > 0.0 && t_delta < 1.0))
        throw std::invalid_argument("grouping: t_delta must lie in (0, 1)");
    if (!(t_delta_step > 0.0))
        throw std::invalid_argument("grouping: t_delta_step must be positive");
    if (max_retries < 0)
        throw std::invalid_argument("grouping: max_retries must be non-negative");

    struct Entry {
        uint64_t count;
        uint8_t symbol;
    };
    std::vector<Entry> order;
    order.reserve(64);
    for (unsigned s = 0; s < 256; ++s)
        if (table.counts[s] > 0)
            order.push_back({table.counts[s], static_cast<uint8_t>(s)});
    std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
        return a.count != b.count ? a.count < b.count : a.symbol < b.symbol;
    });

    std::vector<double> probs(order.size());
    double total = static_cast<double>(table.total);
    for (size_t i = 0; i < order.size(); ++i)
        probs[i] = static_cast<double>(order[i].count) / total;

    static constexpr size_t kGroupSizes[] = {256, 128, 64, 32, 16, 8, 4, 2, 1};

    double threshold = t_delta;
    std::vector<size_t> starts;
    for (int attempt = 0;; ++attempt) {
        starts.clear();
        size_t pos = 0;
        while (pos < order.size()) {
            for (size_t m : kGroupSizes) {
                if (m > order.size() - pos)
                    continue;
                // m == 1 always passes (redundancy 0), so the scan cannot stall
                if (group_redundancy(std::span(probs).subspan(pos, m)) <= threshold) {
                    starts.push_back(pos);
                    pos += m;
                    break;
                }
            }
        }
        if (starts.size() <= 16)
            break;
        if (attempt == max_retries)
            throw std::runtime_error(
                "grouping: " + std::to_string(starts.size()) +
                " super-letters still exceed 16 at threshold " + std::to_string(threshold) +
                " after " + std::to_string(max_retries) + " retries");
        threshold += t_delta_step;
    }

    GroupingTable g;
    g.t_delta_used = threshold;
    g.super_letters.reserve(starts.size());
    for (size_t gi = 0; gi < starts.size(); ++gi) {
        size_t begin = starts[gi];
        size_t end = gi + 1 < starts.size() ? starts[gi + 1] : order.size();
        SuperLetter sl;
        sl.index = static_cast<uint8_t>(gi);
        sl.suffix_bits = static_cast<uint8_t>(std::countr_zero(end - begin));
        sl.members.reserve(end - begin);
        for (size_t i = begin; i < end; ++i) {
            uint8_t sym = order[i].symbol;
            sl.members.push_back(sym);
            sl.aggregate_prob += probs[i];
            g.code[sym] = {sl.index, static_cast<uint8_t>(i - begin), sl.suffix_bits, true};
        }
        g.super_letters.push_back(std::move(sl));
    }
    return g;
}

// Ideal code length of the grouped representation: entropy of the super-letter
// distribution plus the fixed suffix widths, in bits per source symbol.
inline double grouped_code_length(const FrequencyTable& table, const GroupingTable& g) {
    if (table.total == 0)
        throw std::invalid_argument("grouping: empty frequency table");
    double bits = 0.0;
    for (const SuperLetter& sl : g.super_letters) {
        double ps = sl.aggregate_prob;
        if (ps > 0.0)
            bits += ps * (static_cast<double>(sl.suffix_bits) - std::log2(ps));
    }
    return bits;
}

}  // namespace rcgs
