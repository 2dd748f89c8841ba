#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcgs/baselines.hpp"
#include "rcgs/codec.hpp"
#include "rcgs/model.hpp"

namespace rcgs {

struct CoderResult {
    bool ok = false;
    double bits_per_symbol = 0.0;
    double enc_ms = 0.0;
    double dec_ms = 0.0;
    double enc_mib_s = 0.0;
    double dec_mib_s = 0.0;
};

struct BenchRow {
    std::string name;
    size_t bytes = 0;
    double entropy = 0.0;
    std::vector<CoderResult> results;  // parallel to BenchReport::coders
};

struct BenchReport {
    std::vector<std::string> coders;
    std::vector<BenchRow> rows;
    std::optional<BenchRow> average;  // present when there are >= 2 inputs
    bool all_ok = true;
};

namespace detail {

inline double median_ms(std::vector<double>& samples) {
    std::sort(samples.begin(), samples.end());
    size_t n = samples.size();
    return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

template <class F>
double time_median_ms(F&& fn, int repeats) {
    std::vector<double> ms;
    ms.reserve(static_cast<size_t>(repeats));
    for (int i = 0; i < repeats; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return median_ms(ms);
}

}  // namespace detail

// Round-trip is verified before anything is timed; a coder that corrupts an
// input gets ok=false and no numbers.
inline BenchReport run_bench(
    const std::vector<std::pair<std::string, std::vector<uint8_t>>>& inputs,
    const std::vector<std::string>& coders, int repeats) {
    for (const auto& c : coders)
        if (c != "ac" && c != "hc" && c != "rcgs")
            throw std::invalid_argument("bench: unknown coder " + c);
    if (repeats < 3)
        repeats = 3;  // timings are medians of at least three runs

    BenchReport report;
    report.coders = coders;
    for (const auto& [name, data] : inputs) {
        if (data.empty())
            throw std::invalid_argument("bench: input " + name + " is empty");
        BenchRow row;
        row.name = name;
        row.bytes = data.size();
        row.entropy = entropy_bits_per_symbol(count_frequencies(data));
        for (const auto& coder : coders) {
            std::function<std::vector<uint8_t>(std::span<const uint8_t>)> enc, dec;
            if (coder == "ac") {
                enc = [](std::span<const uint8_t> d) { return ac_compress(d); };
                dec = [](std::span<const uint8_t> d) { return ac_decompress(d); };
            } else if (coder == "hc") {
                enc = [](std::span<const uint8_t> d) { return hc_compress(d); };
                dec = [](std::span<const uint8_t> d) { return hc_decompress(d); };
            } else {
                enc = [](std::span<const uint8_t> d) { return serialize(encode(d)); };
                dec = [](std::span<const uint8_t> d) { return decode(d); };
            }

            CoderResult res;
            std::vector<uint8_t> packed = enc(data);
            std::vector<uint8_t> restored = dec(packed);
            res.ok = restored == data;
            if (res.ok) {
                res.bits_per_symbol = 8.0 * static_cast<double>(packed.size()) /
                                      static_cast<double>(data.size());
                res.enc_ms = detail::time_median_ms([&] { enc(data); }, repeats);
                res.dec_ms = detail::time_median_ms([&] { dec(packed); }, repeats);
                double mib = static_cast<double>(data.size()) / (1024.0 * 1024.0);
                res.enc_mib_s = res.enc_ms > 0.0 ? mib / (res.enc_ms / 1000.0) : 0.0;
                res.dec_mib_s = res.dec_ms > 0.0 ? mib / (res.dec_ms / 1000.0) : 0.0;
            } else {
                report.all_ok = false;
            }
            row.results.push_back(res);
        }
        report.rows.push_back(std::move(row));
    }

    if (report.rows.size() >= 2) {
        BenchRow avg;
        avg.name = "Average";
        double bytes = 0.0;
        for (const auto& r : report.rows) {
            bytes += static_cast<double>(r.bytes);
            avg.entropy += r.entropy;
        }
        avg.bytes = static_cast<size_t>(bytes / static_cast<double>(report.rows.size()));
        avg.entropy /= static_cast<double>(report.rows.size());
        for (size_t ci = 0; ci < coders.size(); ++ci) {
            CoderResult res;
            res.ok = true;
            int n = 0;
            for (const auto& r : report.rows) {
                const CoderResult& x = r.results[ci];
                res.ok = res.ok && x.ok;
                if (!x.ok)
                    continue;
                res.bits_per_symbol += x.bits_per_symbol;
                res.enc_ms += x.enc_ms;
                res.dec_ms += x.dec_ms;
                res.enc_mib_s += x.enc_mib_s;
                res.dec_mib_s += x.dec_mib_s;
                ++n;
            }
            if (n > 0) {
                res.bits_per_symbol /= n;
                res.enc_ms /= n;
                res.dec_ms /= n;
                res.enc_mib_s /= n;
                res.dec_mib_s /= n;
            }
            avg.results.push_back(res);
        }
        report.average = std::move(avg);
    }
    return report;
}

namespace detail {

inline std::vector<std::string> row_cells(const BenchReport& rep, const BenchRow& row) {
    char buf[64];
    std::vector<std::string> cells;
    cells.push_back(row.name);
    cells.push_back(std::to_string(row.bytes));
    std::snprintf(buf, sizeof buf, "%.3f", row.entropy);
    cells.push_back(buf);
    for (size_t ci = 0; ci < rep.coders.size(); ++ci) {
        const CoderResult& r = row.results[ci];
        if (!r.ok) {
            for (int i = 0; i < 5; ++i)
                cells.push_back("FAILED");
            continue;
        }
        std::snprintf(buf, sizeof buf, "%.3f", r.bits_per_symbol);
        cells.push_back(buf);
        std::snprintf(buf, sizeof buf, "%.2f", r.enc_ms);
        cells.push_back(buf);
        std::snprintf(buf, sizeof buf, "%.2f", r.dec_ms);
        cells.push_back(buf);
        std::snprintf(buf, sizeof buf, "%.1f", r.enc_mib_s);
        cells.push_back(buf);
        std::snprintf(buf, sizeof buf, "%.1f", r.dec_mib_s);
        cells.push_back(buf);
    }
    return cells;
}

inline std::vector<std::string> header_cells(const BenchReport& rep) {
    std::vector<std::string> h = {"name", "bytes", "entropy"};
    for (const auto& c : rep.coders) {
        h.push_back(c + "_bits");
        h.push_back(c + "_enc_ms");
        h.push_back(c + "_dec_ms");
        h.push_back(c + "_enc_mib_s");
        h.push_back(c + "_dec_mib_s");
    }
    return h;
}

}  // namespace detail

inline std::string format_tsv(const BenchReport& rep) {
    std::string out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out += '\t';
            out += cells[i];
        }
        out += '\n';
    };
    emit(detail::header_cells(rep));
    for (const auto& row : rep.rows)
        emit(detail::row_cells(rep, row));
    if (rep.average)
        emit(detail::row_cells(rep, *rep.average));
    return out;
}

inline std::string format_table(const BenchReport& rep) {
    std::vector<std::vector<std::string>> grid;
    grid.push_back(detail::header_cells(rep));
    for (const auto& row : rep.rows)
        grid.push_back(detail::row_cells(rep, row));
    if (rep.average)
        grid.push_back(detail::row_cells(rep, *rep.average));

    std::vector<size_t> width(grid[0].size(), 0);
    for (const auto& row : grid)
        for (size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());

    std::string out;
    for (const auto& row : grid) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += "  ";
            // left-align the name column, right-align numbers
            if (i == 0) {
                out += row[i];
                out.append(width[i] - row[i].size(), ' ');
            } else {
                out.append(width[i] - row[i].size(), ' ');
                out += row[i];
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace rcgs
