#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rcgs/codec.hpp"

using namespace rcgs;

namespace {

std::vector<uint8_t> bytes_of(const std::string& s) {
    return std::vector<uint8_t>(s.begin(), s.end());
}

GroupingTable uniform_grouping() {
    FrequencyTable table{};
    for (int s = 0; s < 256; ++s)
        table.counts[s] = 1;
    table.total = 256;
    return form_super_letters(table);
}

// Minimal one-level container that decodes to "AB": a single super letter
// with members {A, B} selected by one suffix bit each.
EncodedContainer ab_container() {
    EncodedContainer c;
    c.original_length = 2;
    Level lv;
    lv.descriptors.push_back({1, {65, 66}});
    lv.stream_length = 2;
    lv.suffix_bit_count = 2;
    lv.suffix_bytes = {0x40};  // bits 0,1
    c.levels.push_back(std::move(lv));
    c.terminal_raw = {0x00};  // two nibbles, both super letter 0
    return c;
}

}  // namespace

TEST(NibblePairing, KnownPairs) {
    EXPECT_EQ(pair_nibbles(std::vector<uint8_t>{3, 5}), (std::vector<uint8_t>{0x35}));
    EXPECT_EQ(pair_nibbles(std::vector<uint8_t>{7}), (std::vector<uint8_t>{0x70}));
    EXPECT_EQ(pair_nibbles(std::vector<uint8_t>{}), (std::vector<uint8_t>{}));
    EXPECT_EQ(pair_nibbles(std::vector<uint8_t>{0xF, 0xF, 0x1}),
              (std::vector<uint8_t>{0xFF, 0x10}));
}

TEST(NibblePairing, RejectsWideValues) {
    EXPECT_THROW(pair_nibbles(std::vector<uint8_t>{16}), std::invalid_argument);
    EXPECT_THROW(pair_nibbles(std::vector<uint8_t>{0, 255}), std::invalid_argument);
}

TEST(NibblePairing, UnpairsWithExplicitLength) {
    EXPECT_EQ(unpair_nibbles(std::vector<uint8_t>{0x35}, 2), (std::vector<uint8_t>{3, 5}));
    EXPECT_EQ(unpair_nibbles(std::vector<uint8_t>{0x70}, 1), (std::vector<uint8_t>{7}));
    EXPECT_EQ(unpair_nibbles(std::vector<uint8_t>{}, 0), (std::vector<uint8_t>{}));
}

TEST(NibblePairing, RejectsInconsistentLength) {
    EXPECT_THROW(unpair_nibbles(std::vector<uint8_t>{0x00}, 3), std::invalid_argument);
    EXPECT_THROW(unpair_nibbles(std::vector<uint8_t>{0x00, 0x00}, 2), std::invalid_argument);
    EXPECT_THROW(unpair_nibbles(std::vector<uint8_t>{}, 1), std::invalid_argument);
}

TEST(NibblePairing, RoundTripFuzz) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        size_t n = rng() % 257;
        std::vector<uint8_t> nibbles(n);
        for (auto& v : nibbles)
            v = static_cast<uint8_t>(rng() % 16);
        auto paired = pair_nibbles(nibbles);
        ASSERT_EQ(paired.size(), (n + 1) / 2);
        ASSERT_EQ(unpair_nibbles(paired, n), nibbles);
    }
}

TEST(SplitStreams, UniformGroupingPassesBytesThroughAsSuffixes) {
    auto g = uniform_grouping();
    ASSERT_EQ(g.super_letters.size(), 1u);
    auto input = bytes_of("AB");
    auto sr = split_streams(input, g);
    EXPECT_EQ(sr.super_letter_stream, (std::vector<uint8_t>{0, 0}));
    EXPECT_EQ(sr.suffixes.bit_position(), 16u);
    EXPECT_EQ(sr.suffixes.take_bytes(), (std::vector<uint8_t>{0x41, 0x42}));
}

TEST(SplitStreams, SingletonGroupsEmitNoSuffixBits) {
    FrequencyTable table{};
    table.counts['a'] = 10;
    table.counts['b'] = 90;
    table.total = 100;
    auto g = form_super_letters(table);
    auto input = bytes_of("abba");
    auto sr = split_streams(input, g);
    EXPECT_EQ(sr.super_letter_stream, (std::vector<uint8_t>{0, 1, 1, 0}));
    EXPECT_EQ(sr.suffixes.bit_position(), 0u);
}

TEST(SplitStreams, RejectsUnmappedSymbol) {
    FrequencyTable table{};
    table.counts['a'] = 1;
    table.total = 1;
    auto g = form_super_letters(table);
    auto input = bytes_of("ax");
    EXPECT_THROW(split_streams(input, g), std::invalid_argument);
}

TEST(Container, EmptyInputSerializesToFrozenBytes) {
    auto c = encode(std::vector<uint8_t>{});
    EXPECT_EQ(c.original_length, 0u);
    EXPECT_TRUE(c.levels.empty());
    EXPECT_TRUE(c.terminal_raw.empty());
    EXPECT_EQ(serialize(c),
              (std::vector<uint8_t>{0x52, 0x43, 0x47, 0x53, 0x01, 0x00, 0x00, 0x00}));
    EXPECT_TRUE(decode(serialize(c)).empty());
}

TEST(Container, ShortInputStaysRawWithFrozenLayout) {
    std::vector<uint8_t> input{3, 5};
    auto c = encode(input);
    EXPECT_TRUE(c.levels.empty());
    EXPECT_EQ(c.terminal_raw, input);
    EXPECT_EQ(serialize(c),
              (std::vector<uint8_t>{0x52, 0x43, 0x47, 0x53, 0x01, 0x02, 0x00, 0x02, 0x03, 0x05}));
    EXPECT_EQ(decode(serialize(c)), input);
}

TEST(Container, SerializedSizeMatchesSerialize) {
    std::mt19937 rng(17);
    std::vector<uint8_t> data(3000);
    for (auto& b : data)
        b = static_cast<uint8_t>(rng() % 7);
    auto c = encode(data);
    EXPECT_EQ(serialized_size(c), serialize(c).size());
    EXPECT_GT(c.levels.size(), 0u);
}

TEST(Container, ParseRecoversAllFields) {
    std::mt19937 rng(23);
    std::vector<uint8_t> data(500);
    for (auto& b : data)
        b = static_cast<uint8_t>(rng() % 19);
    EncoderConfig cfg;
    cfg.raw_threshold = 8;
    auto c = encode(data, cfg);
    auto wire = serialize(c);
    auto back = parse_container(wire);
    EXPECT_EQ(back.original_length, c.original_length);
    ASSERT_EQ(back.levels.size(), c.levels.size());
    for (size_t k = 0; k < c.levels.size(); ++k) {
        ASSERT_EQ(back.levels[k].descriptors.size(), c.levels[k].descriptors.size());
        for (size_t d = 0; d < c.levels[k].descriptors.size(); ++d) {
            EXPECT_EQ(back.levels[k].descriptors[d].suffix_bits,
                      c.levels[k].descriptors[d].suffix_bits);
            EXPECT_EQ(back.levels[k].descriptors[d].members, c.levels[k].descriptors[d].members);
        }
        EXPECT_EQ(back.levels[k].stream_length, c.levels[k].stream_length);
        EXPECT_EQ(back.levels[k].suffix_bit_count, c.levels[k].suffix_bit_count);
        EXPECT_EQ(back.levels[k].suffix_bytes, c.levels[k].suffix_bytes);
    }
    EXPECT_EQ(back.terminal_raw, c.terminal_raw);
    EXPECT_EQ(serialize(back), wire);
}

TEST(Codec, AllSingleBytesRoundTrip) {
    for (int v = 0; v < 256; ++v) {
        std::vector<uint8_t> input{static_cast<uint8_t>(v)};
        EXPECT_EQ(decode(serialize(encode(input))), input);
    }
}

TEST(Codec, HandBuiltContainerDecodes) {
    auto c = ab_container();
    EXPECT_EQ(decode(c), bytes_of("AB"));
    EXPECT_EQ(decode(serialize(c)), bytes_of("AB"));
}

TEST(Codec, ConstantInputCompressesFar) {
    std::vector<uint8_t> input(10000, 0xAA);
    auto c = encode(input);
    EXPECT_GT(c.levels.size(), 1u);
    EXPECT_EQ(c.levels[0].suffix_bit_count, 0u);
    EXPECT_LT(encoded_bits_per_symbol(c), 1.0);
    EXPECT_EQ(decode(serialize(c)), input);
}

TEST(Codec, OddLengthsSurviveNibblePadding) {
    std::mt19937 rng(31);
    for (size_t n : {65u, 127u, 129u, 255u, 1001u}) {
        std::vector<uint8_t> input(n);
        for (auto& b : input)
            b = static_cast<uint8_t>(rng() % 3);
        ASSERT_EQ(decode(serialize(encode(input))), input) << "length " << n;
    }
}

TEST(Codec, MaxLevelsBoundsRecursionDepth) {
    std::mt19937 rng(37);
    std::vector<uint8_t> input(4096);
    for (auto& b : input)
        b = static_cast<uint8_t>(rng());

    EncoderConfig cfg;
    cfg.raw_threshold = 1;
    cfg.max_levels = 2;
    auto c = encode(input, cfg);
    EXPECT_EQ(c.levels.size(), 2u);
    EXPECT_EQ(c.terminal_raw.size(), 1024u);  // halved twice by pairing
    EXPECT_EQ(decode(serialize(c)), input);

    cfg.max_levels = 0;
    auto raw = encode(input, cfg);
    EXPECT_TRUE(raw.levels.empty());
    EXPECT_EQ(raw.terminal_raw, input);
    EXPECT_EQ(decode(serialize(raw)), input);
}

TEST(Codec, RejectsZeroRawThreshold) {
    EncoderConfig cfg;
    cfg.raw_threshold = 0;
    EXPECT_THROW(encode(bytes_of("x"), cfg), std::invalid_argument);
}

TEST(Codec, EncodeIsDeterministic) {
    std::mt19937 rng(41);
    std::vector<uint8_t> input(2048);
    for (auto& b : input)
        b = static_cast<uint8_t>(rng() % 30);
    EXPECT_EQ(serialize(encode(input)), serialize(encode(input)));
}

TEST(Codec, RoundTripFuzzAcrossConfigsAndDistributions) {
    std::mt19937_64 rng(20260819);
    const size_t thresholds[] = {1, 4, 64};
    for (int trial = 0; trial < 400; ++trial) {
        size_t n = rng() % 2048;
        std::vector<uint8_t> input(n);
        switch (trial % 5) {
            case 0:  // uniform
                for (auto& b : input)
                    b = static_cast<uint8_t>(rng());
                break;
            case 1:  // constant
                std::fill(input.begin(), input.end(), static_cast<uint8_t>(rng()));
                break;
            case 2:  // binary
                for (auto& b : input)
                    b = (rng() & 1) ? 0xFF : 0x00;
                break;
            case 3:  // small alphabet
                for (auto& b : input)
                    b = static_cast<uint8_t>(rng() % 11);
                break;
            case 4:  // skewed: long runs of one value
                for (size_t i = 0; i < n;) {
                    uint8_t v = static_cast<uint8_t>(rng());
                    size_t run = 1 + rng() % 64;
                    for (size_t j = 0; j < run && i < n; ++j, ++i)
                        input[i] = v;
                }
                break;
        }
        EncoderConfig cfg;
        cfg.raw_threshold = thresholds[rng() % 3];
        cfg.t_delta = (trial % 2) ? 0.01 : 0.05;
        auto wire = serialize(encode(input, cfg));
        ASSERT_EQ(decode(wire), input) << "trial " << trial;
    }
}

TEST(ContainerErrors, BadMagic) {
    auto wire = serialize(encode(bytes_of("hello")));
    wire[0] = 'X';
    try {
        parse_container(wire);
        FAIL() << "expected parse failure";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("bad magic"), std::string::npos);
    }
}

TEST(ContainerErrors, BadVersion) {
    auto wire = serialize(encode(bytes_of("hello")));
    wire[4] = 0x02;
    EXPECT_THROW(parse_container(wire), std::runtime_error);
}

TEST(ContainerErrors, TrailingData) {
    auto wire = serialize(encode(bytes_of("hello")));
    wire.push_back(0x00);
    EXPECT_THROW(parse_container(wire), std::runtime_error);
}

TEST(ContainerErrors, EveryTruncationFailsCleanly) {
    std::mt19937 rng(43);
    std::vector<uint8_t> data(300);
    for (auto& b : data)
        b = static_cast<uint8_t>(rng() % 5);
    EncoderConfig cfg;
    cfg.raw_threshold = 4;
    auto wire = serialize(encode(data, cfg));
    ASSERT_GT(wire.size(), 16u);
    for (size_t cut = 0; cut < wire.size(); ++cut) {
        std::vector<uint8_t> prefix(wire.begin(), wire.begin() + cut);
        EXPECT_THROW(parse_container(prefix), std::exception) << "prefix length " << cut;
    }
}

TEST(ContainerErrors, OversizedRawCountDoesNotAllocate) {
    // terminal count claims far more bytes than the buffer holds
    std::vector<uint8_t> wire{0x52, 0x43, 0x47, 0x53, 0x01, 0x00, 0x00};
    write_uvarint(wire, UINT64_MAX);
    EXPECT_THROW(parse_container(wire), std::exception);
}

TEST(ContainerErrors, ValidatorCatchesStructuralLies) {
    {
        auto c = ab_container();
        c.levels[0].descriptors.clear();
        EXPECT_THROW(decode(c), std::runtime_error);  // super-letter count
    }
    {
        auto c = ab_container();
        c.levels[0].descriptors.resize(17, {0, {0}});
        EXPECT_THROW(decode(c), std::runtime_error);  // super-letter count
    }
    {
        auto c = ab_container();
        c.levels[0].descriptors[0].suffix_bits = 9;
        c.levels[0].descriptors[0].members.resize(512, 0);
        EXPECT_THROW(decode(c), std::runtime_error);  // suffix width
    }
    {
        auto c = ab_container();
        c.levels[0].descriptors[0].members.pop_back();
        EXPECT_THROW(decode(c), std::runtime_error);  // member count mismatch
    }
    {
        auto c = ab_container();
        c.levels[0].stream_length = 0;
        EXPECT_THROW(decode(c), std::runtime_error);  // zero stream length
    }
    {
        auto c = ab_container();
        c.levels[0].stream_length = 3;
        EXPECT_THROW(decode(c), std::runtime_error);  // disagrees with original_length
    }
    {
        auto c = ab_container();
        c.levels[0].suffix_bytes.clear();
        EXPECT_THROW(decode(c), std::runtime_error);  // byte count vs bit count
    }
    {
        auto c = ab_container();
        c.terminal_raw = {0x00, 0x00};
        EXPECT_THROW(decode(c), std::runtime_error);  // terminal length
    }
}

TEST(ContainerErrors, DecodeCatchesStreamLies) {
    {
        // fewer suffix bits than the symbols need
        auto c = ab_container();
        c.levels[0].suffix_bit_count = 1;
        try {
            decode(c);
            FAIL() << "expected decode failure";
        } catch (const std::runtime_error& e) {
            EXPECT_NE(std::string(e.what()).find("exhausted"), std::string::npos);
        }
    }
    {
        // more suffix bits than the symbols consume
        auto c = ab_container();
        c.levels[0].suffix_bit_count = 8;
        try {
            decode(c);
            FAIL() << "expected decode failure";
        } catch (const std::runtime_error& e) {
            EXPECT_NE(std::string(e.what()).find("length mismatch"), std::string::npos);
        }
    }
    {
        // nibble refers to a super letter the level never declared
        auto c = ab_container();
        c.terminal_raw = {0x10};
        try {
            decode(c);
            FAIL() << "expected decode failure";
        } catch (const std::runtime_error& e) {
            EXPECT_NE(std::string(e.what()).find("unmapped"), std::string::npos);
        }
    }
}

TEST(Codec, BitsPerSymbolUndefinedForEmpty) {
    auto c = encode(std::vector<uint8_t>{});
    EXPECT_THROW(encoded_bits_per_symbol(c), std::invalid_argument);
}
