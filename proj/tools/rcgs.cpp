#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcgs/rcgs.hpp"

namespace {

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<uint8_t>& data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
    if (!f)
        throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t end = s.find(sep, start);
        if (end == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

rcgs::GenKind parse_kind(const std::string& kind) {
    if (kind == "gaussian")
        return rcgs::GenKind::gaussian;
    if (kind == "markov")
        return rcgs::GenKind::markov;
    if (kind == "dct")
        return rcgs::GenKind::dct;
    throw std::runtime_error("unknown generator kind '" + kind +
                             "' (expected gaussian, markov or dct)");
}

// "kind,key=value,..." as it appears after the gen: prefix in bench inputs
rcgs::GenSpec parse_gen_spec(const std::string& text) {
    auto parts = split(text, ',');
    rcgs::GenSpec spec;
    spec.kind = parse_kind(parts[0]);
    spec.length = 262144;
    spec.seed = 1;
    for (size_t i = 1; i < parts.size(); ++i) {
        size_t eq = parts[i].find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("bad gen spec field '" + parts[i] + "' (want key=value)");
        std::string key = parts[i].substr(0, eq);
        std::string val = parts[i].substr(eq + 1);
        if (key == "length")
            spec.length = std::stoull(val);
        else if (key == "seed")
            spec.seed = std::stoull(val);
        else if (key == "sigma_sq")
            spec.sigma_sq = std::stod(val);
        else if (key == "qs")
            spec.qs = std::stod(val);
        else if (key == "p_stay")
            spec.p_stay = std::stod(val);
        else if (key == "image")
            spec.source_image = val;
        else
            throw std::runtime_error("unknown gen spec key '" + key + "'");
    }
    return spec;
}

void run_analyze(const std::string& path, const rcgs::EncoderConfig& cfg) {
    std::vector<uint8_t> cur = read_file(path);
    if (cur.empty())
        throw std::runtime_error(path + " is empty");
    std::printf("%s: %zu bytes\n", path.c_str(), cur.size());
    size_t level = 0;
    while (cur.size() > cfg.raw_threshold && level < cfg.max_levels) {
        rcgs::FrequencyTable table = rcgs::count_frequencies(cur);
        rcgs::AlphabetStats stats = rcgs::alphabet_stats(table);
        rcgs::GroupingTable g =
            rcgs::form_super_letters(table, cfg.t_delta, cfg.t_delta_step, cfg.max_retries);
        std::string sizes;
        for (const rcgs::SuperLetter& sl : g.super_letters) {
            if (!sizes.empty())
                sizes += ',';
            sizes += std::to_string(sl.members.size());
        }
        std::printf(
            "level %2zu: length=%zu distinct=%d N_s=%zu t_delta_used=%.3f "
            "entropy=%.3f grouped=%.3f sizes=[%s]\n",
            level, cur.size(), stats.distinct_symbols, g.super_letters.size(), g.t_delta_used,
            stats.entropy_bits, rcgs::grouped_code_length(table, g), sizes.c_str());
        rcgs::SplitResult sr = rcgs::split_streams(cur, g);
        cur = rcgs::pair_nibbles(sr.super_letter_stream);
        ++level;
    }
    std::printf("terminal: %zu raw bytes\n", cur.size());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rcgs: recursive symbol-grouping codec and baselines"};
    app.require_subcommand(1);
    int rc = 0;

    // encode
    auto* enc = app.add_subcommand("encode", "compress a file into an .rcgs container");
    std::string enc_in, enc_out;
    rcgs::EncoderConfig enc_cfg;
    enc->add_option("input", enc_in, "file to compress")->required();
    enc->add_option("output", enc_out, "container to write")->required();
    enc->add_option("--t-delta", enc_cfg.t_delta, "grouping redundancy threshold, in (0,1)");
    enc->add_option("--raw-threshold", enc_cfg.raw_threshold,
                    "stream length at which recursion stops (>= 1)");
    enc->callback([&] {
        std::vector<uint8_t> data = read_file(enc_in);
        rcgs::EncodedContainer c = rcgs::encode(data, enc_cfg);
        std::vector<uint8_t> bytes = rcgs::serialize(c);
        write_file(enc_out, bytes);
        if (data.empty())
            std::printf("%s: 0 bytes -> %zu bytes\n", enc_in.c_str(), bytes.size());
        else
            std::printf("%s: %zu bytes -> %zu bytes, %.3f bits/symbol\n", enc_in.c_str(),
                        data.size(), bytes.size(), rcgs::encoded_bits_per_symbol(c));
    });

    // decode
    auto* dec = app.add_subcommand("decode", "expand an .rcgs container");
    std::string dec_in, dec_out;
    dec->add_option("input", dec_in, "container to read")->required();
    dec->add_option("output", dec_out, "file to write")->required();
    dec->callback([&] {
        std::vector<uint8_t> data = read_file(dec_in);
        std::vector<uint8_t> out = rcgs::decode(data);
        write_file(dec_out, out);
        std::printf("%s: %zu bytes -> %zu bytes\n", dec_in.c_str(), data.size(), out.size());
    });

    // entropy
    auto* ent = app.add_subcommand("entropy", "print a file's order-0 entropy in bits/symbol");
    std::string ent_in;
    ent->add_option("input", ent_in, "file to measure")->required();
    ent->callback([&] {
        std::vector<uint8_t> data = read_file(ent_in);
        std::printf("%.3f\n", rcgs::entropy_bits_per_symbol(rcgs::count_frequencies(data)));
    });

    // gen
    auto* gen = app.add_subcommand("gen", "write a synthetic test stream");
    std::string gen_kind, gen_image, gen_out;
    rcgs::GenSpec gen_spec;
    gen->add_option("--kind", gen_kind, "gaussian, markov or dct")->required();
    gen->add_option("--length", gen_spec.length, "bytes to produce")->required();
    gen->add_option("--seed", gen_spec.seed, "PRNG seed");
    gen->add_option("--sigma-sq", gen_spec.sigma_sq, "gaussian variance");
    gen->add_option("--qs", gen_spec.qs, "quantization step");
    gen->add_option("--p-stay", gen_spec.p_stay, "markov repeat probability");
    gen->add_option("--image", gen_image, "source PGM for the dct generator");
    gen->add_option("output", gen_out, "file to write")->required();
    gen->callback([&] {
        gen_spec.kind = parse_kind(gen_kind);
        gen_spec.source_image = gen_image;
        std::vector<uint8_t> data = rcgs::generate(gen_spec);
        write_file(gen_out, data);
        std::printf("wrote %zu bytes to %s\n", data.size(), gen_out.c_str());
    });

    // analyze
    auto* ana = app.add_subcommand("analyze", "print per-level grouping details for a file");
    std::string ana_in;
    rcgs::EncoderConfig ana_cfg;
    ana->add_option("input", ana_in, "file to analyze")->required();
    ana->add_option("--t-delta", ana_cfg.t_delta, "grouping redundancy threshold, in (0,1)");
    ana->callback([&] { run_analyze(ana_in, ana_cfg); });

    // bench
    auto* ben = app.add_subcommand("bench", "compare coders on files or generated streams");
    std::vector<std::string> ben_inputs;
    std::string ben_coders = "ac,hc,rcgs";
    std::string ben_format = "table";
    int ben_repeats = 3;
    ben->add_option("inputs", ben_inputs, "files, or gen:<kind>,key=value,... specs")
        ->required();
    ben->add_option("--coders", ben_coders, "comma-separated subset of ac,hc,rcgs");
    ben->add_option("--repeats", ben_repeats, "timing repeats (median taken, min 3)");
    ben->add_option("--format", ben_format, "table or tsv")
        ->check(CLI::IsMember({"table", "tsv"}));
    ben->callback([&] {
        std::vector<std::pair<std::string, std::vector<uint8_t>>> inputs;
        for (const std::string& arg : ben_inputs) {
            if (arg.rfind("gen:", 0) == 0)
                inputs.emplace_back(arg, rcgs::generate(parse_gen_spec(arg.substr(4))));
            else
                inputs.emplace_back(arg, read_file(arg));
        }
        rcgs::BenchReport rep = rcgs::run_bench(inputs, split(ben_coders, ','), ben_repeats);
        std::fputs((ben_format == "tsv" ? rcgs::format_tsv(rep) : rcgs::format_table(rep)).c_str(),
                   stdout);
        if (!rep.all_ok) {
            std::fprintf(stderr, "error: round-trip verification failed\n");
            rc = 1;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return rc;
}
