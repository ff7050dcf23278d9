#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pncsim/sweep.hpp"
#include "pncsim/validate.hpp"

namespace {

using pncsim::SchemeId;

SchemeId parse_scheme(const std::string& name) {
    if (name == "map-pncf") return SchemeId::MAP_PNCF;
    if (name == "mmse-pncf") return SchemeId::MMSE_PNCF;
    if (name == "linear-pnci") return SchemeId::LINEAR_PNCI;
    if (name == "mmse-pnci") return SchemeId::MMSE_PNCI;
    throw CLI::ValidationError("unknown scheme: " + name);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Flat `key = value` config file; command-line flags override its entries.
std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("malformed config line: " + t);
        }
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return kv;
}

struct SweepArgs {
    std::string preset;
    std::string config_path;
    std::string out_path;
    std::vector<std::string> scheme_names;
    std::string uplink_csv, downlink_csv;
    bool sync = false;
    std::uint64_t seed = 0;
    std::size_t symbols = 4096;
    std::size_t packets = 256;
    std::string noise_convention = "resolved";
    double phase13 = 0.0, phase23 = 0.0;
};

pncsim::ExperimentSpec build_spec(const SweepArgs& a) {
    pncsim::ExperimentSpec spec;
    if (!a.preset.empty()) {
        spec = pncsim::make_preset(a.preset);
    } else {
        spec.schemes = {SchemeId::MAP_PNCF, SchemeId::MMSE_PNCF,
                        SchemeId::LINEAR_PNCI, SchemeId::MMSE_PNCI};
        spec.uplink_snr_db = parse_list(a.uplink_csv);
        spec.downlink_snr_db = parse_list(a.downlink_csv);
    }
    if (!a.scheme_names.empty()) {
        spec.schemes.clear();
        for (const auto& n : a.scheme_names) spec.schemes.push_back(parse_scheme(n));
    }
    spec.sync = a.sync;
    spec.master_seed = a.seed;
    spec.packet_symbols = a.symbols;
    spec.packets = a.packets;
    spec.phase13 = a.phase13;
    spec.phase23 = a.phase23;
    if (a.noise_convention == "resolved") {
        spec.noise_convention = pncsim::NoiseConvention::Resolved;
    } else if (a.noise_convention == "paper_printed") {
        spec.noise_convention = pncsim::NoiseConvention::PaperPrinted;
    } else {
        throw std::runtime_error("unknown noise convention: " + a.noise_convention);
    }
    spec.validate();
    return spec;
}

void apply_config(SweepArgs& a, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "preset") a.preset = v;
        else if (k == "out") a.out_path = v;
        else if (k == "sync") a.sync = (v == "1" || v == "true");
        else if (k == "seed") a.seed = std::stoull(v);
        else if (k == "symbols") a.symbols = std::stoull(v);
        else if (k == "packets") a.packets = std::stoull(v);
        else if (k == "uplink_db") a.uplink_csv = v;
        else if (k == "downlink_db") a.downlink_csv = v;
        else if (k == "phase13") a.phase13 = std::stod(v);
        else if (k == "phase23") a.phase23 = std::stod(v);
        else if (k == "noise_convention") a.noise_convention = v;
        else if (k == "schemes") {
            a.scheme_names.clear();
            std::stringstream ss(v);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (!trim(tok).empty()) a.scheme_names.push_back(trim(tok));
            }
        } else {
            throw std::runtime_error("unknown config key: " + k);
        }
    }
}

void emit(const std::vector<pncsim::ResultRow>& rows, const std::string& out_path) {
    if (out_path.empty()) {
        pncsim::write_csv(rows, std::cout);
    } else {
        pncsim::write_csv_file(rows, out_path);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pncsim: two-way relay physical-layer network coding simulator"};
    app.require_subcommand(1);

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "run a figure-preset or custom sweep");
    sweep->add_option("--preset", sweep_args.preset, "fig2, fig3 or fig4");
    sweep->add_option("--config", sweep_args.config_path, "flat key=value config file");
    sweep->add_flag("--sync", sweep_args.sync, "force h13 = h23 real (carrier-phase sync)");
    sweep->add_option("--seed", sweep_args.seed, "master seed");
    sweep->add_option("--symbols", sweep_args.symbols, "symbols per packet");
    sweep->add_option("--packets", sweep_args.packets, "packets per point");
    sweep->add_option("--out", sweep_args.out_path, "CSV destination (default stdout)");
    sweep->add_option("--schemes", sweep_args.scheme_names, "subset of schemes");
    sweep->add_option("--uplink-db", sweep_args.uplink_csv, "comma-separated uplink dB list");
    sweep->add_option("--downlink-db", sweep_args.downlink_csv, "comma-separated downlink dB list");
    sweep->add_option("--noise-convention", sweep_args.noise_convention,
                      "resolved or paper_printed");

    SweepArgs point_args;
    std::string point_scheme;
    double point_up = 0.0, point_dn = 0.0;
    CLI::App* point = app.add_subcommand("point", "simulate a single operating point");
    point->add_option("--scheme", point_scheme, "relay scheme")->required();
    point->add_option("--uplink-db", point_up, "uplink SNR in dB")->required();
    point->add_option("--downlink-db", point_dn, "downlink SNR in dB")->required();
    point->add_option("--phase13", point_args.phase13, "carrier phase of h13 (rad)");
    point->add_option("--phase23", point_args.phase23, "carrier phase of h23 (rad)");
    point->add_option("--config", point_args.config_path, "flat key=value config file");
    point->add_flag("--sync", point_args.sync, "force h13 = h23 real");
    point->add_option("--seed", point_args.seed, "master seed");
    point->add_option("--symbols", point_args.symbols, "symbols per packet");
    point->add_option("--packets", point_args.packets, "packets per point");
    point->add_option("--out", point_args.out_path, "CSV destination (default stdout)");
    point->add_option("--noise-convention", point_args.noise_convention,
                      "resolved or paper_printed");

    std::uint64_t validate_seed = 0;
    CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
    validate->add_option("--seed", validate_seed, "suite seed");

    // Config file first, flags second: re-parse after folding in file values.
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) {
            SweepArgs merged;
            if (!sweep_args.config_path.empty()) {
                apply_config(merged, load_config(sweep_args.config_path));
            }
            // Flags given on the command line win over config entries.
            if (sweep->count("--preset")) merged.preset = sweep_args.preset;
            if (sweep->count("--sync")) merged.sync = sweep_args.sync;
            if (sweep->count("--seed")) merged.seed = sweep_args.seed;
            if (sweep->count("--symbols")) merged.symbols = sweep_args.symbols;
            if (sweep->count("--packets")) merged.packets = sweep_args.packets;
            if (sweep->count("--out")) merged.out_path = sweep_args.out_path;
            if (sweep->count("--schemes")) merged.scheme_names = sweep_args.scheme_names;
            if (sweep->count("--uplink-db")) merged.uplink_csv = sweep_args.uplink_csv;
            if (sweep->count("--downlink-db")) merged.downlink_csv = sweep_args.downlink_csv;
            if (sweep->count("--noise-convention"))
                merged.noise_convention = sweep_args.noise_convention;
            emit(pncsim::run_sweep(build_spec(merged)), merged.out_path);
            return 0;
        }
        if (point->parsed()) {
            SweepArgs merged = point_args;
            if (!merged.config_path.empty()) {
                apply_config(merged, load_config(merged.config_path));
                if (point->count("--sync")) merged.sync = point_args.sync;
                if (point->count("--seed")) merged.seed = point_args.seed;
                if (point->count("--symbols")) merged.symbols = point_args.symbols;
                if (point->count("--packets")) merged.packets = point_args.packets;
                if (point->count("--phase13")) merged.phase13 = point_args.phase13;
                if (point->count("--phase23")) merged.phase23 = point_args.phase23;
            }
            merged.uplink_csv = std::to_string(point_up);
            merged.downlink_csv = std::to_string(point_dn);
            merged.scheme_names = {point_scheme};
            pncsim::ExperimentSpec spec = build_spec(merged);
            const pncsim::ResultRow row =
                pncsim::run_point(spec, parse_scheme(point_scheme), point_up, point_dn);
            emit({row}, merged.out_path);
            return 0;
        }
        if (validate->parsed()) {
            const pncsim::ValidationReport report = pncsim::validate_suite(validate_seed);
            pncsim::print_report(report, std::cout);
            return report.all_passed() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
