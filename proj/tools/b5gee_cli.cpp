// b5gee: run power / EE sweeps over cell variants and summarise the results.
//
//   b5gee sweep --variable rate --grid 0:6e9:25 --variants sep-mmwave,nonsep --out run
//   b5gee analyze --csv run/results.csv
//   b5gee config [--config FILE]        print the resolved configuration

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "b5gee/b5gee.hpp"

namespace fs = std::filesystem;
using namespace b5gee;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_empty = 2;

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    out << text;
}

struct Loaded {
    Config cfg;
    std::string bytes;
};

Loaded load(const std::string& path) {
    if (path.empty()) {
        Loaded l{parse_config("", process_env), ""};
        validate(l.cfg);
        return l;
    }
    Loaded l{{}, read_text_file(path)};
    l.cfg = parse_config(l.bytes, process_env);
    validate(l.cfg);
    return l;
}

struct SweepOpts {
    std::string config;
    std::string variable = "rate";
    std::string grid = "0:6e9:25";
    std::string variants = "sep-mmwave,sep-lifi,nonsep";
    std::uint64_t seed = 0;
    std::string out = "b5gee_out";
    std::string plot = "on";
};

int cmd_sweep(const SweepOpts& o) {
    Loaded l;
    SweepSpec spec;
    try {
        l = load(o.config);
        spec.variable = o.variable == "se" ? SweepVariable::se : SweepVariable::rate;
        spec.grid = parse_grid(o.grid);
        spec.variants = parse_variant_list(o.variants);
        validate(spec);
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }

    SweepResult result;
    try {
        result = run_sweep(l.cfg, spec, o.seed);
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }

    const auto rows = to_rows(result);
    fs::create_directories(o.out);
    write_file(fs::path(o.out) / "results.csv", write_csv(rows));

    RunManifest m;
    m.config_path = o.config;
    m.config_sha256 = sha256_hex(l.bytes);
    m.effective_sha256 = sha256_hex(write_config(l.cfg));
    m.seed = o.seed;
    m.variable = std::string(to_string(spec.variable));
    m.grid = o.grid;
    m.variants = o.variants;
    m.timestamp = utc_timestamp();
    write_file(fs::path(o.out) / "manifest.txt", m.write());

    if (o.plot == "on") {
        write_file(fs::path(o.out) / plot_file_name(rows), plot_from_csv(rows));
    }

    std::size_t feasible = 0;
    for (const auto& s : result.series) {
        for (const auto& p : s.points) {
            feasible += p.feasible ? 1 : 0;
        }
    }
    std::cout << "wrote " << rows.size() << " rows (" << feasible << " feasible) to "
              << (fs::path(o.out) / "results.csv").string() << '\n';
    if (feasible == 0) {
        std::cerr << "no feasible point in the sweep\n";
        return exit_empty;
    }
    return exit_ok;
}

struct AnalyzeOpts {
    std::string csv;
    std::string manifest;
    std::string config;
    std::string summary;
    std::string plot;
};

int cmd_analyze(const AnalyzeOpts& o) {
    std::vector<CsvRow> rows;
    try {
        rows = read_csv(read_text_file(o.csv));
    } catch (const std::exception& e) {
        std::cerr << "malformed CSV: " << e.what() << '\n';
        return exit_config;
    }

    const fs::path dir = fs::path(o.csv).parent_path();
    const std::string manifest = o.manifest.empty() ? (dir / "manifest.txt").string() : o.manifest;
    if (fs::exists(manifest)) {
        try {
            const auto kv = parse_key_values(read_text_file(manifest));
            const std::string cfg_path = !o.config.empty() ? o.config
                                         : kv.count("config_path") ? kv.at("config_path")
                                                                   : std::string{};
            const std::string bytes = cfg_path.empty() ? std::string{} : read_text_file(cfg_path);
            if (kv.count("config_sha256") && kv.at("config_sha256") != sha256_hex(bytes)) {
                std::cerr << "config drift: " << (cfg_path.empty() ? "<defaults>" : cfg_path)
                          << " no longer matches the hash recorded in " << manifest << '\n';
                return exit_config;
            }
        } catch (const std::exception& e) {
            std::cerr << "manifest check failed: " << e.what() << '\n';
            return exit_config;
        }
    }

    Analysis a;
    try {
        a = analyze(rows);
    } catch (const std::exception& e) {
        std::cerr << "malformed CSV: " << e.what() << '\n';
        return exit_config;
    }
    std::cout << describe(a);
    const std::string summary = o.summary.empty() ? (dir / "summary.txt").string() : o.summary;
    write_file(summary, write_summary(a));
    if (!o.plot.empty()) {
        write_file(o.plot, plot_from_csv(rows));
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cell power, SE and EE sweeps for separate and non-separate indoor service"};
    app.require_subcommand(1);

    SweepOpts so;
    auto* sweep = app.add_subcommand("sweep", "Run a rate or SE sweep and write results.csv, manifest and plot");
    sweep->add_option("--config", so.config, "Configuration file (defaults when omitted)");
    sweep->add_option("--variable", so.variable, "Sweep variable")->check(CLI::IsMember({"rate", "se"}));
    sweep->add_option("--grid", so.grid, "min:max:steps (bit/s for rate, bit/s/Hz for se)");
    sweep->add_option("--variants", so.variants, "Comma list of sep-mmwave[:M_T], sep-lifi[:M_T], nonsep[:M_T]");
    sweep->add_option("--seed", so.seed, "Seed for random layouts");
    sweep->add_option("--out", so.out, "Output directory");
    sweep->add_option("--plot", so.plot, "Write an SVG plot")->check(CLI::IsMember({"on", "off"}));

    AnalyzeOpts ao;
    auto* an = app.add_subcommand("analyze", "Summarise crossings, EE peaks and LiFi savings from results.csv");
    an->add_option("--csv", ao.csv, "results.csv from a sweep")->required();
    an->add_option("--manifest", ao.manifest, "Manifest to check for config drift (default: next to the CSV)");
    an->add_option("--config", ao.config, "Config file to hash instead of the manifest's config_path");
    an->add_option("--summary", ao.summary, "Summary output (default: summary.txt next to the CSV)");
    an->add_option("--plot", ao.plot, "Also redraw the plot from the CSV into this file");

    std::string cfg_path;
    auto* dump = app.add_subcommand("config", "Print the resolved configuration with provenance");
    dump->add_option("--config", cfg_path, "Configuration file (defaults when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            return cmd_sweep(so);
        }
        if (*an) {
            return cmd_analyze(ao);
        }
        if (*dump) {
            Loaded l;
            try {
                l = load(cfg_path);
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << '\n';
                return exit_config;
            }
            std::cout << write_config(l.cfg, true);
            return exit_ok;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }
    return exit_ok;
}
