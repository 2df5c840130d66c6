#include "taublab/cli.hpp"

#include "taublab/ergodic.hpp"
#include "taublab/errors.hpp"
#include "taublab/io.hpp"
#include "taublab/lattice_maximal.hpp"
#include "taublab/search.hpp"
#include "taublab/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <sstream>

#ifndef TAUBLAB_VERSION
#define TAUBLAB_VERSION "unknown"
#endif

namespace taublab::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

LatticePoint parse_point(const std::string& text) {
    std::vector<Coord> c;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            c.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError("malformed point \"" + text + "\" (expected comma-separated integers)");
        }
    }
    if (c.empty()) throw ParseError("empty point");
    return LatticePoint(std::move(c));
}

/// "lo:hi" per axis, axes separated by commas.
IntBox parse_window(const std::string& text) {
    std::vector<Coord> lo, hi;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ParseError("malformed window axis \"" + item + "\" (expected lo:hi)");
        try {
            lo.push_back(std::stoll(item.substr(0, colon)));
            hi.push_back(std::stoll(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw ParseError("malformed window axis \"" + item + "\"");
        }
    }
    if (lo.empty()) throw ParseError("empty window");
    return IntBox(lo, hi);
}

void print_report(const verify::Report& r, std::ostream& out) {
    for (const auto& c : r.checks) out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    out << "verify " << r.scenario << ": " << (r.passed() ? "PASS" : "FAIL") << " (" << r.checks.size()
        << " checks)\n";
}

struct SweepRun {
    std::string text;
    std::size_t rows = 0;
};

SweepRun run_sweep(const search::SearchConfig& config, const std::vector<Rational>& grid, const std::string& format) {
    const auto result = search::sweep(grid, config);
    SweepRun r;
    r.rows = result.rows.size();
    r.text = format == "json" ? io::sweep_to_json(result).dump(2) + "\n" : io::sweep_to_csv(result);
    return r;
}

Json grid_json(const std::vector<Rational>& grid) {
    Json g = Json::array();
    for (const auto& a : grid) g.push_back(a.str());
    return g;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"taublab: exact maximal operators, halos and Tauberian constants", "taublab"};
    app.set_version_flag("--version", TAUBLAB_VERSION);
    app.require_subcommand(1);

    // eval
    std::string set_file, point_text, alpha_text;
    bool one_sided = false;
    auto* eval = app.add_subcommand("eval", "Maximal value of chi_E at a lattice point");
    eval->add_option("set", set_file, "LatticeSet JSON file")->required();
    eval->add_option("point", point_text, "Point, e.g. 4 or 12,1")->required();
    eval->add_option("--alpha", alpha_text, "Threshold p/q; prints EXCEEDS or NOT");
    eval->add_flag("--one-sided", one_sided, "Forward windows only (dimension 1)");

    // halo
    std::string halo_format = "csv";
    auto* halo = app.add_subcommand("halo", "Halo {m : M chi_E(m) > alpha} and its ratio");
    halo->add_option("set", set_file, "LatticeSet JSON file")->required();
    halo->add_option("--alpha", alpha_text, "Threshold p/q")->required();
    halo->add_option("--out", halo_format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    halo->add_flag("--one-sided", one_sided, "Forward windows only (dimension 1)");

    // sweep
    search::SearchConfig config;
    std::string grid_text, strategy_text = "interval-family", window_text, operator_text = "strong", out_path;
    std::string sweep_format = "csv";
    auto* sweep = app.add_subcommand("sweep", "Lower-bound envelope over an alpha grid");
    sweep->add_option("--dim", config.dim, "Dimension")->capture_default_str();
    sweep->add_option("--grid", grid_text, "Comma-separated alphas, strictly increasing")->required();
    sweep->add_option("--strategy", strategy_text,
                      "exhaustive | interval-family | product-family | staircase-family | box-family | anneal")
        ->capture_default_str();
    sweep->add_option("--seed", config.seed, "Anneal seed")->capture_default_str();
    sweep->add_option("--budget", config.budget, "Anneal evaluations")->capture_default_str();
    sweep->add_option("--K", config.family_max, "Family parameter")->capture_default_str();
    sweep->add_option("--window", window_text, "Search window lo:hi per axis, e.g. 0:11 or 0:3,0:3");
    sweep->add_option("--operator", operator_text, "strong | one-sided")->capture_default_str();
    sweep->add_option("--out", out_path, "Output file; the manifest goes to <out>.manifest.json")->required();
    sweep->add_option("--format", sweep_format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    // replay
    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "Re-run a sweep from its manifest and compare output digests");
    replay->add_option("manifest", manifest_path, "Manifest JSON written by sweep")->required();

    // tauberian
    std::string system_file;
    ergodic::TauberianOptions topts;
    auto* taub = app.add_subcommand("tauberian", "Ergodic Tauberian constant of a finite system");
    taub->add_option("system", system_file, "AtomicSystem JSON file")->required();
    taub->add_option("--alpha", alpha_text, "Threshold p/q")->required();
    taub->add_option("--max-enum", topts.max_enum, "Largest atom count searched exhaustively")->capture_default_str();
    taub->add_option("--budget", topts.heuristic_budget, "Heuristic evaluations")->capture_default_str();
    taub->add_flag("--one-sided", one_sided, "One-sided operator (dimension 1)");

    // index
    auto* idx = app.add_subcommand("index", "Index of a single transformation with a tower certificate");
    idx->add_option("system", system_file, "AtomicSystem JSON file")->required();

    // verify
    std::string scenario;
    std::size_t jump_n = 0;
    std::uint64_t verify_seed = 1;
    std::size_t verify_count = 0;
    auto* ver = app.add_subcommand("verify", "Check a scenario and print PASS/FAIL per assertion");
    ver->add_option("scenario", scenario, "example1 | jump | index-collapse | transfer | one-sided | ceiling-1d")
        ->required()
        ->check(CLI::IsMember({"example1", "jump", "index-collapse", "transfer", "one-sided", "ceiling-1d"}));
    ver->add_option("N", jump_n, "Cycle length for jump");
    ver->add_option("--seed", verify_seed, "Seed for random sets")->capture_default_str();
    ver->add_option("--count", verify_count, "Random sets (default 20 for transfer, 500 otherwise)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kParseError;
    }

    try {
        if (eval->parsed()) {
            const LatticeSet E = io::lattice_set_from_json(io::read_json_file(set_file));
            const LatticePoint m = parse_point(point_text);
            std::optional<Rational> alpha;
            if (!alpha_text.empty()) {
                alpha = Rational::parse(alpha_text);
                require_unit_open(*alpha);
            }
            const Rational v = one_sided ? lattice::one_sided_max(E, m) : lattice::eval_strong_max(E, m);
            out << v << '\n';
            if (alpha) out << (v > *alpha ? "EXCEEDS" : "NOT") << '\n';
            return kPass;
        }
        if (halo->parsed()) {
            const LatticeSet E = io::lattice_set_from_json(io::read_json_file(set_file));
            const Rational alpha = Rational::parse(alpha_text);
            const LatticeSet members = one_sided ? lattice::one_sided_halo(E, alpha) : lattice::halo(E, alpha).members;
            const Rational ratio(static_cast<std::int64_t>(members.size()), static_cast<std::int64_t>(E.size()));
            if (halo_format == "json") {
                Json j{{"alpha", alpha.str()},
                       {"operator", one_sided ? "one-sided" : "strong"},
                       {"source", io::lattice_set_to_json(E)},
                       {"members", io::lattice_set_to_json(members)},
                       {"halo_size", members.size()},
                       {"set_size", E.size()},
                       {"ratio", ratio.str()}};
                out << j.dump(2) << '\n';
            } else {
                for (std::size_t a = 0; a < E.dim(); ++a) out << (a ? "," : "") << 'x' << a + 1;
                out << '\n';
                for (std::size_t i = 0; i < members.size(); ++i) {
                    auto p = members.point(i);
                    for (std::size_t a = 0; a < p.size(); ++a) out << (a ? "," : "") << p[a];
                    out << '\n';
                }
                out << "# alpha=" << alpha << " halo_size=" << members.size() << " set_size=" << E.size()
                    << " ratio=" << ratio << '\n';
            }
            return kPass;
        }
        if (sweep->parsed()) {
            config.strategy = search::parse_strategy(strategy_text);
            config.op = search::parse_operator(operator_text);
            if (!window_text.empty()) config.window = parse_window(window_text);
            const auto grid = io::parse_grid(grid_text);
            const SweepRun r = run_sweep(config, grid, sweep_format);
            io::write_text_file(out_path, r.text);
            Json manifest{{"tool", "taublab"},
                          {"version", TAUBLAB_VERSION},
                          {"command", "sweep"},
                          {"config", io::config_to_json(config)},
                          {"grid", grid_json(grid)},
                          {"format", sweep_format},
                          {"seeds", Json::array({config.seed})},
                          {"inputs", Json::object()},
                          {"output", {{"file", fs::path(out_path).filename().string()},
                                      {"sha256", io::sha256_hex(r.text)}}}};
            io::write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
            out << "wrote " << out_path << " (" << r.rows << " rows) and " << out_path << ".manifest.json\n";
            return kPass;
        }
        if (replay->parsed()) {
            const Json m = io::read_json_file(manifest_path);
            if (!m.contains("command") || m.at("command") != "sweep") throw ParseError("not a sweep manifest");
            const auto cfg = io::config_from_json(m.at("config"));
            std::vector<Rational> grid;
            for (const auto& a : m.at("grid")) grid.push_back(io::rational_from_json(a));
            const SweepRun r = run_sweep(cfg, grid, m.value("format", "csv"));
            const std::string expected = m.at("output").at("sha256").get<std::string>();
            const std::string actual = io::sha256_hex(r.text);
            const bool same = expected == actual;
            out << (same ? "MATCH " : "MISMATCH ") << actual << (same ? "" : " (manifest " + expected + ")") << '\n';
            return same ? kPass : kVerifyFail;
        }
        if (taub->parsed() || idx->parsed()) {
            const ergodic::AtomicSystem system(io::system_spec_from_json(io::read_json_file(system_file)));
            if (idx->parsed()) {
                const auto r = ergodic::index(system);
                Json cert{{"base", r.certificate.base}, {"heights", r.certificate.heights}};
                out << Json{{"index", *r.value}, {"certificate", cert}}.dump(2) << '\n';
                return kPass;
            }
            const Rational alpha = Rational::parse(alpha_text);
            const auto est = one_sided ? ergodic::one_sided_exact_tauberian(system, alpha, topts)
                                       : ergodic::exact_tauberian(system, alpha, topts);
            out << io::estimate_to_json(est).dump(2) << '\n';
            return kPass;
        }
        if (ver->parsed()) {
            verify::Report r;
            if (scenario == "example1") {
                r = verify::example1();
            } else if (scenario == "jump") {
                if (jump_n == 0) throw ParseError("verify jump needs N, e.g. `taublab verify jump 3`");
                r = verify::jump(jump_n);
            } else if (scenario == "index-collapse") {
                r = verify::index_collapse();
            } else if (scenario == "transfer") {
                r = verify::transfer(verify_seed, verify_count ? verify_count : 20);
            } else if (scenario == "one-sided") {
                r = verify::one_sided(verify_seed, verify_count ? verify_count : 500);
            } else {
                r = verify::ceiling_1d(verify_seed, verify_count ? verify_count : 500);
            }
            print_report(r, out);
            return r.passed() ? kPass : kVerifyFail;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
    return kParseError;
}

}  // namespace taublab::cli
