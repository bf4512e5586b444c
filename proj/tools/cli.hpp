#pragma once

// clarkctl: Clark measures and identity checks from the command line.
// stdout carries a short summary; data goes to the files named by flags.

#include <clark/verify.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace clarkctl {

using clark::cd;
using clark::Error;
using clark::ErrorCode;
namespace io = clark::io;

inline cd parse_alpha(const std::string& text) {
    const auto comma = text.find(',');
    try {
        std::size_t used = 0;
        if (comma == std::string::npos) {
            const double t = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return std::polar(1.0, t);
        }
        const std::string re = text.substr(0, comma), im = text.substr(comma + 1);
        const cd a(std::stod(re, &used), 0.0);
        if (used != re.size()) throw std::invalid_argument(text);
        const double b = std::stod(im, &used);
        if (used != im.size()) throw std::invalid_argument(text);
        return {a.real(), b};
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::InvalidConfig, "alpha must be 're,im' or an angle in radians, got '" + text + "'");
    }
}

struct Options {
    std::string symbol;
    std::string alpha = "1,0";
    int grid = 1024;
    bool fixed_grid = false;
    std::optional<std::string> grid_spec;
    int quotient_nodes = 64;
    int slice_nodes = 64;
    std::optional<std::uint64_t> seed;
    std::string ball_rule = "monte_carlo";
    std::string out;
    std::string atoms_csv;
    std::string density_csv;
    std::optional<std::string> config;
    int alphas = 32;
    std::size_t node = 0;
};

inline clark::SymbolMap load_symbol(const std::string& path) {
    return io::symbol_from_json(io::read_json_file(path));
}

inline clark::RationalSelfMap1D load_symbol_1d(const std::string& path) {
    const auto symbol = load_symbol(path);
    if (symbol.dimension() != 1)
        throw Error(ErrorCode::DomainMismatch, "this subcommand takes a one-variable symbol");
    clark::validate_self_map(symbol);
    return clark::slice_restrict(symbol, clark::BoundaryPoint{{cd(1.0)}});
}

inline clark::GridSpec grid_from(const Options& o, const clark::DomainDescriptor& domain) {
    if (o.grid_spec) {
        auto spec = io::grid_spec_from_json(io::read_json_file(*o.grid_spec));
        if (!(spec.domain == domain)) throw Error(ErrorCode::DomainMismatch, "grid spec and symbol live on different domains");
        return spec;
    }
    clark::GridSpec spec;
    spec.domain = domain;
    spec.quotient_nodes = o.quotient_nodes;
    spec.slice_nodes = o.slice_nodes;
    spec.seed = o.seed;
    if (o.ball_rule == "product") spec.ball_rule = clark::BallQuotientRule::Product;
    else if (o.ball_rule != "monte_carlo") throw Error(ErrorCode::InvalidConfig, "unknown ball rule '" + o.ball_rule + "'");
    return spec;
}

inline clark::DensityResolution resolution(const Options& o) {
    clark::DensityResolution r;
    r.adaptive = !o.fixed_grid;
    return r;
}

inline void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") out << text;
    else io::write_text_file(path, text);
}

inline int cmd_clark1d(const Options& o, std::ostream& out) {
    const auto p = load_symbol_1d(o.symbol);
    const auto mu = clark::clark_measure_1d(p, parse_alpha(o.alpha), o.grid, resolution(o));
    if (!o.out.empty()) io::write_text_file(o.out, io::to_json(mu).dump(2) + "\n");
    if (!o.atoms_csv.empty()) io::write_text_file(o.atoms_csv, io::atoms_csv(mu));
    if (!o.density_csv.empty()) io::write_text_file(o.density_csv, io::density_csv(mu));
    out << io::json{{"atoms", io::atoms_to_json(mu)},
                    {"total_mass", mu.total_mass()},
                    {"density_grid", mu.grid_size()}}.dump()
        << "\n";
    return 0;
}

inline int cmd_field(const Options& o, std::ostream& out) {
    const auto symbol = load_symbol(o.symbol);
    clark::validate_self_map(symbol);
    const auto spec = grid_from(o, symbol.domain());
    clark::FieldOptions fo;
    fo.resolution = resolution(o);
    const clark::SliceField field(symbol, parse_alpha(o.alpha), clark::quotient_grid(spec), spec.slice_nodes, fo);
    const auto summary = io::field_summary(field);
    if (!o.out.empty()) io::write_text_file(o.out, summary.dump(2) + "\n");
    out << io::json{{"nodes", field.size()},
                    {"total_mass", summary["total_mass"]},
                    {"singular_mass", summary["singular_mass"]}}.dump()
        << "\n";
    return 0;
}

inline int cmd_plot_data(const Options& o, std::ostream& out) {
    const auto symbol = load_symbol(o.symbol);
    clark::validate_self_map(symbol);
    clark::BoundaryMeasure1D mu;
    if (symbol.dimension() == 1) {
        mu = clark::clark_measure_1d(clark::slice_restrict(symbol, clark::BoundaryPoint{{cd(1.0)}}), parse_alpha(o.alpha),
                                     o.grid, resolution(o));
    } else {
        const auto spec = grid_from(o, symbol.domain());
        const auto qgrid = clark::quotient_grid(spec);
        if (o.node >= qgrid.size())
            throw Error(ErrorCode::InvalidConfig, "node " + std::to_string(o.node) + " is outside the quotient grid");
        mu = clark::clark_measure_1d(clark::slice_restrict(symbol, qgrid.nodes[o.node].point), parse_alpha(o.alpha),
                                     o.grid, resolution(o));
    }
    if (o.atoms_csv.empty() && o.density_csv.empty())
        throw Error(ErrorCode::InvalidConfig, "plot-data needs --atoms-csv and/or --density-csv");
    if (!o.atoms_csv.empty()) io::write_text_file(o.atoms_csv, io::atoms_csv(mu));
    if (!o.density_csv.empty()) io::write_text_file(o.density_csv, io::density_csv(mu));
    out << io::json{{"atoms", mu.atoms().size()}, {"density_rows", mu.grid_size()}}.dump() << "\n";
    return 0;
}

inline int cmd_profile(const Options& o, std::ostream& out) {
    const auto symbol = load_symbol(o.symbol);
    clark::validate_self_map(symbol);
    const auto spec = grid_from(o, symbol.domain());
    const auto prof = clark::singular_norm_profile(symbol, o.alphas, clark::quotient_grid(spec), spec.slice_nodes);
    write_or_print(o.out, io::profile_csv(prof), out);
    if (!o.out.empty() && o.out != "-") out << io::json{{"alphas", o.alphas}, {"sup", prof.sup}}.dump() << "\n";
    return 0;
}

inline int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    const auto symbol = load_symbol(o.symbol);
    auto config = o.config ? clark::verify::suite_config_from_json(io::read_json_file(*o.config)) : clark::verify::SuiteConfig{};
    if (o.seed) config.seed = *o.seed;
    try {
        clark::validate_self_map(symbol);
    } catch (const Error&) {
        const auto reports = clark::verify::run_suite(symbol, config);
        if (!o.out.empty()) io::write_text_file(o.out, clark::verify::to_json(reports).dump(2) + "\n");
        throw;
    }
    const auto reports = clark::verify::run_suite(symbol, config);
    if (!o.out.empty()) io::write_text_file(o.out, clark::verify::to_json(reports).dump(2) + "\n");
    int passed = 0, failed = 0, skipped = 0;
    for (const auto& r : reports) {
        char line[256];
        std::snprintf(line, sizeof line, "%-7s %-42s residual %.3e  tolerance %.3e", clark::verify::to_string(r.status).c_str(),
                      r.name.c_str(), r.residual, r.tolerance);
        out << line << "\n";
        passed += r.status == clark::verify::CheckStatus::Passed;
        failed += r.status == clark::verify::CheckStatus::Failed;
        skipped += r.status == clark::verify::CheckStatus::Skipped;
        if (r.failed()) err << r.name << ": " << r.detail << "\n";
    }
    out << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
    return clark::verify::suite_exit_code(reports);
}

/// Exit codes: 0 success (verify: nothing failed), 1 a verify check failed,
/// 2 bad input; the error object goes to stderr.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Clark measures of holomorphic self-maps of the disc, polydisc and ball", "clarkctl"};
    app.require_subcommand(1);
    Options o;

    const auto add_symbol = [&](CLI::App* c) {
        c->add_option("--symbol", o.symbol, "symbol JSON file")->required();
    };
    const auto add_alpha = [&](CLI::App* c) {
        c->add_option("--alpha", o.alpha, "unimodular alpha as 're,im' or an angle in radians")->capture_default_str();
    };
    const auto add_grid = [&](CLI::App* c) {
        c->add_option("--grid", o.grid, "density grid size, a power of two >= 64")->capture_default_str();
        c->add_flag("--fixed-grid", o.fixed_grid, "do not refine the density grid near sharp peaks");
    };
    const auto add_quotient = [&](CLI::App* c) {
        c->add_option("--grid-spec", o.grid_spec, "grid spec JSON file (overrides the node flags)");
        c->add_option("--quotient-nodes", o.quotient_nodes, "quotient nodes (polydisc: per free coordinate)")->capture_default_str();
        c->add_option("--slice-nodes", o.slice_nodes, "density nodes per slice")->capture_default_str();
        c->add_option("--seed", o.seed, "seed for Monte Carlo quotient grids (required on the ball)");
        c->add_option("--ball-rule", o.ball_rule, "ball quotient rule: monte_carlo or product (n = 2)")->capture_default_str();
    };

    auto* c1 = app.add_subcommand("clark1d", "Clark measure of a one-variable symbol");
    add_symbol(c1);
    add_alpha(c1);
    add_grid(c1);
    c1->add_option("--out", o.out, "measure JSON output file");
    c1->add_option("--atoms-csv", o.atoms_csv, "atom table (theta,mass)");
    c1->add_option("--density-csv", o.density_csv, "density table (theta,density)");

    auto* cf = app.add_subcommand("field", "slice field of a symbol on a quotient grid");
    add_symbol(cf);
    add_alpha(cf);
    add_quotient(cf);
    cf->add_flag("--fixed-grid", o.fixed_grid, "do not refine slice density grids near sharp peaks");
    cf->add_option("--out", o.out, "field summary JSON output file");

    auto* cv = app.add_subcommand("verify", "run the identity checks on a symbol");
    add_symbol(cv);
    cv->add_option("--config", o.config, "suite config JSON file");
    cv->add_option("--seed", o.seed, "seed for Monte Carlo grids and random test points");
    cv->add_option("--out", o.out, "report JSON output file");

    auto* cp = app.add_subcommand("plot-data", "theta/density and atom tables of one slice measure");
    add_symbol(cp);
    add_alpha(cp);
    add_grid(cp);
    add_quotient(cp);
    cp->add_option("--node", o.node, "quotient node of the slice (several variables)")->capture_default_str();
    cp->add_option("--atoms-csv", o.atoms_csv, "atom table output file");
    cp->add_option("--density-csv", o.density_csv, "density table output file");

    auto* cr = app.add_subcommand("profile", "singular mass of mu_alpha over an alpha grid");
    add_symbol(cr);
    add_quotient(cr);
    cr->add_option("--alphas", o.alphas, "number of equispaced alphas")->capture_default_str();
    cr->add_option("--out", o.out, "CSV output file (alpha_angle,singular_norm,standard_error); '-' for stdout");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << io::json{{"error", "InvalidConfig"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }

    try {
        if (c1->parsed()) return cmd_clark1d(o, out);
        if (cf->parsed()) return cmd_field(o, out);
        if (cv->parsed()) return cmd_verify(o, out, err);
        if (cp->parsed()) return cmd_plot_data(o, out);
        if (cr->parsed()) return cmd_profile(o, out);
    } catch (const Error& e) {
        err << io::error_object(e).dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << io::json{{"error", "InvalidConfig"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace clarkctl
