#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hv/cmds.hpp"

namespace {

void emit(const hv::CommandResult& result, const std::string& out_path) {
    std::string text = result.report.dump(1);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot open output file '" << out_path << "'\n";
            std::exit(hv::exit_config_error);
        }
        out << text << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"periods and monodromy of the Hulek-Verrill elliptic and threefold families"};
    app.require_subcommand(1);
    app.fallthrough();

    hv::RunConfig cfg;
    std::string identity_name, gamma_name;
    std::vector<std::string> phi_list;

    app.add_option("--phi", cfg.phi_text, "family parameter (rational, decimal, or a+bi)");
    app.add_option("--digits", cfg.digits, "working precision in decimal digits");
    app.add_option("--order", cfg.order, "series truncation order");
    app.add_option("--out", cfg.out_path, "write the JSON report to this file");
    app.add_option("--cache-dir", cfg.cache_dir, "disk cache directory (default $HV_CACHE_DIR)");
    app.add_option("--contour-file", cfg.contour_file, "contour specification file");
    app.add_option("--detour", cfg.detour, "detour side at interior singularities (upper|lower)");
    app.add_option("--max-denominator", cfg.max_denominator, "denominator bound for gamma recovery");
    app.add_option("--digits-used", cfg.digits_used, "lattice scaling digits for the relation search");
    app.add_option("--aesz34", cfg.aesz_file, "threefold operator asset (JSON)");

    auto* mono = app.add_subcommand("monodromy", "tensor-basis monodromy tables in the lambda plane");
    auto* ident = app.add_subcommand("identity", "evaluate one period identity");
    ident->add_option("name", identity_name, "built-in identity name or identity JSON file")->required();
    auto* gamma = app.add_subcommand("gamma", "recover the rational cycle vector by LLL");
    gamma->add_option("name", gamma_name,
                      "identity/contour name, identity JSON file, or control-transcendental")
        ->required();
    auto* conj = app.add_subcommand("conjecture", "integrality check of elliptic monodromies");
    conj->add_option("phi", phi_list, "one or more phi values")->expected(-1);

    CLI11_PARSE(app, argc, argv);

    hv::CommandResult result;
    if (mono->parsed()) {
        result = hv::run_guarded(
            [&] { return hv::with_order_retry(cfg, [&](const hv::RunConfig& c) { return hv::cmd_monodromy(c); }); });
    } else if (ident->parsed()) {
        result = hv::run_guarded([&] {
            return hv::with_order_retry(
                cfg, [&](const hv::RunConfig& c) { return hv::cmd_identity(c, identity_name); });
        });
    } else if (gamma->parsed()) {
        result = hv::run_guarded([&] {
            return hv::with_order_retry(cfg,
                                        [&](const hv::RunConfig& c) { return hv::cmd_gamma(c, gamma_name); });
        });
    } else if (conj->parsed()) {
        result = hv::run_guarded([&] {
            return hv::with_order_retry(
                cfg, [&](const hv::RunConfig& c) { return hv::cmd_conjecture(c, phi_list); });
        });
    }
    emit(result, cfg.out_path);
    return result.exit_code;
}
