// Command-line front end. Flags mirror the config keys one-to-one; a
// --config file fills in whatever the flags left unset.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "segmap/cli.hpp"

namespace {

struct SubcommandSlot {
    CLI::App* app = nullptr;
    segmap::RunConfig cfg;
    std::optional<std::string> config_path;
};

void add_common_options(SubcommandSlot& slot) {
    CLI::App& s = *slot.app;
    s.add_option("--config", slot.config_path, "config file with key = value lines");
    s.add_option("--omega", slot.cfg.omega, "segment half-angle, in (0, pi/2)");
    s.add_option("--phi", slot.cfg.phi, "boundary data word or node file");
    s.add_option("--K", slot.cfg.kept, "kept arc file, or 'none'");
    s.add_option("--m", slot.cfg.m_text, "comma-separated integer list");
    s.add_option("--N", slot.cfg.N, "truncation order");
    s.add_option("--M", slot.cfg.M, "boundary node count");
    s.add_option("--r_max", slot.cfg.r_max, "grid radius");
    s.add_option("--grid_r", slot.cfg.grid_r, "radial grid count");
    s.add_option("--grid_theta", slot.cfg.grid_theta, "angular grid count");
    s.add_option("--seed", slot.cfg.seed, "random seed");
    s.add_option("--out", slot.cfg.out, "output file");
    s.add_option("--threads", slot.cfg.threads, "worker thread count");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmonic maps of the disk onto a circular segment: "
                 "boundary repair, energy estimates, and scan tools"};
    app.require_subcommand(1);

    SubcommandSlot approx, douglas, chordarc, rkc;
    approx.app = app.add_subcommand(
        "approx", "repair a boundary map at a ladder of resolutions and verify the bounds");
    douglas.app = app.add_subcommand(
        "douglas", "compare spectral, boundary-integral, and grid energies of one map");
    chordarc.app =
        app.add_subcommand("chordarc", "probe chord-arc ratios of a boundary curve");
    rkc.app = app.add_subcommand("rkc", "scan the Jacobian of a truncated extension");
    add_common_options(approx);
    add_common_options(douglas);
    add_common_options(chordarc);
    add_common_options(rkc);
    chordarc.app->add_flag("--gradients", chordarc.cfg.gradients,
                           "compare closed-form and finite-difference gradients");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    SubcommandSlot* slot = nullptr;
    int (*cmd)(const segmap::RunConfig&, std::ostream&, std::ostream&) = nullptr;
    if (approx.app->parsed()) {
        slot = &approx;
        cmd = segmap::cmd_approx;
    } else if (douglas.app->parsed()) {
        slot = &douglas;
        cmd = segmap::cmd_douglas;
    } else if (chordarc.app->parsed()) {
        slot = &chordarc;
        cmd = segmap::cmd_chordarc;
    } else {
        slot = &rkc;
        cmd = segmap::cmd_rkc;
    }

    if (slot->config_path) {
        try {
            segmap::apply_config_file(slot->cfg, *slot->config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
    }
    return cmd(slot->cfg, std::cout, std::cerr);
}
