#pragma once
// Subcommand bodies behind the command-line binary. Each takes the merged
// option set plus output/error streams and returns the process exit code:
// 0 all checks pass, 1 a computed verdict fails, 2 bad usage or input.
// Keeping them here lets tests drive the exact CLI paths in process.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "segmap/boundary.hpp"
#include "segmap/chordarc.hpp"
#include "segmap/energy.hpp"
#include "segmap/geometry.hpp"
#include "segmap/harmonic.hpp"
#include "segmap/io.hpp"
#include "segmap/pipeline.hpp"

namespace segmap {

// One field per recognized key. Command-line flags mirror the keys
// one-to-one; a config file may supply any of them, and flags win.
struct RunConfig {
    std::optional<double> omega;
    std::optional<std::string> phi;     // preset | file; command-specific words below
    std::optional<std::string> kept;    // key "K": arc file, or "none"
    std::optional<std::string> m_text;  // key "m": comma-separated integers
    std::optional<int> N;
    std::optional<int> M;
    std::optional<double> r_max;
    std::optional<int> grid_r;
    std::optional<int> grid_theta;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> threads;
    bool gradients = false;  // flag only, chordarc
};

[[nodiscard]] inline std::vector<int> parse_m_list(const std::string& text) {
    std::vector<int> out;
    for (const std::string& piece : detail::split(text, ',')) {
        const long long v = detail::parse_int(piece, "m list");
        if (v < 1 || v > 1000000) throw std::invalid_argument("m list: value out of range");
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw std::invalid_argument("m list: empty");
    return out;
}

/// Loads "key = value" entries into the fields the command line left unset.
/// Unknown keys are rejected by name.
inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    for (const auto& [key, value] : parse_config_file(path)) {
        const std::string where = path + ": key '" + key + "'";
        if (key == "omega") {
            if (!cfg.omega) cfg.omega = detail::parse_double(value, where);
        } else if (key == "phi") {
            if (!cfg.phi) cfg.phi = value;
        } else if (key == "K") {
            if (!cfg.kept) cfg.kept = value;
        } else if (key == "m") {
            if (!cfg.m_text) cfg.m_text = value;
        } else if (key == "N") {
            if (!cfg.N) cfg.N = static_cast<int>(detail::parse_int(value, where));
        } else if (key == "M") {
            if (!cfg.M) cfg.M = static_cast<int>(detail::parse_int(value, where));
        } else if (key == "r_max") {
            if (!cfg.r_max) cfg.r_max = detail::parse_double(value, where);
        } else if (key == "grid_r") {
            if (!cfg.grid_r) cfg.grid_r = static_cast<int>(detail::parse_int(value, where));
        } else if (key == "grid_theta") {
            if (!cfg.grid_theta)
                cfg.grid_theta = static_cast<int>(detail::parse_int(value, where));
        } else if (key == "seed") {
            if (!cfg.seed) {
                const long long v = detail::parse_int(value, where);
                if (v < 0) throw std::invalid_argument(where + ": seed must be nonnegative");
                cfg.seed = static_cast<std::uint64_t>(v);
            }
        } else if (key == "out") {
            if (!cfg.out) cfg.out = value;
        } else if (key == "threads") {
            if (!cfg.threads) cfg.threads = static_cast<int>(detail::parse_int(value, where));
        } else {
            throw std::invalid_argument(path + ": unknown key '" + key + "'");
        }
    }
}

namespace detail {

[[nodiscard]] inline std::string json_sibling(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ".json";
    return path.substr(0, dot) + ".json";
}

[[nodiscard]] inline bool is_preset_word(const std::string& w) {
    return w == "identity" || w == "flat_step" || w == "multi_flat";
}

[[nodiscard]] inline PhiPreset preset_from_word(const std::string& w) {
    if (w == "identity") return PhiPreset::identity;
    if (w == "flat_step") return PhiPreset::flat_step;
    return PhiPreset::multi_flat;
}

// Boundary correspondence plus truncated extension for the commands that do
// not need the full ladder. No positivity gate here: the scan commands
// report the minimum instead of refusing to build.
struct BoundaryAndMap {
    SegmentBoundaryMap boundary;
    HarmonicMap map;
};

[[nodiscard]] inline BoundaryAndMap make_boundary_and_map(const std::string& word, double omega,
                                                          int N) {
    const Segment seg(omega);
    MonotonePhi phi = is_preset_word(word) ? preset_phi(preset_from_word(word), seg)
                                           : load_monotone_phi(word);
    SegmentBoundaryMap boundary = canonical_fixture_boundary(seg, std::move(phi));
    HarmonicMap map = harmonic_extension([&boundary](double t) { return boundary.value(t); }, N);
    return {std::move(boundary), std::move(map)};
}

template <class Fn>
int guard(std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace detail

/// Ladder run over one fixture. phi: identity | flat_step | multi_flat or a
/// node file; K: arc file or "none" (default: the preset's kept set).
/// Writes the row table as CSV plus a JSON sibling, prints one line per
/// verdict, and fails (1) if any verdict fails.
inline int cmd_approx(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guard(err, [&]() {
        FixtureSpec spec;
        spec.omega = cfg.omega.value_or(std::numbers::pi / 3);
        const std::string word = cfg.phi.value_or("flat_step");
        if (detail::is_preset_word(word)) {
            spec.preset = detail::preset_from_word(word);
        } else {
            spec.preset = PhiPreset::custom;
            spec.custom_phi = load_monotone_phi(word);
        }
        if (cfg.kept) {
            spec.custom_kept = *cfg.kept == "none" ? ArcSet{} : load_arcset(*cfg.kept);
        }
        if (cfg.m_text) spec.m_list = parse_m_list(*cfg.m_text);
        spec.N = cfg.N.value_or(512);
        spec.douglas_nodes = cfg.M.value_or(2048);
        spec.jacobian_r_max = cfg.r_max.value_or(0.95);
        spec.grid_r = cfg.grid_r.value_or(128);
        spec.grid_theta = cfg.grid_theta.value_or(256);
        spec.seed = cfg.seed.value_or(1);
        spec.threads = cfg.threads.value_or(1);

        const ConvergenceReport rep = run_approximation(spec);
        const std::vector<Verdict> verdicts = verify_proposition(rep);

        const std::string csv_path = cfg.out.value_or("report.csv");
        const std::string json_path = detail::json_sibling(csv_path);
        {
            std::ofstream f(csv_path);
            if (!f) throw std::invalid_argument("cannot open " + csv_path);
            write_report_csv(f, rep);
            if (!f) throw std::runtime_error("write failed: " + csv_path);
        }
        {
            std::ofstream f(json_path);
            if (!f) throw std::invalid_argument("cannot open " + json_path);
            f << report_json(rep, verdicts).dump(2) << '\n';
            if (!f) throw std::runtime_error("write failed: " + json_path);
        }
        for (const Verdict& v : verdicts)
            out << (v.pass ? "PASS" : "FAIL") << ' ' << v.name << ": " << v.detail << '\n';
        out << "rows: " << rep.rows.size() << ", report: " << csv_path << ", " << json_path
            << '\n';
        return all_pass(verdicts) ? 0 : 1;
    });
}

/// Energy estimates for one map. phi: identity (plain rotation, energy
/// 2 pi) | z2 (doubled circle, 4 pi) | preset | node file. Writes the
/// estimator comparison as JSON and fails (1) if the estimators disagree.
inline int cmd_douglas(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guard(err, [&]() {
        const std::string word = cfg.phi.value_or("identity");
        const int douglas_nodes = cfg.M.value_or(2048);
        const PolarGrid grid{cfg.r_max.value_or(0.999), cfg.grid_r.value_or(128),
                             cfg.grid_theta.value_or(256)};
        const int threads = cfg.threads.value_or(1);

        HarmonicMap map;
        std::function<cplx(double)> boundary;
        if (word == "identity" || word == "z2") {
            const int n = word == "identity" ? 1 : 2;
            map.N = 2;
            map.coeff.assign(5, cplx{});
            map.coeff[static_cast<std::size_t>(map.N + n)] = 1.0;
            boundary = [n](double t) { return std::polar(1.0, n * t); };
        } else {
            detail::BoundaryAndMap bam = detail::make_boundary_and_map(
                word, cfg.omega.value_or(std::numbers::pi / 3), cfg.N.value_or(512));
            map = std::move(bam.map);
            boundary = [bm = std::move(bam.boundary)](double t) { return bm.value(t); };
        }

        const EnergyReport rep = make_energy_report(map, boundary, douglas_nodes, grid, threads);
        out << "dirichlet_fourier = " << format_double(rep.dirichlet_fourier) << '\n';
        out << "dirichlet_grid = " << format_double(rep.dirichlet_grid) << '\n';
        out << "douglas = " << format_double(rep.douglas) << '\n';
        out << "royden = " << format_double(rep.royden) << '\n';
        out << "residual_grid = " << format_double(rep.residual_grid) << '\n';
        out << "residual_douglas = " << format_double(rep.residual_douglas) << '\n';

        const std::string path = cfg.out.value_or("energy.json");
        std::ofstream f(path);
        if (!f) throw std::invalid_argument("cannot open " + path);
        f << energy_report_json(rep).dump(2) << '\n';
        if (!f) throw std::runtime_error("write failed: " + path);
        return energy_report_within(rep) ? 0 : 1;
    });
}

/// Chord-arc probing of a boundary curve. phi: disk | spiral | cusp; M:
/// polyline resolution; m: probe attempts. Writes kept probes as CSV and
/// reports the largest ratio seen. --gradients adds a closed-form versus
/// finite-difference comparison at seeded interior points.
inline int cmd_chordarc(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guard(err, [&]() {
        const std::string word = cfg.phi.value_or("disk");
        ProbeDomain domain;
        if (word == "disk") {
            domain = ProbeDomain::disk;
        } else if (word == "spiral") {
            domain = ProbeDomain::spiral;
        } else if (word == "cusp") {
            domain = ProbeDomain::cusp;
        } else {
            throw std::invalid_argument("phi must be disk, spiral, or cusp, got '" + word + "'");
        }
        const int n_poly = cfg.M.value_or(10000);
        int count = 100;
        if (cfg.m_text) count = parse_m_list(*cfg.m_text).front();
        const std::uint64_t seed = cfg.seed.value_or(1);

        const ProbeRun run = generate_probes(domain, n_poly, count, seed);
        const std::string path = cfg.out.value_or("probes.csv");
        std::ofstream f(path);
        if (!f) throw std::invalid_argument("cannot open " + path);
        write_probes_csv(f, run);
        if (!f) throw std::runtime_error("write failed: " + path);

        out << "kept " << run.probes.size() << " of " << count << " probes (skipped "
            << run.skipped << " leaving the region)\n";
        out << "no violation found up to ratio R = " << format_double(run.max_ratio) << '\n';

        if (cfg.gradients) {
            if (domain == ProbeDomain::disk)
                throw std::invalid_argument("--gradients needs phi = spiral or cusp");
            const ExampleMap kind =
                domain == ProbeDomain::spiral ? ExampleMap::spiral : ExampleMap::cusp;
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            double dev_fz = 0.0, dev_fzb = 0.0, dev_j = 0.0;
            int used = 0;
            while (used < 100) {
                const cplx z = std::polar(0.9 * std::sqrt(unit(rng)), two_pi * unit(rng));
                const cplx sing = kind == ExampleMap::spiral ? cplx{1, 0} : cplx{-1, 0};
                if (std::abs(z - sing) < 1e-3) continue;
                const ExampleGradients g = example_map_gradients(kind, z);
                dev_fz = std::max(dev_fz, std::abs(g.fz - g.fz_fd));
                dev_fzb = std::max(dev_fzb, std::abs(g.fzb - g.fzb_fd));
                dev_j = std::max(dev_j, std::abs(g.jacobian - g.jacobian_fd));
                ++used;
            }
            out << "gradient check over 100 points: max |fz - fd| = " << format_double(dev_fz)
                << ", max |fzbar - fd| = " << format_double(dev_fzb)
                << ", max |J - fd| = " << format_double(dev_j) << '\n';
        }
        return 0;
    });
}

/// Jacobian scan of one truncated extension. phi: preset | node file | zbar
/// (the reflection, a guaranteed negative). Prints the grid minimum and
/// fails (1) if it is not positive.
inline int cmd_rkc(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guard(err, [&]() {
        const std::string word = cfg.phi.value_or("flat_step");
        const PolarGrid grid{cfg.r_max.value_or(0.95), cfg.grid_r.value_or(128),
                             cfg.grid_theta.value_or(256)};
        const int threads = cfg.threads.value_or(1);

        HarmonicMap map;
        if (word == "zbar") {
            map.N = 1;
            map.coeff.assign(3, cplx{});
            map.coeff[0] = 1.0;  // c_{-1}: f(z) = conj(z), Jacobian -1
        } else {
            map = detail::make_boundary_and_map(word, cfg.omega.value_or(std::numbers::pi / 3),
                                                cfg.N.value_or(512))
                      .map;
        }
        const double minj = rkc_positivity_check(map, grid, threads);
        out << "min_jacobian = " << format_double(minj) << '\n';
        if (cfg.out) {
            ordered_json j;
            j["phi"] = word;
            j["r_max"] = grid.r_max;
            j["min_jacobian"] = minj;
            std::ofstream f(*cfg.out);
            if (!f) throw std::invalid_argument("cannot open " + *cfg.out);
            f << j.dump(2) << '\n';
            if (!f) throw std::runtime_error("write failed: " + *cfg.out);
        }
        return minj > 0.0 ? 0 : 1;
    });
}

}  // namespace segmap
