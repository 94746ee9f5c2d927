#pragma once
// File formats: comma-separated node/arc/coefficient/polyline files, the
// convergence report as CSV and JSON, and a small key = value config reader.
// All numeric output goes through one %.17g formatter so identical runs
// produce identical bytes.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "segmap/boundary.hpp"
#include "segmap/chordarc.hpp"
#include "segmap/energy.hpp"
#include "segmap/harmonic.hpp"
#include "segmap/pipeline.hpp"

namespace segmap {

using ordered_json = nlohmann::ordered_json;

[[nodiscard]] inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

[[nodiscard]] inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[nodiscard]] inline double parse_double(const std::string& s, const std::string& where) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size())
        throw std::invalid_argument(where + ": not a number: '" + t + "'");
    return v;
}

[[nodiscard]] inline long long parse_int(const std::string& s, const std::string& where) {
    const std::string t = trim(s);
    long long v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size())
        throw std::invalid_argument(where + ": not an integer: '" + t + "'");
    return v;
}

[[nodiscard]] inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

// Calls row(fields, where) for every data line; '#' starts a comment and
// blank lines are skipped. `where` is "<path>:<line>" for error messages.
template <class Fn>
void for_each_csv_row(const std::string& path, std::size_t expect_fields, Fn&& row) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const std::size_t h = line.find('#'); h != std::string::npos) line.resize(h);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const std::vector<std::string> f = split(t, ',');
        if (f.size() != expect_fields)
            throw std::invalid_argument(where + ": expected " + std::to_string(expect_fields) +
                                     " comma-separated fields, got " + std::to_string(f.size()));
        row(f, where);
    }
}

}  // namespace detail

// --------------------------------------------------------------- node files

/// Reads "theta,phi" lines into a node list. Validation against a segment
/// happens later, at fixture build time.
[[nodiscard]] inline MonotonePhi load_monotone_phi(const std::string& path) {
    MonotonePhi out;
    detail::for_each_csv_row(path, 2, [&](const std::vector<std::string>& f, const std::string& w) {
        out.theta.push_back(detail::parse_double(f[0], w));
        out.phi.push_back(detail::parse_double(f[1], w));
    });
    if (out.size() < 2) throw std::invalid_argument(path + ": need at least two nodes");
    return out;
}

/// Reads "lo,hi" lines into a kept arc set.
[[nodiscard]] inline ArcSet load_arcset(const std::string& path) {
    ArcSet out;
    detail::for_each_csv_row(path, 2, [&](const std::vector<std::string>& f, const std::string& w) {
        out.components.push_back({detail::parse_double(f[0], w), detail::parse_double(f[1], w)});
    });
    return out;
}

inline void save_coefficients(const std::string& path, const HarmonicMap& map) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path);
    out << "# n,re,im\n";
    for (int n = -map.N; n <= map.N; ++n)
        out << n << ',' << format_double(map.c(n).real()) << ','
            << format_double(map.c(n).imag()) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// Reads "n,re,im" lines; the order is inferred from the largest |n| and
/// missing modes stay zero. Duplicate n is an error.
[[nodiscard]] inline HarmonicMap load_coefficients(const std::string& path) {
    std::vector<long long> ns;
    std::vector<cplx> cs;
    detail::for_each_csv_row(path, 3, [&](const std::vector<std::string>& f, const std::string& w) {
        ns.push_back(detail::parse_int(f[0], w));
        cs.push_back(cplx{detail::parse_double(f[1], w), detail::parse_double(f[2], w)});
    });
    if (ns.empty()) throw std::invalid_argument(path + ": no coefficients");
    long long nmax = 0;
    for (long long n : ns) nmax = std::max(nmax, n < 0 ? -n : n);
    if (nmax > 100000) throw std::invalid_argument(path + ": coefficient order too large");
    HarmonicMap out;
    out.N = static_cast<int>(nmax);
    out.coeff.assign(2 * static_cast<std::size_t>(out.N) + 1, cplx{});
    std::vector<bool> seen(out.coeff.size(), false);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const std::size_t idx = static_cast<std::size_t>(ns[i] + out.N);
        if (seen[idx])
            throw std::invalid_argument(path + ": duplicate coefficient n=" + std::to_string(ns[i]));
        seen[idx] = true;
        out.coeff[idx] = cs[i];
    }
    return out;
}

inline void save_polyline(const std::string& path, const std::vector<cplx>& pts) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path);
    out << "# x,y\n";
    for (const cplx& p : pts)
        out << format_double(p.real()) << ',' << format_double(p.imag()) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ------------------------------------------------------------------ reports

inline constexpr const char* report_csv_header =
    "m,sup_err,bound_8w2_over_m,bound_21_over_m,E_f,E_fm_douglas,E_fm_fourier,energy_gap,"
    "min_slope,min_jacobian,quasi_lipschitz_margin";

inline void write_report_csv(std::ostream& out, const ConvergenceReport& rep) {
    out << report_csv_header << '\n';
    for (const ReportRow& r : rep.rows) {
        out << r.m << ',' << format_double(r.sup_err) << ','
            << format_double(r.bound_8w2_over_m) << ',' << format_double(r.bound_21_over_m)
            << ',' << format_double(r.e_f) << ',' << format_double(r.e_fm_douglas) << ','
            << format_double(r.e_fm_fourier) << ',' << format_double(r.energy_gap) << ','
            << format_double(r.min_slope) << ',' << format_double(r.min_jacobian) << ','
            << format_double(r.ql_margin) << '\n';
    }
}

inline constexpr const char* probes_csv_header = "probe_id,boundary_len,gamma_len,ratio";

inline void write_probes_csv(std::ostream& out, const ProbeRun& run) {
    out << probes_csv_header << '\n';
    for (std::size_t i = 0; i < run.probes.size(); ++i) {
        const ChordArcProbe& p = run.probes[i];
        out << i << ',' << format_double(p.boundary_len) << ',' << format_double(p.chord)
            << ',' << format_double(p.ratio) << '\n';
    }
}

[[nodiscard]] inline ordered_json report_json(const ConvergenceReport& rep,
                                              const std::vector<Verdict>& verdicts) {
    ordered_json j;
    j["omega"] = rep.spec.omega;
    j["preset"] = preset_name(rep.spec.preset);
    j["N"] = rep.spec.N;
    j["douglas_nodes"] = rep.spec.douglas_nodes;
    j["jacobian_r_max"] = rep.spec.jacobian_r_max;
    j["seed"] = rep.spec.seed;
    j["E_f"] = rep.e_f;
    j["base_min_jacobian"] = rep.base_min_jacobian;
    j["annulus_energy_09"] = rep.annulus_energy;
    ordered_json rows = ordered_json::array();
    for (const ReportRow& r : rep.rows) {
        ordered_json row;
        row["m"] = r.m;
        row["sup_err"] = r.sup_err;
        row["bound_8w2_over_m"] = r.bound_8w2_over_m;
        row["bound_21_over_m"] = r.bound_21_over_m;
        row["E_f"] = r.e_f;
        row["E_fm_douglas"] = r.e_fm_douglas;
        row["E_fm_fourier"] = r.e_fm_fourier;
        row["energy_gap"] = r.energy_gap;
        row["min_slope"] = r.min_slope;
        row["min_jacobian"] = r.min_jacobian;
        row["quasi_lipschitz_margin"] = r.ql_margin;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    ordered_json vs = ordered_json::array();
    for (const Verdict& v : verdicts) {
        ordered_json e;
        e["name"] = v.name;
        e["pass"] = v.pass;
        e["detail"] = v.detail;
        vs.push_back(std::move(e));
    }
    j["verdicts"] = std::move(vs);
    return j;
}

[[nodiscard]] inline ordered_json energy_report_json(const EnergyReport& r) {
    ordered_json j;
    j["dirichlet_fourier"] = r.dirichlet_fourier;
    j["dirichlet_grid"] = r.dirichlet_grid;
    j["douglas"] = r.douglas;
    j["royden"] = r.royden;
    j["residual_grid"] = r.residual_grid;
    j["residual_douglas"] = r.residual_douglas;
    return j;
}

// ------------------------------------------------------------------- config

/// "key = value" lines; '#' comments anywhere; keys and values trimmed.
/// Duplicate keys and malformed lines are reported as "<name>:<line>: ...".
[[nodiscard]] inline std::map<std::string, std::string> parse_config_stream(
    std::istream& in, const std::string& name) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const std::size_t h = line.find('#'); h != std::string::npos) line.resize(h);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        const std::string where = name + ":" + std::to_string(lineno);
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(where + ": expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument(where + ": empty key");
        if (value.empty()) throw std::invalid_argument(where + ": empty value for '" + key + "'");
        if (!out.emplace(key, value).second)
            throw std::invalid_argument(where + ": duplicate key '" + key + "'");
    }
    return out;
}

[[nodiscard]] inline std::map<std::string, std::string> parse_config_file(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return parse_config_stream(in, path);
}

}  // namespace segmap
