#include <catch2/catch_amalgamated.hpp>

#include <segmap/io.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace segmap;
using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

// One scratch directory per test binary run; files are overwritten freely.
fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "segmap_io_tests";
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& body) {
    fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << body;
    out.close();
    return p.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("one canonical double formatter", "[io]") {
    REQUIRE(format_double(1.0) == "1");
    REQUIRE(format_double(-0.5) == "-0.5");
    REQUIRE(format_double(0.1) == "0.10000000000000001");

    // 17 significant digits round-trip every double exactly.
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double x = u(rng) * std::pow(10.0, (i % 13) - 6);
        REQUIRE(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("node files: happy path and line-addressed errors", "[io]") {
    std::string good = write_file("phi_good.csv",
                                  "# theta,phi\n"
                                  "-1,-1\n"
                                  "0, 0  # flat from here\n"
                                  "0.5,0\n"
                                  "1,1\n");
    MonotonePhi p = load_monotone_phi(good);
    REQUIRE(p.size() == 4);
    REQUIRE(p.theta[2] == 0.5);
    REQUIRE(p.phi[3] == 1.0);

    std::string short_row = write_file("phi_short.csv", "-1,-1\n0.25\n1,1\n");
    REQUIRE_THROWS_WITH(load_monotone_phi(short_row),
                        ContainsSubstring("phi_short.csv:2: expected 2 comma-separated fields, got 1"));

    std::string bad_num = write_file("phi_bad.csv", "-1,-1\nx,0\n");
    REQUIRE_THROWS_WITH(load_monotone_phi(bad_num),
                        ContainsSubstring("phi_bad.csv:2: not a number: 'x'"));

    std::string lonely = write_file("phi_lonely.csv", "0,0\n");
    REQUIRE_THROWS_WITH(load_monotone_phi(lonely), ContainsSubstring("need at least two nodes"));

    REQUIRE_THROWS_WITH(load_monotone_phi((scratch_dir() / "missing.csv").string()),
                        ContainsSubstring("cannot open"));
}

TEST_CASE("arc set files", "[io]") {
    std::string good = write_file("kept.csv", "-1,-0.5\n0.1,0.2\n");
    ArcSet k = load_arcset(good);
    REQUIRE(k.components.size() == 2);
    REQUIRE(k.components[0].lo == -1.0);
    REQUIRE(k.components[1].hi == 0.2);

    std::string empty = write_file("kept_empty.csv", "# nothing kept\n");
    REQUIRE(load_arcset(empty).empty());
}

TEST_CASE("coefficient files round-trip bitwise", "[io]") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    HarmonicMap m;
    m.N = 8;
    m.coeff.resize(17);
    for (auto& c : m.coeff) c = cplx(u(rng), u(rng));

    std::string path = (scratch_dir() / "coeff.csv").string();
    save_coefficients(path, m);
    HarmonicMap back = load_coefficients(path);
    REQUIRE(back.N == m.N);
    REQUIRE(back.coeff == m.coeff);

    // Sparse files leave missing modes at zero and set N from the largest |n|.
    std::string sparse = write_file("coeff_sparse.csv", "3,1,0\n-1,0,0.5\n");
    HarmonicMap s = load_coefficients(sparse);
    REQUIRE(s.N == 3);
    REQUIRE(s.c(3) == cplx(1.0, 0.0));
    REQUIRE(s.c(-1) == cplx(0.0, 0.5));
    REQUIRE(s.c(0) == cplx{});

    std::string dup = write_file("coeff_dup.csv", "1,0,0\n1,2,2\n");
    REQUIRE_THROWS_WITH(load_coefficients(dup), ContainsSubstring("duplicate coefficient n=1"));

    std::string huge = write_file("coeff_huge.csv", "100001,0,0\n");
    REQUIRE_THROWS_WITH(load_coefficients(huge), ContainsSubstring("coefficient order too large"));

    std::string none = write_file("coeff_none.csv", "# empty\n");
    REQUIRE_THROWS_WITH(load_coefficients(none), ContainsSubstring("no coefficients"));
}

TEST_CASE("polyline files", "[io]") {
    std::string path = (scratch_dir() / "poly.csv").string();
    save_polyline(path, {cplx{1.0, 0.0}, cplx{0.0, 0.5}});
    REQUIRE(read_file(path) == "# x,y\n1,0\n0,0.5\n");
}

TEST_CASE("report CSV: exact header and deterministic bytes", "[io]") {
    REQUIRE(std::string(report_csv_header)
            == "m,sup_err,bound_8w2_over_m,bound_21_over_m,E_f,E_fm_douglas,E_fm_fourier,"
               "energy_gap,min_slope,min_jacobian,quasi_lipschitz_margin");

    ConvergenceReport rep;
    ReportRow r;
    r.m = 4;
    r.sup_err = 0.5;
    r.bound_8w2_over_m = 0.25;
    r.bound_21_over_m = 5.25;
    r.e_f = 1.0;
    r.e_fm_douglas = 2.0;
    r.e_fm_fourier = 3.0;
    r.energy_gap = 2.0;
    r.min_slope = 0.1;
    r.min_jacobian = 0.01;
    r.ql_margin = 0.125;
    rep.rows.push_back(r);

    std::ostringstream a, b;
    write_report_csv(a, rep);
    write_report_csv(b, rep);
    REQUIRE(a.str() == b.str());
    REQUIRE(a.str() == std::string(report_csv_header) +
                           "\n4,0.5,0.25,5.25,1,2,3,2,0.10000000000000001,0.01,0.125\n");
}

TEST_CASE("probe CSV layout", "[io]") {
    ProbeRun run;
    ChordArcProbe p;
    p.ia = 0;
    p.ib = 9;
    p.boundary_len = 0.5;
    p.chord = 0.25;
    p.ratio = 2.0;
    run.probes.push_back(p);
    std::ostringstream os;
    write_probes_csv(os, run);
    REQUIRE(os.str() == "probe_id,boundary_len,gamma_len,ratio\n0,0.5,0.25,2\n");
}

TEST_CASE("report JSON: stable key order and verdict payload", "[io]") {
    ConvergenceReport rep;
    rep.spec.omega = 1.0;
    rep.spec.preset = PhiPreset::identity;
    rep.e_f = 2.0;
    ReportRow r;
    r.m = 8;
    rep.rows.push_back(r);

    ordered_json j = report_json(rep, {{"uniform-bound", true, "ok"}});
    std::string s = j.dump();
    REQUIRE(s.rfind("{\"omega\":", 0) == 0);  // insertion order preserved
    REQUIRE(s.find("\"preset\":\"identity\"") != std::string::npos);
    REQUIRE(j["rows"].size() == 1);
    REQUIRE(j["rows"][0]["m"] == 8);
    REQUIRE(j["verdicts"][0]["name"] == "uniform-bound");
    REQUIRE(j["verdicts"][0]["pass"] == true);

    EnergyReport er;
    er.dirichlet_fourier = 1.0;
    ordered_json ej = energy_report_json(er);
    std::string es = ej.dump();
    const char* keys[] = {"dirichlet_fourier", "dirichlet_grid", "douglas",
                          "royden",            "residual_grid",  "residual_douglas"};
    std::size_t last = 0;
    for (const char* k : keys) {
        std::size_t at = es.find(std::string("\"") + k + "\"");
        REQUIRE(at != std::string::npos);
        REQUIRE(at >= last);
        last = at;
    }
}

TEST_CASE("config reader: key = value with comments", "[io]") {
    std::istringstream in(
        "omega = 1.0471975511965976\n"
        "# full ladder\n"
        "m = 4,8,16\n"
        "out= run.csv   # trailing comment\n"
        "\n"
        "threads =2\n");
    auto cfg = parse_config_stream(in, "cfg");
    REQUIRE(cfg.size() == 4);
    REQUIRE(cfg.at("omega") == "1.0471975511965976");
    REQUIRE(cfg.at("m") == "4,8,16");
    REQUIRE(cfg.at("out") == "run.csv");
    REQUIRE(cfg.at("threads") == "2");

    std::istringstream dup("a = 1\na = 2\n");
    REQUIRE_THROWS_WITH(parse_config_stream(dup, "cfg"), "cfg:2: duplicate key 'a'");

    std::istringstream noeq("just words\n");
    REQUIRE_THROWS_WITH(parse_config_stream(noeq, "cfg"), "cfg:1: expected key = value");

    std::istringstream novalue("x =   # comment ate it\n");
    REQUIRE_THROWS_WITH(parse_config_stream(novalue, "cfg"), "cfg:1: empty value for 'x'");

    std::istringstream nokey(" = 3\n");
    REQUIRE_THROWS_WITH(parse_config_stream(nokey, "cfg"), "cfg:1: empty key");

    std::string path = write_file("run.cfg", "omega = 0.9\n");
    REQUIRE(parse_config_file(path).at("omega") == "0.9");
    REQUIRE_THROWS_WITH(parse_config_file((scratch_dir() / "nope.cfg").string()),
                        ContainsSubstring("cannot open"));
}
