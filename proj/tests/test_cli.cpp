#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "sdprobe/io.hpp"

using namespace sdprobe;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sdprobe_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

const char* kFlat = R"({"kind":"flat","params":{"level":0.05},"support":[-50,50]})";
const char* kLorentzian = R"({"kind":"lorentzian","params":{"g":1,"gamma1":0.5,"omega1":0}})";

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({}).code == cli::kConfigError);
    CHECK(run({"nonsense"}).code == cli::kConfigError);
    CHECK(run({"forward", "--bogus"}).code == cli::kConfigError);
}

TEST_CASE("grid and noise specs") {
    const auto g = cli::parse_grid_spec("-1:1:5");
    CHECK(g.size() == 5);
    CHECK(g[0] == -1.0);
    CHECK(g[4] == 1.0);
    CHECK_THROWS_AS(cli::parse_grid_spec("1:2"), ParseError);
    CHECK_THROWS_AS(cli::parse_grid_spec("0:1:1"), ParseError);
    CHECK_THROWS_AS(cli::parse_grid_spec("0:1:2.5"), ParseError);
    CHECK_THROWS_AS(cli::parse_grid_spec("1:0:3"), ParseError);
    const auto n = cli::parse_noise_spec("0.01,0.02");
    CHECK(n.sigma_R == 0.01);
    CHECK(n.sigma_T == 0.02);
    CHECK_THROWS_AS(cli::parse_noise_spec("0.01"), ParseError);
    CHECK_THROWS_AS(cli::parse_noise_spec("-1,0"), ParseError);
}

// A is Lorentzian in ω with width V²/υ + πJ₀; near ω₀ it is flat to O(ω²).
TEST_CASE("forward: flat SD gives a constant-absorbance plateau") {
    const auto dir = scratch("fwd_flat");
    const auto r = run({"forward", "--sd", kFlat, "--grid", "-0.05:0.05:21", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto ms = io::read_measured_spectrum_csv(dir / "spectrum.csv");
    REQUIRE(ms.size() == 21);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const double A = 1.0 - ms.R[i] - ms.T[i];
        CHECK(A == doctest::Approx(1.0 - ms.R[10] - ms.T[10]).epsilon(1e-2));
    }
}

TEST_CASE("forward: zero SD never absorbs") {
    const auto dir = scratch("fwd_zero");
    REQUIRE(run({"forward", "--sd", R"({"kind":"zero"})", "--grid", "-1:1:20", "--out", dir.string()}).code == 0);
    std::istringstream in(slurp(dir / "spectrum.csv"));
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const double A = io::parse_double(line.substr(line.rfind(',') + 1));
        CHECK(std::abs(A) <= 1e-12);
        ++rows;
    }
    CHECK(rows == 20);
}

TEST_CASE("forward: lorentzian file matches the resonator + box generator") {
    const auto dir = scratch("fwd_lor");
    REQUIRE(run({"forward", "--sd", kLorentzian, "--grid", "-3:3:61", "--omega0", "0.2", "--out", dir.string()})
                .code == 0);
    std::istringstream in(slurp(dir / "spectrum.csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<double> v;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) v.push_back(io::parse_double(cell));
        const cplx r = oracle::cavity_cpb_r(v[0], 0.2, 0.0, 0.5, 1.0, 1.0, 1.0);
        CHECK(std::abs(cplx{v[1], v[2]} - r) <= 1e-8);
    }
}

TEST_CASE("forward output feeds reconstruct: flat verdict") {
    const auto dir = scratch("recon_flat");
    REQUIRE(run({"forward", "--sd", kFlat, "--grid", "-1:1:41", "--out", dir.string()}).code == 0);
    const auto r = run({"reconstruct", "--spectrum", (dir / "spectrum.csv").string(), "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("markovian: yes") != std::string::npos);
    std::istringstream in(slurp(dir / "reconstruction.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "omega,J,flag");
    std::getline(in, line);
    CHECK(line.find(",ok") != std::string::npos);

    const auto f = run({"flatness", "--spectrum", (dir / "spectrum.csv").string(), "--out", dir.string()});
    CHECK(f.code == 0);
    CHECK(f.out.find("markovian: yes") != std::string::npos);
    CHECK(fs::exists(dir / "flatness.csv"));
}

TEST_CASE("reconstruct: resonator + box spectrum is structured and lorentzian") {
    const auto dir = scratch("recon_lor");
    {
        std::ofstream os(dir / "in.csv");
        os << "omega,R,T\n";
        for (int k = 0; k <= 60; ++k) {
            const double w = -3.0 + 0.1 * k;
            const cplx r = oracle::cavity_cpb_r(w, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0);
            os << io::format_double(w) << ',' << io::format_double(std::norm(r)) << ','
               << io::format_double(std::norm(1.0 + r)) << '\n';
        }
    }
    const auto r = run({"reconstruct", "--spectrum", (dir / "in.csv").string(), "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("markovian: no") != std::string::npos);
    std::istringstream in(slurp(dir / "reconstruction.csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double w = io::parse_double(line.substr(0, c1));
        const double J = io::parse_double(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(J == doctest::Approx(oracle::lorentzian_J(1.0, 0.5, 0.0, w)).epsilon(1e-8));
    }
}

TEST_CASE("reconstruct: flux violations are flagged with a warning") {
    const auto dir = scratch("recon_flux");
    {
        std::ofstream os(dir / "in.csv");
        os << "omega,R,T\n0,0.5,0.6\n1,0.3,0.5\n2,0.6,0.6\n";
    }
    const auto r = run({"reconstruct", "--spectrum", (dir / "in.csv").string(), "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("2 rows flagged flux_violation") != std::string::npos);
    CHECK(r.out.find("markovian: undetermined") != std::string::npos);
    CHECK(slurp(dir / "reconstruction.csv").find("flux_violation") != std::string::npos);
}

TEST_CASE("reconstruct: noise option adds sigma_J") {
    const auto dir = scratch("recon_noise");
    REQUIRE(run({"forward", "--sd", kLorentzian, "--grid", "-1:1:11", "--out", dir.string()}).code == 0);
    const auto r = run({"reconstruct", "--spectrum", (dir / "spectrum.csv").string(), "--noise", "0.01,0.01",
                        "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "reconstruction.csv").rfind("omega,J,flag,sigma_J\n", 0) == 0);
}

TEST_CASE("exit codes") {
    const auto dir = scratch("codes");
    {
        std::ofstream os(dir / "bad.csv");
        os << "omega,R\n1,0.5\n";
    }
    CHECK(run({"reconstruct", "--spectrum", (dir / "bad.csv").string(), "--out", dir.string()}).code ==
          cli::kMalformedSpectrum);
    CHECK(run({"reconstruct", "--spectrum", (dir / "missing.csv").string(), "--out", dir.string()}).code ==
          cli::kMalformedSpectrum);
    CHECK(run({"reconstruct", "--out", dir.string()}).code == cli::kConfigError);
    CHECK(run({"forward", "--out", dir.string()}).code == cli::kConfigError);
    CHECK(run({"forward", "--sd", "{not json", "--out", dir.string()}).code == cli::kConfigError);
    CHECK(run({"forward", "--config", (dir / "nope.json").string()}).code == cli::kConfigError);
    {
        std::ofstream os(dir / "strict.json");
        os << R"({"sd":{"kind":"lorentzian","params":{"g":1,"gamma1":1,"omega1":0}},
                  "decay":{"t_max":2,"n_t":11,"n_modes":50,"norm_tol":1e-18}})";
    }
    const auto strict = run({"decay", "--config", (dir / "strict.json").string(), "--out", dir.string()});
    CHECK(strict.code == cli::kNumericFailure);
    CHECK(strict.err.find("norm drift") != std::string::npos);
}

TEST_CASE("noise injection is deterministic per seed and logged") {
    const auto a = scratch("seed_a");
    const auto b = scratch("seed_b");
    const auto c = scratch("seed_c");
    const std::vector<std::string> base{"forward", "--sd", kLorentzian, "--grid", "-2:2:31", "--noise", "0.01,0.01"};
    auto with = [&](const fs::path& dir, const char* seed) {
        auto args = base;
        args.insert(args.end(), {"--seed", seed, "--out", dir.string()});
        return run(args);
    };
    const auto ra = with(a, "17");
    REQUIRE(ra.code == 0);
    CHECK(ra.err.find("seed: 17") != std::string::npos);
    REQUIRE(with(b, "17").code == 0);
    REQUIRE(with(c, "18").code == 0);
    CHECK(slurp(a / "spectrum.csv") == slurp(b / "spectrum.csv"));
    CHECK(slurp(a / "spectrum.csv") != slurp(c / "spectrum.csv"));
    CHECK(slurp(a / "spectrum.csv").rfind("omega,re_r,im_r,re_t,im_t,R,T,A,sigma_R,sigma_T\n", 0) == 0);
}

TEST_CASE("decay: weak flat SD follows the golden rule") {
    const auto dir = scratch("decay_flat");
    const auto r = run({"decay", "--sd", R"({"kind":"flat","params":{"level":0.0159},"support":[-5,5]})", "--out",
                        dir.string()});
    REQUIRE(r.code == 0);
    const auto s = read_json(dir / "summary.json");
    const double ratio = s["fitted_rate"].get<double>() / s["fgr_rate"].get<double>();
    CHECK(ratio >= 0.95);
    CHECK(ratio <= 1.05);
    CHECK(fs::exists(dir / "emission.csv"));
    CHECK(fs::exists(dir / "discrete_bath.csv"));
}

TEST_CASE("decay: zero SD does not decay") {
    const auto dir = scratch("decay_zero");
    REQUIRE(run({"decay", "--sd", R"({"kind":"zero"})", "--out", dir.string()}).code == 0);
    const auto s = read_json(dir / "summary.json");
    CHECK(std::abs(s["fitted_rate"].get<double>()) < 1e-12);
    CHECK(s["fgr_rate"].get<double>() == 0.0);
}

TEST_CASE("decay and oracle: strong lorentzian") {
    const auto dir = scratch("decay_lor");
    const char* sd = R"({"kind":"lorentzian","params":{"g":3,"gamma1":0.5,"omega1":0}})";
    REQUIRE(run({"decay", "--sd", sd, "--out", dir.string()}).code == 0);
    CHECK(read_json(dir / "summary.json")["max_abs_deviation"].get<double>() < 1e-2);

    const auto o = run({"oracle", "--sd", sd, "--grid", "-2:2:21", "--out", dir.string()});
    REQUIRE(o.code == 0);
    const auto rep = read_json(dir / "oracle.json");
    CHECK(rep["inversion_vs_pseudomode"].get<double>() < 1e-3);
    CHECK(rep["discrete_bath_vs_pseudomode"].get<double>() < 1e-3);
    CHECK(rep["forward_vs_closed_form_max_abs_dr"].get<double>() < 1e-8);
    CHECK(fs::exists(dir / "pseudomode.csv"));
}

TEST_CASE("config file with flag overrides") {
    const auto dir = scratch("config");
    {
        std::ofstream os(dir / "run.json");
        os << R"({"probe":{"omega0":0.1,"V":1.2,"velocity":0.9},
                  "grid":{"min":-1,"max":1,"count":11},
                  "sd":{"kind":"ohmic","params":{"alpha":0.1,"omega_c":2}},
                  "out":"from_config"})";
    }
    const auto r = run({"forward", "--config", (dir / "run.json").string(), "--grid", "0.1:2:7", "--out",
                        (dir / "o").string()});
    REQUIRE(r.code == 0);
    const auto ms = io::read_measured_spectrum_csv(dir / "o" / "spectrum.csv");
    CHECK(ms.size() == 7);
    CHECK(ms.omega.back() == 2.0);

    const auto cfg = cli::config_from_json(nlohmann::json::parse(slurp(dir / "run.json")), dir);
    CHECK(cfg.probe.coupling == 1.2);
    CHECK(cfg.probe.grid.size() == 11);
    CHECK(cfg.out_dir == "from_config");
    CHECK_THROWS_AS(cli::config_from_json(nlohmann::json::parse(R"({"grid":{"min":0,"max":1,"count":-3}})"), dir),
                    ParseError);
    CHECK_THROWS_AS(cli::config_from_json(nlohmann::json::parse("[1,2]"), dir), ParseError);
}

TEST_CASE("experiment: transmon") {
    const auto dir = scratch("exp_transmon");
    {
        std::ofstream os(dir / "t.json");
        os << R"({"grid":{"min":-2,"max":2,"count":41},
                  "experiment":{"model":"transmon","params":{"omega0":0,"gamma_eg":1,"gamma_l":0.1,"gamma_phi":0.05,"rabi":0}}})";
    }
    const auto r = run({"experiment", "--config", (dir / "t.json").string(), "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("regime: single-photon") != std::string::npos);
    CHECK(r.out.find("markovian: yes") != std::string::npos);
    CHECK(fs::exists(dir / "spectrum.csv"));
    CHECK(fs::exists(dir / "flatness_closed_form.csv"));

    {
        std::ofstream os(dir / "t2.json");
        os << R"({"grid":{"min":-2,"max":2,"count":41},
                  "experiment":{"model":"transmon","params":{"gamma_eg":1,"rabi":0.5}}})";
    }
    const auto d = run({"experiment", "--config", (dir / "t2.json").string(), "--out", dir.string()});
    REQUIRE(d.code == 0);
    CHECK(d.out.find("regime: extrapolated") != std::string::npos);
    CHECK(d.out.find("markovian: no") != std::string::npos);
}

TEST_CASE("experiment: resonator + box in MHz") {
    const auto dir = scratch("exp_cavity");
    {
        std::ofstream os(dir / "c.json");
        os << R"({"grid":{"min":-20,"max":20,"count":81},
                  "experiment":{"model":"cavity_cpb","units":"mhz","params":{"omega0":0,"omega1":0,"gamma1":0.7,"g":5.8,"V":1}}})";
    }
    const auto r = run({"experiment", "--config", (dir / "c.json").string(), "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto pos = r.out.find("nonmarkovianity_ratio: ");
    REQUIRE(pos != std::string::npos);
    const double ratio = std::stod(r.out.substr(pos + 23));
    CHECK(ratio == doctest::Approx(274.6).epsilon(0.5 / 274.6));
    CHECK(r.out.find("non-markovian: yes") != std::string::npos);
    const auto ms = io::read_measured_spectrum_csv(dir / "spectrum.csv");
    CHECK(ms.omega.front() == -20.0);

    {
        std::ofstream os(dir / "bad.json");
        os << R"({"experiment":{"model":"laser"}})";
    }
    CHECK(run({"experiment", "--config", (dir / "bad.json").string(), "--out", dir.string()}).code ==
          cli::kConfigError);
}
