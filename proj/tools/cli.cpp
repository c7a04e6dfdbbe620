// cli.cpp — Subcommand dispatch, configuration loading and output files

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sdprobe/dynamics.hpp"
#include "sdprobe/errors.hpp"
#include "sdprobe/experiments.hpp"
#include "sdprobe/io.hpp"

namespace sdprobe::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Flags {
    std::string config;
    std::string out;
    std::string grid;
    std::string noise;
    std::string spectrum;
    std::string sd;
    std::optional<std::uint64_t> seed;
    std::optional<double> omega0;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON run configuration");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--grid", f.grid, "frequency grid min:max:count");
    cmd->add_option("--seed", f.seed, "seed for noise injection and Monte-Carlo");
    cmd->add_option("--noise", f.noise, "Gaussian noise sigmaR,sigmaT on reflectance/transmittance");
    cmd->add_option("--spectrum", f.spectrum, "input spectrum CSV (omega,R,T[,sigma_R,sigma_T])");
    cmd->add_option("--omega0", f.omega0, "emitter (probe) frequency");
    cmd->add_option("--sd", f.sd, "spectral density as inline JSON {kind, params, support}");
}

double number(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) throw ParseError(std::string("config: '") + key + "' must be a number");
    return obj.at(key).get<double>();
}

std::size_t count(const json& obj, const char* key, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number_unsigned()) {
        throw ParseError(std::string("config: '") + key + "' must be a non-negative integer");
    }
    return obj.at(key).get<std::size_t>();
}

FrequencyGrid grid_from_json(const json& g) {
    try {
        if (g.is_array()) return FrequencyGrid(g.get<std::vector<double>>());
        if (g.is_object()) {
            return FrequencyGrid::linspace(number(g, "min", 0.0), number(g, "max", 0.0), count(g, "count", 0));
        }
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("grid: ") + e.what());
    } catch (const json::exception& e) {
        throw ParseError(std::string("grid: ") + e.what());
    }
    throw ParseError("grid must be {min, max, count} or an explicit array");
}

RunConfig load(const Flags& f) {
    RunConfig cfg;
    if (!f.config.empty()) {
        const fs::path path = f.config;
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open config " + path.string());
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("config: ") + e.what());
        }
        cfg = config_from_json(j, path.has_parent_path() ? path.parent_path() : fs::path{"."});
    }
    if (!f.grid.empty()) cfg.probe.grid = parse_grid_spec(f.grid);
    if (!f.noise.empty()) cfg.noise = parse_noise_spec(f.noise);
    if (f.seed) cfg.seed = *f.seed;
    if (f.omega0) cfg.probe.omega0 = *f.omega0;
    if (!f.out.empty()) cfg.out_dir = f.out;
    if (!f.spectrum.empty()) cfg.spectrum = fs::path(f.spectrum);
    if (!f.sd.empty()) {
        try {
            cfg.sd = json::parse(f.sd);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("--sd: ") + e.what());
        }
    }
    try {
        cfg.probe.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return cfg;
}

SpectralDensity require_sd(const RunConfig& cfg) {
    if (!cfg.sd) throw ParseError("this command needs a spectral density (config 'sd' or --sd)");
    return io::sd_from_json(*cfg.sd, cfg.base_dir);
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    const fs::path path = cfg.out_dir / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    return os;
}

MeasuredSpectrum load_spectrum(const RunConfig& cfg) {
    if (!cfg.spectrum) throw ParseError("this command needs an input spectrum (config 'spectrum' or --spectrum)");
    return io::read_measured_spectrum_csv(*cfg.spectrum);
}

// Malformed spectrum files are reported separately from configuration errors.
struct SpectrumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

MeasuredSpectrum load_spectrum_checked(const RunConfig& cfg) {
    if (!cfg.spectrum) throw ParseError("this command needs an input spectrum (config 'spectrum' or --spectrum)");
    try {
        return load_spectrum(cfg);
    } catch (const ParseError& e) {
        throw SpectrumError(cfg.spectrum->string() + ": " + e.what());
    } catch (const GridMismatch& e) {
        throw SpectrumError(cfg.spectrum->string() + ": " + e.what());
    }
}

void print_verdict(const FlatnessProfile& fp, const VerdictOptions& vopt, std::ostream& out, std::ostream& err) {
    try {
        const Verdict v = markovianity_verdict(fp.f, fp.flags, vopt);
        out << "markovian: " << (v == Verdict::flat ? "yes" : "no") << '\n';
    } catch (const InsufficientData& e) {
        out << "markovian: undetermined\n";
        err << "warning: " << e.what() << '\n';
    }
}

int cmd_forward(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SpectralDensity sd = require_sd(cfg);
    const ScatteringSpectrum s = forward_spectrum(sd, cfg.probe);
    auto os = open_output(cfg, "spectrum.csv");
    if (cfg.noise) {
        err << "seed: " << cfg.seed << '\n';
        const MeasuredSpectrum noisy =
            add_gaussian_noise(measured_from(s), cfg.noise->sigma_R, cfg.noise->sigma_T, cfg.seed);
        io::write_spectrum_csv(os, s, noisy);
    } else {
        io::write_spectrum_csv(os, s);
    }
    out << "wrote " << (cfg.out_dir / "spectrum.csv").string() << '\n';
    return kOk;
}

int cmd_reconstruct(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    MeasuredSpectrum ms = load_spectrum_checked(cfg);
    if (cfg.noise && !ms.has_uncertainty()) {
        ms.sigma_R = std::vector<double>(ms.size(), cfg.noise->sigma_R);
        ms.sigma_T = std::vector<double>(ms.size(), cfg.noise->sigma_T);
    }
    const double V = cfg.probe.coupling;
    const double v = cfg.probe.velocity;
    const ReconstructionResult res = ms.has_uncertainty() ? propagate_noise(ms, V, v, cfg.reconstruction)
                                                          : reconstruct_sd(ms, V, v, cfg.reconstruction);
    auto os = open_output(cfg, "reconstruction.csv");
    io::write_reconstruction_csv(os, res);

    const auto violations = std::count(res.flags.begin(), res.flags.end(), PointFlag::flux_violation);
    if (violations > 0) err << "warning: " << violations << " rows flagged flux_violation\n";
    out << "wrote " << (cfg.out_dir / "reconstruction.csv").string() << '\n';
    print_verdict(flatness_function(ms, cfg.reconstruction), cfg.verdict, out, err);
    return kOk;
}

int cmd_flatness(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const MeasuredSpectrum ms = load_spectrum_checked(cfg);
    const FlatnessProfile fp = flatness_function(ms, cfg.reconstruction);
    auto os = open_output(cfg, "flatness.csv");
    io::write_flatness_csv(os, fp);
    out << "wrote " << (cfg.out_dir / "flatness.csv").string() << '\n';
    print_verdict(fp, cfg.verdict, out, err);
    return kOk;
}

json rate_or_null(const EmissionHistory& h) {
    try {
        return fit_decay_rate(h);
    } catch (const InsufficientData&) {
        return nullptr;
    }
}

EmissionHistory bath_history(const SpectralDensity& sd, const RunConfig& cfg) {
    StepperOptions opt;
    opt.norm_tol = cfg.decay.norm_tol;
    return discrete_bath_oracle(sd, cfg.probe.omega0, cfg.decay.n_modes, cfg.decay.t_max, cfg.decay.n_t, opt);
}

int cmd_decay(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const SpectralDensity sd = require_sd(cfg);
    const double w0 = cfg.probe.omega0;
    const EmissionHistory inv = emission_dynamics(sd, w0, cfg.decay.t_max, cfg.decay.n_t);
    const EmissionHistory bath = bath_history(sd, cfg);

    {
        auto os = open_output(cfg, "emission.csv");
        io::write_history_csv(os, inv);
    }
    {
        auto os = open_output(cfg, "discrete_bath.csv");
        io::write_history_csv(os, bath);
    }
    json summary;
    summary["fgr_rate"] = fgr_rate(sd, w0);
    summary["fitted_rate"] = rate_or_null(inv);
    summary["max_abs_deviation"] = max_abs_deviation(inv, bath);
    {
        auto os = open_output(cfg, "summary.json");
        os << summary.dump(2) << '\n';
    }
    out << summary.dump() << '\n';
    return kOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const SpectralDensity sd = require_sd(cfg);
    const double w0 = cfg.probe.omega0;
    const EmissionHistory inv = emission_dynamics(sd, w0, cfg.decay.t_max, cfg.decay.n_t);
    const EmissionHistory bath = bath_history(sd, cfg);

    json report;
    report["inversion_vs_discrete_bath"] = max_abs_deviation(inv, bath);
    {
        auto os = open_output(cfg, "emission.csv");
        io::write_history_csv(os, inv);
    }
    {
        auto os = open_output(cfg, "discrete_bath.csv");
        io::write_history_csv(os, bath);
    }
    if (sd.kind() == SdKind::lorentzian) {
        const auto& p = std::get<LorentzianParams>(sd.params());
        const EmissionHistory pm = pseudomode_dynamics(p, w0, cfg.decay.t_max, cfg.decay.n_t);
        report["inversion_vs_pseudomode"] = max_abs_deviation(inv, pm);
        report["discrete_bath_vs_pseudomode"] = max_abs_deviation(bath, pm);
        {
            auto os = open_output(cfg, "pseudomode.csv");
            io::write_history_csv(os, pm);
        }
        // Spectrum of the equivalent cavity + CPB circuit, from the closed form.
        const CavityCpbModelParams cp{w0, p.omega1, p.gamma1, p.g, cfg.probe.coupling, cfg.probe.velocity};
        const ScatteringSpectrum chain = forward_spectrum(sd, cfg.probe);
        const ScatteringSpectrum closed = cavity_cpb_spectrum(cp, cfg.probe.grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < chain.size(); ++i) worst = std::max(worst, std::abs(chain.r[i] - closed.r[i]));
        report["forward_vs_closed_form_max_abs_dr"] = worst;
    }
    {
        auto os = open_output(cfg, "oracle.json");
        os << report.dump(2) << '\n';
    }
    out << report.dump() << '\n';
    return kOk;
}

// Physical-units mode: inputs are ν = ω/2π (e.g. MHz); computation runs in
// angular units and the omega column is written back in the input unit.
double unit_scale(const json& e) {
    const std::string units = e.value("units", std::string("angular"));
    if (units == "angular") return 1.0;
    if (units == "mhz" || units == "MHz" || units == "cyclic") return 2.0 * std::numbers::pi;
    throw ParseError("experiment.units must be 'angular' or 'mhz'");
}

ScatteringSpectrum regrid(const ScatteringSpectrum& s, const FrequencyGrid& grid) {
    ScatteringSpectrum out = s;
    out.grid = grid;
    return out;
}

FrequencyGrid scaled(const FrequencyGrid& g, double k) {
    std::vector<double> w(g.begin(), g.end());
    for (auto& x : w) x *= k;
    return FrequencyGrid(std::move(w));
}

int cmd_experiment(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    if (!cfg.experiment) throw ParseError("experiment needs a config 'experiment' block");
    const json& e = *cfg.experiment;
    const json params = e.value("params", json::object());
    const std::string model = e.value("model", std::string());
    const double k = unit_scale(e);
    const FrequencyGrid grid = scaled(cfg.probe.grid, k);

    if (model == "transmon") {
        TransmonModelParams p;
        p.omega0 = k * number(params, "omega0", 0.0);
        p.gamma_eg = k * number(params, "gamma_eg", 1.0);
        p.gamma_l = k * number(params, "gamma_l", 0.0);
        p.gamma_phi = k * number(params, "gamma_phi", 0.0);
        p.rabi = k * number(params, "rabi", 0.0);
        try {
            p.validate();
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ex.what());
        }
        const ScatteringSpectrum s = transmon_spectrum(p, grid);
        {
            auto os = open_output(cfg, "spectrum.csv");
            io::write_spectrum_csv(os, regrid(s, cfg.probe.grid));
        }
        const auto f = transmon_flatness(p, grid);
        {
            auto os = open_output(cfg, "flatness_closed_form.csv");
            os << "omega,f\n";
            for (std::size_t i = 0; i < f.size(); ++i) {
                os << io::format_double(cfg.probe.grid[i]) << ',' << io::format_double(f[i]) << '\n';
            }
        }
        out << "regime: " << (p.extrapolated() ? "extrapolated" : "single-photon") << '\n';
        const Verdict v = markovianity_verdict(f, cfg.verdict);
        out << "markovian: " << (v == Verdict::flat ? "yes" : "no") << '\n';
        return kOk;
    }
    if (model == "cavity_cpb") {
        CavityCpbModelParams p;
        p.omega0 = k * number(params, "omega0", 0.0);
        p.omega1 = k * number(params, "omega1", 0.0);
        p.gamma1 = k * number(params, "gamma1", 1.0);
        p.g = k * number(params, "g", 0.0);
        // V²/υ is a rate, so V carries √k.
        p.coupling = std::sqrt(k) * number(params, "V", cfg.probe.coupling);
        p.velocity = number(params, "velocity", cfg.probe.velocity);
        try {
            p.validate();
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ex.what());
        }
        const ScatteringSpectrum s = cavity_cpb_spectrum(p, grid);
        {
            auto os = open_output(cfg, "spectrum.csv");
            io::write_spectrum_csv(os, regrid(s, cfg.probe.grid));
        }
        const double ratio = nonmarkovianity_ratio(p);
        out << "nonmarkovianity_ratio: " << io::format_double(ratio) << '\n';
        out << "non-markovian: " << (ratio > 1.0 ? "yes" : "no") << '\n';
        return kOk;
    }
    throw ParseError("experiment.model must be 'transmon' or 'cavity_cpb'");
}

} // namespace

FrequencyGrid parse_grid_spec(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = first == std::string::npos ? std::string::npos : spec.find(':', first + 1);
    if (second == std::string::npos) throw ParseError("--grid expects min:max:count");
    try {
        const double lo = io::parse_double(spec.substr(0, first));
        const double hi = io::parse_double(spec.substr(first + 1, second - first - 1));
        const double n = io::parse_double(spec.substr(second + 1));
        if (!(n >= 2.0) || n != std::floor(n)) throw ParseError("--grid count must be an integer >= 2");
        return FrequencyGrid::linspace(lo, hi, static_cast<std::size_t>(n));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("--grid: ") + e.what());
    }
}

NoiseSpec parse_noise_spec(const std::string& spec) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos) throw ParseError("--noise expects sigmaR,sigmaT");
    NoiseSpec n{io::parse_double(spec.substr(0, comma)), io::parse_double(spec.substr(comma + 1))};
    if (!(n.sigma_R >= 0.0) || !(n.sigma_T >= 0.0)) throw ParseError("--noise sigmas must be >= 0");
    return n;
}

RunConfig config_from_json(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    RunConfig cfg;
    cfg.base_dir = base_dir;
    try {
        if (j.contains("probe")) {
            const json& p = j.at("probe");
            cfg.probe.omega0 = number(p, "omega0", 0.0);
            cfg.probe.coupling = number(p, "V", 1.0);
            cfg.probe.velocity = number(p, "velocity", 1.0);
        }
        if (j.contains("grid")) cfg.probe.grid = grid_from_json(j.at("grid"));
        if (j.contains("sd")) cfg.sd = j.at("sd");
        if (j.contains("spectrum")) {
            fs::path sp = j.at("spectrum").get<std::string>();
            cfg.spectrum = sp.is_relative() ? base_dir / sp : sp;
        }
        if (j.contains("noise")) {
            const json& n = j.at("noise");
            cfg.noise = NoiseSpec{number(n, "sigma_R", 0.0), number(n, "sigma_T", 0.0)};
            if (n.contains("seed")) cfg.seed = n.at("seed").get<std::uint64_t>();
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
        if (j.contains("reconstruct")) {
            const json& r = j.at("reconstruct");
            cfg.reconstruction.r_floor = number(r, "r_floor", cfg.reconstruction.r_floor);
            cfg.reconstruction.noise_sigmas = number(r, "noise_sigmas", cfg.reconstruction.noise_sigmas);
            cfg.verdict.rel_tol = number(r, "rel_tol", cfg.verdict.rel_tol);
        }
        if (j.contains("decay")) {
            const json& d = j.at("decay");
            cfg.decay.t_max = number(d, "t_max", cfg.decay.t_max);
            cfg.decay.n_t = count(d, "n_t", cfg.decay.n_t);
            cfg.decay.n_modes = count(d, "n_modes", cfg.decay.n_modes);
            cfg.decay.norm_tol = number(d, "norm_tol", cfg.decay.norm_tol);
        }
        if (j.contains("experiment")) cfg.experiment = j.at("experiment");
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sdprobe: waveguide-probe spectral density toolkit"};
    app.name("sdprobe");
    app.require_subcommand(1);
    Flags flags;
    struct Command {
        const char* name;
        const char* help;
        int (*fn)(const RunConfig&, std::ostream&, std::ostream&);
        CLI::App* sub{nullptr};
    };
    std::vector<Command> commands{
        {"forward", "simulate reflection/transmission spectra for a spectral density", cmd_forward},
        {"reconstruct", "reconstruct the spectral density from an R/T spectrum", cmd_reconstruct},
        {"flatness", "evaluate f(w) = (1-R-T)/R and the Markovianity verdict", cmd_flatness},
        {"decay", "emission dynamics, discrete-bath oracle and golden-rule comparison", cmd_decay},
        {"oracle", "cross-check dynamics routes (and pseudomode for Lorentzians)", cmd_oracle},
        {"experiment", "closed-form transmon or cavity+CPB coefficient models", cmd_experiment},
    };
    for (auto& c : commands) {
        c.sub = app.add_subcommand(c.name, c.help);
        add_common_flags(c.sub, flags);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    for (const auto& c : commands) {
        if (!c.sub->parsed()) continue;
        try {
            return c.fn(load(flags), out, err);
        } catch (const SpectrumError& e) {
            err << "error: malformed spectrum: " << e.what() << '\n';
            return kMalformedSpectrum;
        } catch (const ParseError& e) {
            err << "error: " << e.what() << '\n';
            return kConfigError;
        } catch (const QuadratureFailure& e) {
            err << "error: " << e.what() << '\n';
            return kNumericFailure;
        } catch (const StepperFailure& e) {
            err << "error: " << e.what() << '\n';
            return kNumericFailure;
        } catch (const WindowTooNarrow& e) {
            err << "error: " << e.what() << '\n';
            return kNumericFailure;
        } catch (const std::invalid_argument& e) {
            err << "error: " << e.what() << '\n';
            return kConfigError;
        }
    }
    return kConfigError;
}

} // namespace sdprobe::cli
