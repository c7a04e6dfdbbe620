// cli.hpp — sdprobe command-line front end
//
// Subcommands: forward, reconstruct, flatness, decay, oracle, experiment.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure
// (quadrature, stepper, inversion window), 4 malformed spectrum file.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdprobe/forward.hpp"
#include "sdprobe/reconstruct.hpp"

namespace sdprobe::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericFailure = 3, kMalformedSpectrum = 4 };

struct NoiseSpec {
    double sigma_R{0.0};
    double sigma_T{0.0};
};

struct DecaySpec {
    double t_max{10.0};
    std::size_t n_t{201};
    std::size_t n_modes{2000};
    double norm_tol{1e-8};
};

struct RunConfig {
    ProbeConfig probe;
    std::optional<nlohmann::json> sd;
    std::optional<std::filesystem::path> spectrum;
    std::optional<NoiseSpec> noise;
    std::uint64_t seed{0};
    std::filesystem::path out_dir{"."};
    std::filesystem::path base_dir{"."};
    ReconstructionOptions reconstruction;
    VerdictOptions verdict;
    DecaySpec decay;
    std::optional<nlohmann::json> experiment;
};

// "min:max:count"
FrequencyGrid parse_grid_spec(const std::string& spec);
// "sigmaR,sigmaT"
NoiseSpec parse_noise_spec(const std::string& spec);

// Throws sdprobe::ParseError on malformed input.
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sdprobe::cli
