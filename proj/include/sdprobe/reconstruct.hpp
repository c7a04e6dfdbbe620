// reconstruct.hpp — Spectral density from reflectance and transmittance
//
//   J(ω) = (V²/2πυ) · (1 − R − T) / R
//
// The probe parameters V and υ are taken as exactly known. Negative J values
// produced by noise are reported as measured and flagged, never clamped.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sdprobe/forward.hpp"

namespace sdprobe {

enum class PointFlag { ok, low_reflectance, nonphysical_negative, flux_violation };

std::string_view to_string(PointFlag f) noexcept;
PointFlag parse_point_flag(std::string_view token);

struct MeasuredSpectrum {
    std::vector<double> omega;
    std::vector<double> R;
    std::vector<double> T;
    std::optional<std::vector<double>> sigma_R;
    std::optional<std::vector<double>> sigma_T;

    std::size_t size() const noexcept { return omega.size(); }
    bool has_uncertainty() const noexcept { return sigma_R.has_value() && sigma_T.has_value(); }

    // Throws GridMismatch on length mismatch, std::invalid_argument on
    // non-finite entries, negative sigmas, or a non-increasing grid.
    void validate() const;
};

MeasuredSpectrum measured_from(const ScatteringSpectrum& s);

struct ReconstructionOptions {
    double r_floor{1e-6};
    // Flux-violation threshold in units of the combined σ of R and T.
    double noise_sigmas{3.0};
    // Threshold on 1 − R − T when no uncertainties are given.
    double rounding_tol{1e-12};
};

struct ReconstructionResult {
    std::vector<double> omega;
    std::vector<double> J;  // NaN where the reflectance is below the floor
    std::vector<PointFlag> flags;
    std::optional<std::vector<double>> sigma_J;

    std::size_t size() const noexcept { return omega.size(); }
};

ReconstructionResult reconstruct_sd(const MeasuredSpectrum& ms, double coupling, double velocity,
                                    const ReconstructionOptions& opt = {});

struct FlatnessProfile {
    std::vector<double> omega;
    std::vector<double> f;
    std::vector<PointFlag> flags;
};

// f(ω) = (1 − R − T)/R with the same flagging as reconstruct_sd.
FlatnessProfile flatness_function(const MeasuredSpectrum& ms, const ReconstructionOptions& opt = {});

enum class Verdict { flat, structured };

struct VerdictOptions {
    double rel_tol{1e-2};
    // Spreads below this are flat regardless of the median (f ≡ 0 case).
    double abs_floor{1e-9};
    std::size_t min_points{8};
};

// flat iff (max f − min f) ≤ rel_tol·|median f| + abs_floor over unflagged
// finite points. Throws InsufficientData below opt.min_points such points.
Verdict markovianity_verdict(std::span<const double> f, std::span<const PointFlag> flags,
                             const VerdictOptions& opt = {});
Verdict markovianity_verdict(std::span<const double> f, const VerdictOptions& opt = {});

// reconstruct_sd plus first-order σ_J from σ_R, σ_T. Throws MissingUncertainty.
ReconstructionResult propagate_noise(const MeasuredSpectrum& ms, double coupling, double velocity,
                                     const ReconstructionOptions& opt = {});

// Copy of ms with independent Gaussian noise on R and T; sigma columns set.
MeasuredSpectrum add_gaussian_noise(const MeasuredSpectrum& ms, double sigma_R, double sigma_T,
                                    std::uint64_t seed);

// Empirical per-point standard deviation of reconstruct_sd over noisy replicas
// of ms (which must carry sigmas). Replica k is seeded from (seed, k).
std::vector<double> monte_carlo_sigma(const MeasuredSpectrum& ms, double coupling, double velocity,
                                      std::size_t replicas, std::uint64_t seed,
                                      const ReconstructionOptions& opt = {});

} // namespace sdprobe
