// forward.hpp — J(ω) → Σ(ω) → ε̃(ω) → W(ω) → (r, t, A) for a waveguide-coupled two-level probe
//
// Real frequencies are boundary values ω + i0⁺; no finite broadening is added.
// A pole of ε̃ on the real axis (possible only where J = 0) is carried as an
// infinite "divergent" marker and maps to perfect reflection r = −1, t = 0.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sdprobe/quadrature.hpp"
#include "sdprobe/spectral_density.hpp"

namespace sdprobe {

using cplx = std::complex<double>;

class FrequencyGrid {
public:
    explicit FrequencyGrid(std::vector<double> omega);

    // count evenly spaced points from lo to hi inclusive.
    static FrequencyGrid linspace(double lo, double hi, std::size_t count);

    std::size_t size() const noexcept { return omega_.size(); }
    double operator[](std::size_t i) const noexcept { return omega_[i]; }
    std::span<const double> values() const noexcept { return omega_; }
    auto begin() const noexcept { return omega_.begin(); }
    auto end() const noexcept { return omega_.end(); }

private:
    std::vector<double> omega_;
};

struct ProbeConfig {
    double omega0{0.0};    // qubit transition frequency
    double coupling{1.0};  // V, qubit–waveguide coupling
    double velocity{1.0};  // υ, group velocity
    FrequencyGrid grid{FrequencyGrid::linspace(-1.0, 1.0, 2)};

    // Γ_wg = V²/υ, emission rate of the qubit into the waveguide.
    double waveguide_rate() const noexcept { return coupling * coupling / velocity; }
    void validate() const;
};

// Σ(ω) = P(ω) − iπJ(ω) sampled on a grid.
struct SelfEnergy {
    FrequencyGrid grid;
    std::vector<double> P;
    std::vector<double> J;

    cplx operator[](std::size_t i) const;
};

struct EmissionAmplitude {
    FrequencyGrid grid;
    std::vector<cplx> values;  // ε̃(ω); divergent entries are infinite
};

// W = W_R − i W_I.
struct EffectivePotential {
    FrequencyGrid grid;
    std::vector<cplx> W;

    double real_part(std::size_t i) const { return W[i].real(); }
    double absorptive_part(std::size_t i) const { return -W[i].imag(); }
};

struct ScatteringSpectrum {
    FrequencyGrid grid;
    std::vector<cplx> r;
    std::vector<cplx> t;
    std::vector<double> A;  // absorbance, from the potential when available

    double reflectance(std::size_t i) const { return std::norm(r[i]); }
    double transmittance(std::size_t i) const { return std::norm(t[i]); }
    std::size_t size() const noexcept { return grid.size(); }
};

bool is_divergent(cplx z) noexcept;
cplx divergent_marker(double sign = 1.0) noexcept;

// Principal value of ∫ J(ω′)/(ω − ω′) dω′ over the support, by singularity
// subtraction. Frequencies on a support edge are nudged inward by 1e-12 of
// the support width before the logarithm is taken.
double principal_value(const SpectralDensity& sd, double w, const quad::Options& opt = {});

SelfEnergy self_energy(const SpectralDensity& sd, const FrequencyGrid& grid,
                       const quad::Options& opt = {});

// ε̃(ω) = 1/(ω − ω₀ − Σ(ω)).
EmissionAmplitude emission_amplitude(const SelfEnergy& se, double omega0);

// W(ω) = V² ε̃(ω).
EffectivePotential effective_potential(const EmissionAmplitude& amp, double coupling);

// r = −i(W/υ)/(1 + iW/υ), t = 1 + r, absorbance from the closed form
// A = 2(W_I/υ) / [(W_R/υ)² + (1 + W_I/υ)²].
ScatteringSpectrum reflection_transmission(const EffectivePotential& wp, double velocity);

double absorbance_from_potential(cplx W, double velocity) noexcept;

ScatteringSpectrum forward_spectrum(const SpectralDensity& sd, const ProbeConfig& cfg,
                                    const quad::Options& opt = {});

// Golden-rule decay rate 2πJ(ω₀).
double fgr_rate(const SpectralDensity& sd, double omega0) noexcept;

} // namespace sdprobe
