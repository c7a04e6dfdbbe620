// experiments.hpp — Closed-form scattering models of two superconducting-circuit setups
//
// transmon:   qubit in an open line with intrinsic loss Γ_l, pure dephasing Γ_φ
//             and a classical drive Ω (field coefficients of the driven system).
// cavity_cpb: resonator on the line, Jaynes–Cummings coupled to a lossy
//             Cooper-pair box; equivalent to a Lorentzian reservoir.

#pragma once

#include "sdprobe/forward.hpp"
#include "sdprobe/spectral_density.hpp"

namespace sdprobe {

struct TransmonModelParams {
    double omega0{0.0};
    double gamma_eg{1.0};   // relaxation into the waveguide
    double gamma_l{0.0};    // intrinsic loss
    double gamma_phi{0.0};  // pure dephasing
    double rabi{0.0};       // Ω

    // γ = Γ_eg/2 + Γ_φ + Γ_l/2
    double decoherence_rate() const noexcept { return 0.5 * gamma_eg + gamma_phi + 0.5 * gamma_l; }
    // Ω > 0 leaves the single-photon regime the inversion formula assumes.
    bool extrapolated() const noexcept { return rabi > 0.0; }
    void validate() const;
};

struct CavityCpbModelParams {
    double omega0{0.0};  // cavity
    double omega1{0.0};  // CPB
    double gamma1{1.0};  // CPB dissipation
    double g{0.0};       // cavity–CPB coupling
    double coupling{1.0};
    double velocity{1.0};

    void validate() const;
};

// r = −(Γ_eg/2γ)(1 − iδω/γ) / [1 + (δω/γ)² + Ω²/((Γ_eg + Γ_l)γ)], t = 1 + r.
ScatteringSpectrum transmon_spectrum(const TransmonModelParams& p, const FrequencyGrid& grid);

// Closed-form (1 − R − T)/R of transmon_spectrum.
std::vector<double> transmon_flatness(const TransmonModelParams& p, const FrequencyGrid& grid);

// r = −i(V²/υ)(ω − ω₁ + iΓ₁) / [(ω − ω₁ + iΓ₁)(ω − ω₀ + iV²/υ) − g²], t = 1 + r.
ScatteringSpectrum cavity_cpb_spectrum(const CavityCpbModelParams& p, const FrequencyGrid& grid);

// The reservoir this setup presents to the cavity. Requires g > 0.
SpectralDensity cavity_cpb_reservoir(const CavityCpbModelParams& p, std::optional<Support> support = {});

// 4g²/Γ₁²; memory effects appear on resonance iff this exceeds 1.
double nonmarkovianity_ratio(const CavityCpbModelParams& p);

} // namespace sdprobe
