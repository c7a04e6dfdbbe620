// dynamics.hpp — Excited-state amplitude ε(t) of a two-level emitter in a zero-temperature bath
//
// Three independent routes:
//   emission_dynamics     inverse transform of ε̃(ω) (spectral-measure form)
//   discrete_bath_oracle  brute-force single-excitation ODE over a discretised bath
//   pseudomode_dynamics   exact two-mode model, valid for an untruncated Lorentzian

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "sdprobe/forward.hpp"
#include "sdprobe/spectral_density.hpp"

namespace sdprobe {

struct EmissionHistory {
    std::vector<double> times;
    std::vector<cplx> eps;

    std::size_t size() const noexcept { return times.size(); }
    double population(std::size_t i) const { return std::norm(eps[i]); }
};

struct BoundState {
    double omega{0.0};
    double weight{0.0};  // residue 1/(1 − dP/dω) at the pole
};

struct InversionOptions {
    quad::Options quadrature{1e-10, 1e-300, 200000, 0.0};
    // Allowed deficit of the spectral sum rule (total weight = |ε(0)|).
    double sum_rule_tol{1e-4};
    // Panels wider than resolution/t_max count as unresolved.
    double resolution{2.0};
    double window_tail{1e-8};
};

// Norm drift of the discrete bath scales like the local tolerance; 1e-10
// keeps it an order of magnitude inside norm_tol.
struct StepperOptions {
    double abs_tol{1e-11};
    double rel_tol{1e-10};
    double norm_tol{1e-8};
    double window_tail{1e-8};
};

// Frequency window used by the time-domain routes: the part of the support
// around ω₀ and the peak of J outside which the spectral measure
// J/[(ω − ω₀ − P)² + (πJ)²] stays below tail × its maximum.
Support dynamics_window(const SpectralDensity& sd, double omega0, double tail = 1e-8);

// Uniform sample times 0, …, t_max.
std::vector<double> sample_times(double t_max, std::size_t n_t);

// Real poles of ε̃ outside the support (bound / dressed states).
std::vector<BoundState> bound_states(const SpectralDensity& sd, double omega0,
                                     const quad::Options& opt = {});

// ε(t) = Σ_b Z_b e^{−iω_b t} + ∫ J(ω) e^{−iωt} / [(ω − ω₀ − P(ω))² + (πJ(ω))²] dω.
// Throws WindowTooNarrow if the weights fail the sum rule.
EmissionHistory emission_dynamics(const SpectralDensity& sd, double omega0, double t_max,
                                  std::size_t n_t, const InversionOptions& opt = {});

// Midpoint discretisation into n_modes modes with μ_i = √(J(ω_i) Δω), integrated
// with an adaptive Dormand–Prince 5(4) pair in the frame rotating at ω₀.
// Throws StepperFailure when the total norm drifts beyond opt.norm_tol.
EmissionHistory discrete_bath_oracle(const SpectralDensity& sd, double omega0, std::size_t n_modes,
                                     double t_max, std::size_t n_t = 201,
                                     const StepperOptions& opt = {});

// Closed-form solution of ε̇ = −iω₀ε − ig b, ḃ = −(iω₁ + Γ₁)b − igε, ε(0) = 1.
EmissionHistory pseudomode_dynamics(const LorentzianParams& p, double omega0, double t_max,
                                    std::size_t n_t);

// −d ln|ε|²/dt from a least-squares line through points with |ε|² ≥ floor.
double fit_decay_rate(const EmissionHistory& h, double floor = 1e-8);

// sup_t ||ε₁(t)| − |ε₂(t)||; histories must share sample times.
double max_abs_deviation(const EmissionHistory& a, const EmissionHistory& b);

} // namespace sdprobe
