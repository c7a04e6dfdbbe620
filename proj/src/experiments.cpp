// experiments.cpp — Transmon and cavity+CPB coefficient models

#include "sdprobe/experiments.hpp"

#include <cmath>
#include <stdexcept>

namespace sdprobe {

namespace {

constexpr cplx kI{0.0, 1.0};

ScatteringSpectrum with_absorbance(FrequencyGrid grid, std::vector<cplx> r) {
    const std::size_t n = r.size();
    ScatteringSpectrum s{std::move(grid), std::move(r), std::vector<cplx>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        s.t[i] = 1.0 + s.r[i];
        s.A[i] = 1.0 - s.reflectance(i) - s.transmittance(i);
    }
    return s;
}

} // namespace

void TransmonModelParams::validate() const {
    if (!(gamma_eg > 0.0)) throw std::invalid_argument("transmon: gamma_eg must be > 0");
    if (!(gamma_l >= 0.0) || !(gamma_phi >= 0.0) || !(rabi >= 0.0)) {
        throw std::invalid_argument("transmon: rates must be >= 0");
    }
}

void CavityCpbModelParams::validate() const {
    if (!(gamma1 > 0.0)) throw std::invalid_argument("cavity/CPB: gamma1 must be > 0");
    if (!(g >= 0.0)) throw std::invalid_argument("cavity/CPB: g must be >= 0");
    if (!(coupling > 0.0) || !(velocity > 0.0)) {
        throw std::invalid_argument("cavity/CPB: coupling and velocity must be > 0");
    }
}

ScatteringSpectrum transmon_spectrum(const TransmonModelParams& p, const FrequencyGrid& grid) {
    p.validate();
    const double gamma = p.decoherence_rate();
    const double saturation = p.rabi * p.rabi / ((p.gamma_eg + p.gamma_l) * gamma);
    std::vector<cplx> r(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = (grid[i] - p.omega0) / gamma;
        r[i] = -(p.gamma_eg / (2.0 * gamma)) * (1.0 - kI * x) / (1.0 + x * x + saturation);
    }
    return with_absorbance(grid, std::move(r));
}

std::vector<double> transmon_flatness(const TransmonModelParams& p, const FrequencyGrid& grid) {
    p.validate();
    const double loss = p.gamma_eg + p.gamma_l + 2.0 * p.gamma_phi;
    const double base = 2.0 * (p.gamma_l + 2.0 * p.gamma_phi) / p.gamma_eg;
    const double drive = 4.0 * loss * loss * p.rabi * p.rabi / (p.gamma_eg * (p.gamma_eg + p.gamma_l));
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid[i] - p.omega0;
        f[i] = base + drive / (loss * loss + 4.0 * d * d);
    }
    return f;
}

ScatteringSpectrum cavity_cpb_spectrum(const CavityCpbModelParams& p, const FrequencyGrid& grid) {
    p.validate();
    const double rate = p.coupling * p.coupling / p.velocity;
    std::vector<cplx> r(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx cpb = grid[i] - p.omega1 + kI * p.gamma1;
        const cplx cavity = grid[i] - p.omega0 + kI * rate;
        r[i] = -kI * rate * cpb / (cpb * cavity - p.g * p.g);
    }
    return with_absorbance(grid, std::move(r));
}

SpectralDensity cavity_cpb_reservoir(const CavityCpbModelParams& p, std::optional<Support> support) {
    p.validate();
    return SpectralDensity::lorentzian({p.g, p.gamma1, p.omega1}, support);
}

double nonmarkovianity_ratio(const CavityCpbModelParams& p) {
    if (!(p.gamma1 > 0.0)) throw std::invalid_argument("nonmarkovianity ratio: gamma1 must be > 0");
    return 4.0 * p.g * p.g / (p.gamma1 * p.gamma1);
}

} // namespace sdprobe
