// forward.cpp — Self-energy quadrature and the single-photon scattering chain

#include "sdprobe/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sdprobe {

namespace {

constexpr double kEdgeNudge = 1e-12;
constexpr cplx kI{0.0, 1.0};

} // namespace

FrequencyGrid::FrequencyGrid(std::vector<double> omega) : omega_(std::move(omega)) {
    if (omega_.size() < 2) throw std::invalid_argument("frequency grid needs at least two points");
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        if (!std::isfinite(omega_[i])) throw std::invalid_argument("frequency grid: non-finite value");
        if (i > 0 && !(omega_[i] > omega_[i - 1])) {
            throw std::invalid_argument("frequency grid must be strictly increasing (index " +
                                        std::to_string(i) + ")");
        }
    }
}

FrequencyGrid FrequencyGrid::linspace(double lo, double hi, std::size_t count) {
    if (count < 2) throw std::invalid_argument("frequency grid needs at least two points");
    std::vector<double> w(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) w[i] = lo + step * static_cast<double>(i);
    w.back() = hi;
    return FrequencyGrid(std::move(w));
}

void ProbeConfig::validate() const {
    if (!(coupling > 0.0)) throw std::invalid_argument("probe coupling V must be > 0");
    if (!(velocity > 0.0)) throw std::invalid_argument("group velocity must be > 0");
    if (!std::isfinite(omega0)) throw std::invalid_argument("omega0 must be finite");
}

cplx SelfEnergy::operator[](std::size_t i) const { return {P[i], -std::numbers::pi * J[i]}; }

bool is_divergent(cplx z) noexcept { return std::isinf(z.real()) || std::isinf(z.imag()); }

cplx divergent_marker(double sign) noexcept {
    return {std::copysign(std::numeric_limits<double>::infinity(), sign), 0.0};
}

double principal_value(const SpectralDensity& sd, double w, const quad::Options& opt) {
    if (sd.is_zero()) return 0.0;
    const Support s = sd.support();
    std::vector<double> cuts = sd.breakpoints();

    if (s.contains(w)) {
        const double Jw = sd(w);
        cuts.push_back(w);
        std::sort(cuts.begin(), cuts.end());
        auto subtracted = [&sd, w, Jw](double x) {
            if (x == w) return 0.0;
            return (sd(x) - Jw) / (w - x);
        };
        const double regular = quad::integrate(subtracted, cuts, opt).value;
        if (Jw == 0.0) return regular;
        const double nudge = kEdgeNudge * s.width();
        const double wc = std::clamp(w, s.lo + nudge, s.hi - nudge);
        return regular + Jw * std::log((wc - s.lo) / (s.hi - wc));
    }

    // Proper integral; seed geometric cuts towards the nearer edge so the
    // near-singular end is resolved without deep bisection.
    const bool above = w > s.hi;
    const double edge = above ? s.hi : s.lo;
    const double dist = std::abs(w - edge);
    for (double d = dist; d < s.width(); d *= 8.0) cuts.push_back(above ? edge - d : edge + d);
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&sd, w](double x) { return sd(x) / (w - x); };
    return quad::integrate(integrand, cuts, opt).value;
}

SelfEnergy self_energy(const SpectralDensity& sd, const FrequencyGrid& grid, const quad::Options& opt) {
    SelfEnergy se{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        se.P[i] = principal_value(sd, grid[i], opt);
        se.J[i] = sd(grid[i]);
    }
    return se;
}

EmissionAmplitude emission_amplitude(const SelfEnergy& se, double omega0) {
    EmissionAmplitude out{se.grid, std::vector<cplx>(se.grid.size())};
    for (std::size_t i = 0; i < se.grid.size(); ++i) {
        const cplx denom{se.grid[i] - omega0 - se.P[i], std::numbers::pi * se.J[i]};
        out.values[i] = (denom == cplx{0.0, 0.0}) ? divergent_marker() : 1.0 / denom;
    }
    return out;
}

EffectivePotential effective_potential(const EmissionAmplitude& amp, double coupling) {
    const double v2 = coupling * coupling;
    EffectivePotential out{amp.grid, std::vector<cplx>(amp.values.size())};
    for (std::size_t i = 0; i < amp.values.size(); ++i) {
        out.W[i] = is_divergent(amp.values[i]) ? amp.values[i] : v2 * amp.values[i];
    }
    return out;
}

double absorbance_from_potential(cplx W, double velocity) noexcept {
    if (is_divergent(W)) return 0.0;
    const double wr = W.real() / velocity;
    const double wi = -W.imag() / velocity;
    return 2.0 * wi / (wr * wr + (1.0 + wi) * (1.0 + wi));
}

ScatteringSpectrum reflection_transmission(const EffectivePotential& wp, double velocity) {
    const std::size_t n = wp.W.size();
    ScatteringSpectrum out{wp.grid, std::vector<cplx>(n), std::vector<cplx>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        if (is_divergent(wp.W[i])) {
            out.r[i] = {-1.0, 0.0};
            out.t[i] = {0.0, 0.0};
            out.A[i] = 0.0;
            continue;
        }
        const cplx w = wp.W[i] / velocity;
        out.r[i] = -kI * w / (1.0 + kI * w);
        out.t[i] = 1.0 + out.r[i];
        out.A[i] = absorbance_from_potential(wp.W[i], velocity);
    }
    return out;
}

ScatteringSpectrum forward_spectrum(const SpectralDensity& sd, const ProbeConfig& cfg,
                                    const quad::Options& opt) {
    cfg.validate();
    const SelfEnergy se = self_energy(sd, cfg.grid, opt);
    const EmissionAmplitude amp = emission_amplitude(se, cfg.omega0);
    return reflection_transmission(effective_potential(amp, cfg.coupling), cfg.velocity);
}

double fgr_rate(const SpectralDensity& sd, double omega0) noexcept {
    return 2.0 * std::numbers::pi * sd(omega0);
}

} // namespace sdprobe
