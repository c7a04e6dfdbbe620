// spectral_density.hpp — Reservoir spectral-density families J(ω)
//
// Every model carries a finite support [lo, hi] outside which J is exactly
// zero, so every downstream integral runs over a bounded domain. Frequencies
// are angular (ħ = 1); the unit itself is up to the caller.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace sdprobe {

enum class SdKind { flat, lorentzian, ohmic, band_gap, tabulated, zero };

std::string_view to_string(SdKind kind) noexcept;
SdKind parse_sd_kind(std::string_view name);

struct Support {
    double lo{0.0};
    double hi{0.0};

    bool contains(double w) const noexcept { return w >= lo && w <= hi; }
    double width() const noexcept { return hi - lo; }
};

struct FlatParams {
    double level{0.0};  // J₀
};

// J(ω) = (g²/π) Γ₁ / (Γ₁² + (ω − ω₁)²); integrates to g² over the real line.
struct LorentzianParams {
    double g{1.0};       // coupling rate
    double gamma1{1.0};  // half-width
    double omega1{0.0};  // centre
};

// J(ω) = α ω exp(−ω/ω_c) for ω ≥ 0.
struct OhmicParams {
    double alpha{0.05};
    double omega_c{1.0};
};

// J(ω) = C √(ω − ω_e) above the band edge ω_e, zero inside the gap ω ≤ ω_e,
// hard cutoff at the upper end of the support. The square-root onset is the
// usual isotropic band-edge density of states, chosen here as a modelling
// convention rather than anything derived for a specific material.
struct BandGapParams {
    double strength{1.0};  // C
    double edge{0.0};      // ω_e
};

// Linearly interpolated samples, zero outside [ω_first, ω_last].
class TabulatedSD {
public:
    TabulatedSD(std::vector<double> omega, std::vector<double> J);

    double operator()(double w) const noexcept;
    std::span<const double> omega() const noexcept { return omega_; }
    std::span<const double> values() const noexcept { return J_; }

private:
    std::vector<double> omega_;
    std::vector<double> J_;
};

class SpectralDensity {
public:
    using Params = std::variant<FlatParams, LorentzianParams, OhmicParams, BandGapParams,
                                TabulatedSD, std::monostate>;

    // Default truncation for open-ended families: where the tail falls below
    // this fraction of the peak value.
    static constexpr double kTailFraction = 1e-12;

    static SpectralDensity flat(double level, Support support);
    static SpectralDensity lorentzian(LorentzianParams p, std::optional<Support> support = {});
    static SpectralDensity ohmic(OhmicParams p, std::optional<Support> support = {});
    static SpectralDensity band_gap(BandGapParams p, double cutoff);
    static SpectralDensity tabulated(TabulatedSD table);
    static SpectralDensity zero();

    SdKind kind() const noexcept { return kind_; }
    const Support& support() const noexcept { return support_; }
    const Params& params() const noexcept { return params_; }
    bool is_zero() const noexcept { return kind_ == SdKind::zero; }

    double operator()(double w) const noexcept;

    // Maximum of J over the support.
    double peak() const noexcept;

    // Sorted cut points inside the support (including both ends) at which
    // quadrature panels should start: peaks, kinks, and decade markers of
    // long tails.
    std::vector<double> breakpoints() const;

private:
    SpectralDensity(SdKind kind, Params params, Support support);

    SdKind kind_;
    Params params_;
    Support support_;
};

double eval_sd(const SpectralDensity& sd, double w) noexcept;

// ∫ J(ω) dω over the support.
double sd_integral(const SpectralDensity& sd);

} // namespace sdprobe
