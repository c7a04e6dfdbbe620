// spectral_density.cpp — Spectral-density evaluation, truncation and quadrature helpers

#include "sdprobe/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sdprobe/quadrature.hpp"

namespace sdprobe {

namespace {

double lorentzian_value(const LorentzianParams& p, double w) noexcept {
    const double x = w - p.omega1;
    return p.g * p.g / std::numbers::pi * p.gamma1 / (p.gamma1 * p.gamma1 + x * x);
}

double ohmic_value(const OhmicParams& p, double w) noexcept {
    if (w < 0.0) return 0.0;
    return p.alpha * w * std::exp(-w / p.omega_c);
}

double band_gap_value(const BandGapParams& p, double w) noexcept {
    if (w <= p.edge) return 0.0;
    return p.strength * std::sqrt(w - p.edge);
}

// x − ln x = c for the branch x > 1 (ohmic tail in units of ω_c).
double ohmic_tail_point(double fraction) {
    const double c = 1.0 - std::log(fraction);
    double x = c;
    for (int i = 0; i < 100; ++i) {
        const double next = c + std::log(x);
        if (std::abs(next - x) < 1e-14 * x) return next;
        x = next;
    }
    return x;
}

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

} // namespace

std::string_view to_string(SdKind kind) noexcept {
    switch (kind) {
        case SdKind::flat: return "flat";
        case SdKind::lorentzian: return "lorentzian";
        case SdKind::ohmic: return "ohmic";
        case SdKind::band_gap: return "band_gap";
        case SdKind::tabulated: return "tabulated";
        case SdKind::zero: return "zero";
    }
    return "zero";
}

SdKind parse_sd_kind(std::string_view name) {
    for (SdKind k : {SdKind::flat, SdKind::lorentzian, SdKind::ohmic, SdKind::band_gap,
                     SdKind::tabulated, SdKind::zero}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown spectral density kind: " + std::string(name));
}

TabulatedSD::TabulatedSD(std::vector<double> omega, std::vector<double> J)
    : omega_(std::move(omega)), J_(std::move(J)) {
    require(omega_.size() == J_.size(), "tabulated SD: omega and J lengths differ");
    require(omega_.size() >= 2, "tabulated SD: need at least two samples");
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        require(std::isfinite(omega_[i]) && std::isfinite(J_[i]), "tabulated SD: non-finite sample");
        require(J_[i] >= 0.0, "tabulated SD: negative J sample");
        if (i > 0) require(omega_[i] > omega_[i - 1], "tabulated SD: omega not strictly increasing");
    }
}

double TabulatedSD::operator()(double w) const noexcept {
    if (w < omega_.front() || w > omega_.back()) return 0.0;
    auto it = std::upper_bound(omega_.begin(), omega_.end(), w);
    if (it == omega_.end()) return J_.back();
    const std::size_t hi = static_cast<std::size_t>(it - omega_.begin());
    const std::size_t lo = hi - 1;
    if (w == omega_[lo]) return J_[lo];
    const double s = (w - omega_[lo]) / (omega_[hi] - omega_[lo]);
    return J_[lo] + s * (J_[hi] - J_[lo]);
}

SpectralDensity::SpectralDensity(SdKind kind, Params params, Support support)
    : kind_(kind), params_(std::move(params)), support_(support) {}

SpectralDensity SpectralDensity::flat(double level, Support support) {
    require(std::isfinite(level) && level >= 0.0, "flat SD: level must be >= 0");
    require(support.hi > support.lo, "flat SD: empty support");
    return {SdKind::flat, FlatParams{level}, support};
}

SpectralDensity SpectralDensity::lorentzian(LorentzianParams p, std::optional<Support> support) {
    require(p.g > 0.0, "lorentzian SD: g must be > 0");
    require(p.gamma1 > 0.0, "lorentzian SD: gamma1 must be > 0");
    if (!support) {
        const double reach = p.gamma1 * std::sqrt(1.0 / kTailFraction - 1.0);
        support = Support{p.omega1 - reach, p.omega1 + reach};
    }
    require(support->hi > support->lo, "lorentzian SD: empty support");
    return {SdKind::lorentzian, p, *support};
}

SpectralDensity SpectralDensity::ohmic(OhmicParams p, std::optional<Support> support) {
    require(p.alpha > 0.0, "ohmic SD: alpha must be > 0");
    require(p.omega_c > 0.0, "ohmic SD: omega_c must be > 0");
    if (!support) support = Support{0.0, p.omega_c * ohmic_tail_point(kTailFraction)};
    support->lo = std::max(support->lo, 0.0);
    require(support->hi > support->lo, "ohmic SD: empty support");
    return {SdKind::ohmic, p, *support};
}

SpectralDensity SpectralDensity::band_gap(BandGapParams p, double cutoff) {
    require(p.strength > 0.0, "band-gap SD: strength must be > 0");
    require(cutoff > p.edge, "band-gap SD: cutoff must lie above the band edge");
    return {SdKind::band_gap, p, Support{p.edge, cutoff}};
}

SpectralDensity SpectralDensity::tabulated(TabulatedSD table) {
    const Support s{table.omega().front(), table.omega().back()};
    return {SdKind::tabulated, std::move(table), s};
}

SpectralDensity SpectralDensity::zero() {
    return {SdKind::zero, std::monostate{}, Support{0.0, 0.0}};
}

double SpectralDensity::operator()(double w) const noexcept {
    if (kind_ == SdKind::zero || !support_.contains(w)) return 0.0;
    switch (kind_) {
        case SdKind::flat: return std::get<FlatParams>(params_).level;
        case SdKind::lorentzian: return lorentzian_value(std::get<LorentzianParams>(params_), w);
        case SdKind::ohmic: return ohmic_value(std::get<OhmicParams>(params_), w);
        case SdKind::band_gap: return band_gap_value(std::get<BandGapParams>(params_), w);
        case SdKind::tabulated: return std::get<TabulatedSD>(params_)(w);
        case SdKind::zero: return 0.0;
    }
    return 0.0;
}

double SpectralDensity::peak() const noexcept {
    switch (kind_) {
        case SdKind::flat: return std::get<FlatParams>(params_).level;
        case SdKind::lorentzian: {
            const auto& p = std::get<LorentzianParams>(params_);
            const double w = std::clamp(p.omega1, support_.lo, support_.hi);
            return lorentzian_value(p, w);
        }
        case SdKind::ohmic: {
            const auto& p = std::get<OhmicParams>(params_);
            return ohmic_value(p, std::clamp(p.omega_c, support_.lo, support_.hi));
        }
        case SdKind::band_gap: return band_gap_value(std::get<BandGapParams>(params_), support_.hi);
        case SdKind::tabulated: {
            const auto v = std::get<TabulatedSD>(params_).values();
            return *std::max_element(v.begin(), v.end());
        }
        case SdKind::zero: return 0.0;
    }
    return 0.0;
}

std::vector<double> SpectralDensity::breakpoints() const {
    std::vector<double> cuts;
    if (kind_ == SdKind::zero) return cuts;
    cuts.push_back(support_.lo);
    cuts.push_back(support_.hi);
    switch (kind_) {
        case SdKind::lorentzian: {
            const auto& p = std::get<LorentzianParams>(params_);
            cuts.push_back(p.omega1);
            for (double scale = 1.0; scale < 1e7; scale *= 10.0) {
                cuts.push_back(p.omega1 - scale * p.gamma1);
                cuts.push_back(p.omega1 + scale * p.gamma1);
            }
            break;
        }
        case SdKind::ohmic: {
            const auto& p = std::get<OhmicParams>(params_);
            for (double m : {0.1, 1.0, 3.0, 10.0}) cuts.push_back(m * p.omega_c);
            break;
        }
        case SdKind::band_gap: {
            const double w = support_.width();
            for (double m : {1e-6, 1e-4, 1e-2}) cuts.push_back(support_.lo + m * w);
            break;
        }
        case SdKind::tabulated: {
            const auto om = std::get<TabulatedSD>(params_).omega();
            cuts.insert(cuts.end(), om.begin(), om.end());
            break;
        }
        default: break;
    }
    std::erase_if(cuts, [this](double c) { return c < support_.lo || c > support_.hi; });
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

double eval_sd(const SpectralDensity& sd, double w) noexcept { return sd(w); }

double sd_integral(const SpectralDensity& sd) {
    if (sd.is_zero()) return 0.0;
    const auto cuts = sd.breakpoints();
    quad::Options opt;
    opt.rel_tol = 1e-11;
    return quad::integrate([&sd](double w) { return sd(w); }, cuts, opt).value;
}

} // namespace sdprobe
