// reconstruct.cpp — Inversion of R/T spectra, flatness test and noise propagation

#include "sdprobe/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "sdprobe/errors.hpp"

namespace sdprobe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double probe_scale(double coupling, double velocity) {
    if (!(coupling > 0.0) || !(velocity > 0.0)) {
        throw std::invalid_argument("coupling and velocity must be > 0");
    }
    return coupling * coupling / (2.0 * std::numbers::pi * velocity);
}

double flux_tolerance(const MeasuredSpectrum& ms, std::size_t i, const ReconstructionOptions& opt) {
    if (!ms.has_uncertainty()) return opt.rounding_tol;
    const double sr = (*ms.sigma_R)[i];
    const double st = (*ms.sigma_T)[i];
    return std::max(opt.rounding_tol, opt.noise_sigmas * std::hypot(sr, st));
}

// Pointwise (1 − R − T)/R and its flag.
struct Ratio {
    double value;
    PointFlag flag;
};

Ratio loss_ratio(const MeasuredSpectrum& ms, std::size_t i, const ReconstructionOptions& opt) {
    const double R = ms.R[i];
    if (!(R >= opt.r_floor)) return {kNaN, PointFlag::low_reflectance};
    const double loss = 1.0 - R - ms.T[i];
    const double f = loss / R;
    if (loss < -flux_tolerance(ms, i, opt)) return {f, PointFlag::flux_violation};
    if (f < 0.0) return {f, PointFlag::nonphysical_negative};
    return {f, PointFlag::ok};
}

std::mt19937_64 replica_engine(std::uint64_t seed, std::uint64_t replica) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)};
    return std::mt19937_64(seq);
}

} // namespace

std::string_view to_string(PointFlag f) noexcept {
    switch (f) {
        case PointFlag::ok: return "ok";
        case PointFlag::low_reflectance: return "low_reflectance";
        case PointFlag::nonphysical_negative: return "nonphysical_negative";
        case PointFlag::flux_violation: return "flux_violation";
    }
    return "ok";
}

PointFlag parse_point_flag(std::string_view token) {
    for (PointFlag f : {PointFlag::ok, PointFlag::low_reflectance, PointFlag::nonphysical_negative,
                        PointFlag::flux_violation}) {
        if (to_string(f) == token) return f;
    }
    throw std::invalid_argument("unknown point flag: " + std::string(token));
}

void MeasuredSpectrum::validate() const {
    const std::size_t n = omega.size();
    if (R.size() != n || T.size() != n) throw GridMismatch("R/T arrays do not match the frequency grid");
    if (sigma_R.has_value() != sigma_T.has_value()) {
        throw std::invalid_argument("sigma_R and sigma_T must be given together");
    }
    if (has_uncertainty() && (sigma_R->size() != n || sigma_T->size() != n)) {
        throw GridMismatch("uncertainty arrays do not match the frequency grid");
    }
    if (n == 0) throw std::invalid_argument("empty spectrum");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(omega[i]) || !std::isfinite(R[i]) || !std::isfinite(T[i])) {
            throw std::invalid_argument("non-finite value in spectrum row " + std::to_string(i));
        }
        if (i > 0 && !(omega[i] > omega[i - 1])) {
            throw std::invalid_argument("spectrum frequencies must be strictly increasing");
        }
        if (has_uncertainty() && (!((*sigma_R)[i] >= 0.0) || !((*sigma_T)[i] >= 0.0))) {
            throw std::invalid_argument("uncertainties must be finite and >= 0");
        }
    }
}

MeasuredSpectrum measured_from(const ScatteringSpectrum& s) {
    MeasuredSpectrum ms;
    ms.omega.assign(s.grid.begin(), s.grid.end());
    ms.R.resize(s.size());
    ms.T.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        ms.R[i] = s.reflectance(i);
        ms.T[i] = s.transmittance(i);
    }
    return ms;
}

ReconstructionResult reconstruct_sd(const MeasuredSpectrum& ms, double coupling, double velocity,
                                    const ReconstructionOptions& opt) {
    ms.validate();
    const double scale = probe_scale(coupling, velocity);
    ReconstructionResult out;
    out.omega = ms.omega;
    out.J.resize(ms.size());
    out.flags.resize(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const Ratio q = loss_ratio(ms, i, opt);
        out.J[i] = scale * q.value;
        out.flags[i] = q.flag;
    }
    return out;
}

FlatnessProfile flatness_function(const MeasuredSpectrum& ms, const ReconstructionOptions& opt) {
    ms.validate();
    FlatnessProfile out;
    out.omega = ms.omega;
    out.f.resize(ms.size());
    out.flags.resize(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const Ratio q = loss_ratio(ms, i, opt);
        out.f[i] = q.value;
        out.flags[i] = q.flag;
    }
    return out;
}

Verdict markovianity_verdict(std::span<const double> f, std::span<const PointFlag> flags,
                             const VerdictOptions& opt) {
    if (!flags.empty() && flags.size() != f.size()) throw GridMismatch("flags do not match f values");
    std::vector<double> kept;
    kept.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!flags.empty() && flags[i] != PointFlag::ok) continue;
        if (std::isfinite(f[i])) kept.push_back(f[i]);
    }
    if (kept.size() < opt.min_points) {
        throw InsufficientData("markovianity verdict needs at least " + std::to_string(opt.min_points) +
                               " unflagged points, got " + std::to_string(kept.size()));
    }
    const auto [lo, hi] = std::minmax_element(kept.begin(), kept.end());
    const double spread = *hi - *lo;
    const std::size_t mid = kept.size() / 2;
    std::nth_element(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(mid), kept.end());
    double median = kept[mid];
    if (kept.size() % 2 == 0) {
        const double below = *std::max_element(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (median + below);
    }
    return spread <= opt.rel_tol * std::abs(median) + opt.abs_floor ? Verdict::flat : Verdict::structured;
}

Verdict markovianity_verdict(std::span<const double> f, const VerdictOptions& opt) {
    return markovianity_verdict(f, std::span<const PointFlag>{}, opt);
}

ReconstructionResult propagate_noise(const MeasuredSpectrum& ms, double coupling, double velocity,
                                     const ReconstructionOptions& opt) {
    if (!ms.has_uncertainty()) throw MissingUncertainty("noise propagation needs sigma_R and sigma_T");
    ReconstructionResult out = reconstruct_sd(ms, coupling, velocity, opt);
    const double scale = probe_scale(coupling, velocity);
    std::vector<double> sigma(ms.size(), kNaN);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (out.flags[i] == PointFlag::low_reflectance) continue;
        const double R = ms.R[i];
        const double dJ_dR = -scale * (1.0 - ms.T[i]) / (R * R);
        const double dJ_dT = -scale / R;
        sigma[i] = std::hypot(dJ_dR * (*ms.sigma_R)[i], dJ_dT * (*ms.sigma_T)[i]);
    }
    out.sigma_J = std::move(sigma);
    return out;
}

MeasuredSpectrum add_gaussian_noise(const MeasuredSpectrum& ms, double sigma_R, double sigma_T,
                                    std::uint64_t seed) {
    if (!(sigma_R >= 0.0) || !(sigma_T >= 0.0)) throw std::invalid_argument("noise sigmas must be >= 0");
    MeasuredSpectrum out = ms;
    auto rng = replica_engine(seed, 0);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        out.R[i] += sigma_R * unit(rng);
        out.T[i] += sigma_T * unit(rng);
    }
    out.sigma_R = std::vector<double>(ms.size(), sigma_R);
    out.sigma_T = std::vector<double>(ms.size(), sigma_T);
    return out;
}

std::vector<double> monte_carlo_sigma(const MeasuredSpectrum& ms, double coupling, double velocity,
                                      std::size_t replicas, std::uint64_t seed,
                                      const ReconstructionOptions& opt) {
    if (!ms.has_uncertainty()) throw MissingUncertainty("Monte-Carlo sigma needs sigma_R and sigma_T");
    ms.validate();
    const std::size_t n = ms.size();
    std::vector<double> sum(n, 0.0), sum2(n, 0.0);
    std::vector<std::size_t> count(n, 0);
    MeasuredSpectrum replica = ms;
    std::normal_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < replicas; ++k) {
        auto rng = replica_engine(seed, k + 1);
        for (std::size_t i = 0; i < n; ++i) {
            replica.R[i] = ms.R[i] + (*ms.sigma_R)[i] * unit(rng);
            replica.T[i] = ms.T[i] + (*ms.sigma_T)[i] * unit(rng);
        }
        const ReconstructionResult res = reconstruct_sd(replica, coupling, velocity, opt);
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(res.J[i])) continue;
            sum[i] += res.J[i];
            sum2[i] += res.J[i] * res.J[i];
            ++count[i];
        }
    }
    std::vector<double> sigma(n, kNaN);
    for (std::size_t i = 0; i < n; ++i) {
        if (count[i] < 2) continue;
        const double c = static_cast<double>(count[i]);
        const double mean = sum[i] / c;
        sigma[i] = std::sqrt(std::max(0.0, (sum2[i] - c * mean * mean) / (c - 1.0)));
    }
    return sigma;
}

} // namespace sdprobe
