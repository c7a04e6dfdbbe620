// dynamics.cpp — Time-domain emission: spectral inversion, discrete bath, pseudomode

#include "sdprobe/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "sdprobe/errors.hpp"

namespace sdprobe {

namespace {

std::string format_sci(double x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << x;
    return os.str();
}

constexpr double kEdgeNudge = 1e-12;
constexpr cplx kI{0.0, 1.0};

EmissionHistory free_evolution(double omega0, const std::vector<double>& times) {
    EmissionHistory h{times, std::vector<cplx>(times.size())};
    for (std::size_t k = 0; k < times.size(); ++k) h.eps[k] = std::polar(1.0, -omega0 * times[k]);
    return h;
}

void check_time_args(double t_max, std::size_t n_t) {
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
    if (n_t < 2) throw std::invalid_argument("need at least two time samples");
}

// Pole residue 1/(1 + ∫ J(x)/(ω − x)² dx) for ω outside the support.
double pole_weight(const SpectralDensity& sd, double w, const quad::Options& opt) {
    const Support s = sd.support();
    std::vector<double> cuts = sd.breakpoints();
    const bool above = w > s.hi;
    const double edge = above ? s.hi : s.lo;
    for (double d = std::abs(w - edge); d < s.width(); d *= 8.0) cuts.push_back(above ? edge - d : edge + d);
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&sd, w](double x) {
        const double d = w - x;
        return sd(x) / (d * d);
    };
    return 1.0 / (1.0 + quad::integrate(integrand, cuts, opt).value);
}

double spectral_measure(const SpectralDensity& sd, double omega0, double w) {
    const double J = sd(w);
    if (J == 0.0) return 0.0;
    const double x = w - omega0 - principal_value(sd, w);
    const double y = std::numbers::pi * J;
    return J / (x * x + y * y);
}

} // namespace

Support dynamics_window(const SpectralDensity& sd, double omega0, double tail) {
    const Support s = sd.support();
    if (sd.is_zero()) return s;
    const std::vector<double> bp = sd.breakpoints();

    double top = bp.front();
    double h = s.width();
    for (std::size_t i = 0; i < bp.size(); ++i) {
        if (sd(bp[i]) > sd(top)) top = bp[i];
        if (i > 0 && bp[i] > bp[i - 1]) h = std::min(h, bp[i] - bp[i - 1]);
    }
    const double c_lo = std::clamp(std::min(omega0, top), s.lo, s.hi);
    const double c_hi = std::clamp(std::max(omega0, top), s.lo, s.hi);

    double peak = 0.0;
    for (; h < s.width(); h *= 2.0) {
        const Support w{std::max(s.lo, c_lo - h), std::min(s.hi, c_hi + h)};
        for (int k = 0; k <= 64; ++k) {
            peak = std::max(peak, spectral_measure(sd, omega0, w.lo + w.width() * k / 64.0));
        }
        const bool lo_done = w.lo == s.lo || spectral_measure(sd, omega0, w.lo) < tail * peak;
        const bool hi_done = w.hi == s.hi || spectral_measure(sd, omega0, w.hi) < tail * peak;
        if (lo_done && hi_done) return w;
    }
    return s;
}

std::vector<double> sample_times(double t_max, std::size_t n_t) {
    check_time_args(t_max, n_t);
    std::vector<double> t(n_t);
    for (std::size_t k = 0; k < n_t; ++k) {
        t[k] = t_max * static_cast<double>(k) / static_cast<double>(n_t - 1);
    }
    return t;
}

std::vector<BoundState> bound_states(const SpectralDensity& sd, double omega0, const quad::Options& opt) {
    if (sd.is_zero()) return {BoundState{omega0, 1.0}};

    const Support s = sd.support();
    const double nudge = kEdgeNudge * s.width();
    auto F = [&](double w) { return w - omega0 - principal_value(sd, w, opt); };
    boost::math::tools::eps_tolerance<double> tol(48);
    std::vector<BoundState> out;

    // F is strictly increasing outside the support, so each side holds at most one root.
    {
        const double lo = s.lo - nudge;
        const double f_lo = F(lo);
        if (f_lo > 0.0) {
            double left = omega0 + principal_value(sd, lo, opt);
            double step = std::max(1.0, std::abs(left));
            left = std::min(left, lo) - 1e-9 * step;
            while (F(left) > 0.0) {
                left -= step;
                step *= 2.0;
            }
            std::uintmax_t iters = 200;
            auto [x0, x1] = boost::math::tools::toms748_solve(F, left, lo, F(left), f_lo, tol, iters);
            const double w = 0.5 * (x0 + x1);
            out.push_back({w, pole_weight(sd, w, opt)});
        }
    }
    {
        const double hi = s.hi + nudge;
        const double f_hi = F(hi);
        if (f_hi < 0.0) {
            double right = omega0 + principal_value(sd, hi, opt);
            double step = std::max(1.0, std::abs(right));
            right = std::max(right, hi) + 1e-9 * step;
            while (F(right) < 0.0) {
                right += step;
                step *= 2.0;
            }
            std::uintmax_t iters = 200;
            auto [x0, x1] = boost::math::tools::toms748_solve(F, hi, right, f_hi, F(right), tol, iters);
            const double w = 0.5 * (x0 + x1);
            out.push_back({w, pole_weight(sd, w, opt)});
        }
    }
    return out;
}

EmissionHistory emission_dynamics(const SpectralDensity& sd, double omega0, double t_max, std::size_t n_t,
                                  const InversionOptions& opt) {
    const std::vector<double> times = sample_times(t_max, n_t);
    if (sd.is_zero()) return free_evolution(omega0, times);

    const Support s = dynamics_window(sd, omega0, opt.window_tail);
    auto density = [&](double w) { return spectral_measure(sd, omega0, w); };

    std::vector<double> cuts{s.lo, s.hi};
    for (double b : sd.breakpoints()) {
        if (b > s.lo && b < s.hi) cuts.push_back(b);
    }
    if (omega0 > s.lo && omega0 < s.hi) cuts.push_back(omega0);
    std::sort(cuts.begin(), cuts.end());

    quad::Options qopt = opt.quadrature;
    qopt.max_width = opt.resolution / t_max;
    const quad::Result cont = quad::integrate(density, cuts, qopt);
    const auto poles = bound_states(sd, omega0);

    double total = cont.value;
    for (const auto& b : poles) total += b.weight;
    if (std::abs(total - 1.0) > opt.sum_rule_tol) {
        throw WindowTooNarrow("spectral sum rule violated: total weight " + format_sci(total));
    }

    std::vector<double> nodes;
    std::vector<double> weighted;
    nodes.reserve(cont.panels.size() * quad::kNodes);
    weighted.reserve(nodes.capacity());
    for (const auto& p : cont.panels) {
        for (std::size_t i = 0; i < quad::kNodes; ++i) {
            if (p.fx[i] == 0.0) continue;
            nodes.push_back(quad::node(p, i));
            weighted.push_back(quad::weight(p, i) * p.fx[i]);
        }
    }

    EmissionHistory h{times, std::vector<cplx>(times.size())};
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < nodes.size(); ++j) acc += weighted[j] * std::polar(1.0, -nodes[j] * t);
        for (const auto& b : poles) acc += b.weight * std::polar(1.0, -b.omega * t);
        h.eps[k] = acc;
    }
    return h;
}

EmissionHistory discrete_bath_oracle(const SpectralDensity& sd, double omega0, std::size_t n_modes,
                                     double t_max, std::size_t n_t, const StepperOptions& opt) {
    if (n_modes < 2) throw std::invalid_argument("discrete bath needs at least two modes");
    const std::vector<double> times = sample_times(t_max, n_t);
    if (sd.is_zero()) return free_evolution(omega0, times);

    const Support s = dynamics_window(sd, omega0, opt.window_tail);
    const double dw = s.width() / static_cast<double>(n_modes);
    std::vector<double> detuning(n_modes);
    std::vector<double> mu(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) {
        const double w = s.lo + (static_cast<double>(i) + 0.5) * dw;
        detuning[i] = w - omega0;
        mu[i] = std::sqrt(sd(w) * dw);
    }

    using State = std::vector<cplx>;
    // y[0] = emitter, y[1..n] = bath modes, all in the frame rotating at ω₀.
    auto rhs = [&](const State& y, State& dy, double /*t*/) {
        cplx feed{0.0, 0.0};
        for (std::size_t i = 0; i < n_modes; ++i) {
            feed += mu[i] * y[i + 1];
            dy[i + 1] = -kI * (detuning[i] * y[i + 1] + mu[i] * y[0]);
        }
        dy[0] = -kI * feed;
    };

    State y(n_modes + 1, cplx{0.0, 0.0});
    y[0] = 1.0;

    EmissionHistory h{times, std::vector<cplx>(times.size())};
    double worst = 0.0;
    std::size_t k = 0;
    auto observe = [&](const State& state, double t) {
        double norm = 0.0;
        for (const auto& c : state) norm += std::norm(c);
        worst = std::max(worst, std::abs(norm - 1.0));
        h.eps[k++] = std::polar(1.0, -omega0 * t) * state[0];
    };

    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());
    double max_rate = 0.0;
    for (std::size_t i = 0; i < n_modes; ++i) max_rate = std::max(max_rate, std::abs(detuning[i]) + mu[i]);
    const double dt0 = 0.1 / std::max(max_rate, 1.0 / t_max);
    odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(), dt0, observe);

    if (worst > opt.norm_tol) {
        throw StepperFailure("discrete bath norm drift " + format_sci(worst) + " exceeds tolerance");
    }
    return h;
}

EmissionHistory pseudomode_dynamics(const LorentzianParams& p, double omega0, double t_max, std::size_t n_t) {
    const std::vector<double> times = sample_times(t_max, n_t);
    // M = [[−iω₀, −ig], [−ig, −(iω₁ + Γ₁)]]; e^{Mt} via Cayley–Hamilton.
    const cplx m00 = -kI * omega0;
    const cplx m11 = -(kI * p.omega1 + p.gamma1);
    const cplx mean = 0.5 * (m00 + m11);
    const cplx half_gap = 0.5 * (m00 - m11);
    const cplx s = std::sqrt(half_gap * half_gap - p.g * p.g);

    EmissionHistory h{times, std::vector<cplx>(times.size())};
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const cplx sinhc = std::abs(s * t) < 1e-8 ? cplx{t, 0.0} : std::sinh(s * t) / s;
        h.eps[k] = std::exp(mean * t) * (std::cosh(s * t) + sinhc * half_gap);
    }
    return h;
}

double fit_decay_rate(const EmissionHistory& h, double floor) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double pop = h.population(k);
        if (!(pop >= floor)) continue;
        const double x = h.times[k];
        const double y = std::log(pop);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw InsufficientData("fewer than two samples above the population floor");
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (denom == 0.0) throw InsufficientData("degenerate sample times");
    return -(dn * sxy - sx * sy) / denom;
}

double max_abs_deviation(const EmissionHistory& a, const EmissionHistory& b) {
    if (a.size() != b.size()) throw GridMismatch("emission histories have different lengths");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a.times[k] - b.times[k]) > 1e-12 * (1.0 + std::abs(a.times[k]))) {
            throw GridMismatch("emission histories sampled at different times");
        }
        worst = std::max(worst, std::abs(std::abs(a.eps[k]) - std::abs(b.eps[k])));
    }
    return worst;
}

} // namespace sdprobe
