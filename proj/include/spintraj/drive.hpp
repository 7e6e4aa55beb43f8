// SPDX-License-Identifier: Apache-2.0
//
// Time-dependent exchange waveforms J(t) and their exchange-time integrals
// (ETI)  I(t) = int_0^t J(t') dt'.  The ETI is the single scalar that clocks
// the in-phase/antiphase dynamics, so closed forms are provided for every
// analytic waveform; only tabulated drives fall back to quadrature.

#pragma once

#include "spintraj/linalg.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace spintraj {

struct NegativeTimeError : Error {
    using Error::Error;
};
struct QuadratureNonConvergenceError : Error {
    using Error::Error;
};
struct ZeroDampingError : Error {
    using Error::Error;
};
struct BadDriveError : Error {
    using Error::Error;
};

enum class DriveKind { Constant, Sinusoidal, StepStop, Cos2Pulse, DampedSinusoidal, Tabulated };

inline std::string to_string(DriveKind k) {
    switch (k) {
        case DriveKind::Constant: return "constant";
        case DriveKind::Sinusoidal: return "sinusoidal";
        case DriveKind::StepStop: return "step_stop";
        case DriveKind::Cos2Pulse: return "cos2_pulse";
        case DriveKind::DampedSinusoidal: return "damped_sinusoidal";
        case DriveKind::Tabulated: return "tabulated";
    }
    return "?";
}

/// Tagged waveform description for one qubit.
///
///   constant            J(t) = j0
///   sinusoidal          J(t) = j0 cos(omega t + phi)
///   step_stop           J(t) = j0 cos(2 pi t / T) Theta(T/4 - t)
///   cos2_pulse          J(t) = j0 cos^2(2 pi t / T) Theta(cos(2 pi t / T))
///                              (-1)^floor(4 t / T)
///   damped_sinusoidal   J(t) = j0 cos(omega t + phi) exp(-eta t)
///   tabulated           piecewise-linear interpolation of (t, J) samples
///
/// Theta is the Heaviside step with Theta(0) = 1; T is the stored t_star.
struct ExchangeDrive {
    DriveKind kind = DriveKind::Constant;
    double j0 = 0.0;
    double omega = 0.0;
    double phi = 0.0;
    double eta = 0.0;
    double t_star = 0.0;
    std::vector<std::pair<double, double>> samples;  // tabulated knots, t ascending
};

inline ExchangeDrive constant_drive(double j0) { return {DriveKind::Constant, j0}; }

inline ExchangeDrive sinusoidal_drive(double j0, double omega, double phi = 0.0) {
    if (!(omega > 0.0)) throw BadDriveError("sinusoidal_drive: omega must be positive");
    return {DriveKind::Sinusoidal, j0, omega, phi};
}

inline ExchangeDrive step_stop_drive(double j0, double t_star) {
    if (!(t_star > 0.0)) throw BadDriveError("step_stop_drive: t_star must be positive");
    ExchangeDrive d{DriveKind::StepStop, j0};
    d.t_star = t_star;
    d.omega = 2.0 * std::numbers::pi / t_star;
    return d;
}

inline ExchangeDrive cos2_pulse_drive(double j0, double t_star) {
    if (!(t_star > 0.0)) throw BadDriveError("cos2_pulse_drive: t_star must be positive");
    ExchangeDrive d{DriveKind::Cos2Pulse, j0};
    d.t_star = t_star;
    d.omega = 2.0 * std::numbers::pi / t_star;
    return d;
}

inline ExchangeDrive damped_drive(double j0, double omega, double phi, double eta) {
    if (!(omega > 0.0)) throw BadDriveError("damped_drive: omega must be positive");
    if (!(eta >= 0.0)) throw BadDriveError("damped_drive: eta must be nonnegative");
    ExchangeDrive d{DriveKind::DampedSinusoidal, j0, omega, phi};
    d.eta = eta;
    return d;
}

inline ExchangeDrive tabulated_drive(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) throw BadDriveError("tabulated_drive: need at least two samples");
    for (size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].first > samples[i - 1].first))
            throw BadDriveError("tabulated_drive: sample times must be strictly increasing");
    ExchangeDrive d{DriveKind::Tabulated};
    d.samples = std::move(samples);
    return d;
}

namespace detail {

inline void check_time(double t) {
    if (t < 0.0) throw NegativeTimeError("drive: negative time " + std::to_string(t));
}

// quarter-period index of the cos^2 pulse; floor rounds toward -infinity
inline long long pulse_quarter(double t, double t_star) {
    return static_cast<long long>(std::floor(4.0 * t / t_star));
}

}  // namespace detail

/// Waveform value J(t).
inline double eval(const ExchangeDrive& d, double t) {
    detail::check_time(t);
    switch (d.kind) {
        case DriveKind::Constant: return d.j0;
        case DriveKind::Sinusoidal: return d.j0 * std::cos(d.omega * t + d.phi);
        case DriveKind::StepStop:
            return t <= 0.25 * d.t_star ? d.j0 * std::cos(d.omega * t) : 0.0;
        case DriveKind::Cos2Pulse: {
            const double c = std::cos(d.omega * t);
            if (c < 0.0) return 0.0;
            const double sign = (detail::pulse_quarter(t, d.t_star) % 2 == 0) ? 1.0 : -1.0;
            return d.j0 * c * c * sign;
        }
        case DriveKind::DampedSinusoidal:
            return d.j0 * std::cos(d.omega * t + d.phi) * std::exp(-d.eta * t);
        case DriveKind::Tabulated: {
            const auto& s = d.samples;
            if (t <= s.front().first) return s.front().second;
            if (t >= s.back().first) return s.back().second;
            size_t hi = 1;
            while (s[hi].first < t) ++hi;
            const auto& [t0, j0] = s[hi - 1];
            const auto& [t1, j1] = s[hi];
            return j0 + (j1 - j0) * (t - t0) / (t1 - t0);
        }
    }
    throw BadDriveError("eval: unknown drive kind");
}

namespace detail {

// F(t) = eta cos(omega t + phi) - omega sin(omega t + phi); the damped ETI is
// I(t) = j0 [F(0) - F(t) exp(-eta t)] / (eta^2 + omega^2).
inline double damped_f(const ExchangeDrive& d, double t) {
    return d.eta * std::cos(d.omega * t + d.phi) - d.omega * std::sin(d.omega * t + d.phi);
}

// adaptive Simpson with absolute tolerance; depth-capped
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fb, double fm,
                        double whole, double tol, int depth, int max_depth, bool& converged) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth) {
        converged = false;
        return left + right;
    }
    return adaptive_simpson(f, a, m, fa, fm, flm, left, 0.5 * tol, depth + 1, max_depth,
                            converged) +
           adaptive_simpson(f, m, b, fm, fb, frm, right, 0.5 * tol, depth + 1, max_depth,
                            converged);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol, int max_depth, bool& converged) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fb, fm, whole, tol, 0, max_depth, converged);
}

}  // namespace detail

/// ETI of a tabulated (or otherwise non-analytic) drive by adaptive
/// quadrature, absolute error <= tol.
inline double eti_quadrature(const ExchangeDrive& d, double t, double tol = 1e-10,
                             int max_depth = 40) {
    detail::check_time(t);
    bool converged = true;
    double value = 0.0;
    // integrate between tabulated knots so the kinks never straddle a panel
    if (d.kind == DriveKind::Tabulated) {
        double a = 0.0;
        for (const auto& [tk, jk] : d.samples) {
            (void)jk;
            if (tk <= a) continue;
            const double b = std::min(tk, t);
            value += detail::integrate([&](double x) { return eval(d, x); }, a, b, tol, max_depth,
                                       converged);
            a = b;
            if (a >= t) break;
        }
        if (a < t)
            value += detail::integrate([&](double x) { return eval(d, x); }, a, t, tol, max_depth,
                                       converged);
    } else {
        value = detail::integrate([&](double x) { return eval(d, x); }, 0.0, t, tol, max_depth,
                                  converged);
    }
    if (!converged)
        throw QuadratureNonConvergenceError("eti_quadrature: depth cap reached before tolerance");
    return value;
}

/// Exchange-time integral I(t); closed form for every analytic waveform.
inline double eti(const ExchangeDrive& d, double t) {
    detail::check_time(t);
    switch (d.kind) {
        case DriveKind::Constant: return d.j0 * t;
        case DriveKind::Sinusoidal:
            return d.j0 / d.omega * (std::sin(d.omega * t + d.phi) - std::sin(d.phi));
        case DriveKind::StepStop: {
            const double tq = 0.25 * d.t_star;
            const double te = std::min(t, tq);
            return d.j0 / d.omega * std::sin(d.omega * te);
        }
        case DriveKind::Cos2Pulse: {
            // quarter pattern per period: active(+), idle, idle, active(-);
            // int cos^2(w t) dt = t/2 + sin(2 w t)/(4 w)
            const double T = d.t_star;
            const double i_star = d.j0 * T / 8.0;
            const long long q = detail::pulse_quarter(t, T);
            const long long r = ((q % 4) + 4) % 4;
            double base = (r == 0) ? 0.0 : i_star;
            if (r == 1 || r == 2) return base;
            const double tq = 0.25 * T * static_cast<double>(q);
            const double part = 0.5 * (t - tq) + std::sin(2.0 * d.omega * t) / (4.0 * d.omega);
            return base + (r == 0 ? d.j0 : -d.j0) * part;
        }
        case DriveKind::DampedSinusoidal: {
            if (d.eta == 0.0)
                return d.j0 / d.omega * (std::sin(d.omega * t + d.phi) - std::sin(d.phi));
            const double denom = d.eta * d.eta + d.omega * d.omega;
            return d.j0 / denom *
                   (detail::damped_f(d, 0.0) - detail::damped_f(d, t) * std::exp(-d.eta * t));
        }
        case DriveKind::Tabulated: return eti_quadrature(d, t);
    }
    throw BadDriveError("eti: unknown drive kind");
}

/// Steady ETI value I(infinity) = Gamma cos(Phi) of a damped drive, with
/// Gamma = j0/sqrt(eta^2 + omega^2) and Phi = phi + arctan(omega/eta).
inline double eti_steady(const ExchangeDrive& d) {
    if (d.kind != DriveKind::DampedSinusoidal)
        throw BadDriveError("eti_steady: drive is not damped_sinusoidal");
    if (!(d.eta > 0.0)) throw ZeroDampingError("eti_steady: damping strength is zero");
    const double gamma = d.j0 / std::hypot(d.eta, d.omega);
    return gamma * std::cos(d.phi + std::atan(d.omega / d.eta));
}

/// Envelope bounds I(inf) -+ |Gamma| exp(-eta t) that contain the damped ETI
/// at all times.
inline std::pair<double, double> eti_bounds(const ExchangeDrive& d, double t) {
    detail::check_time(t);
    const double steady = eti_steady(d);
    const double gamma = std::abs(d.j0) / std::hypot(d.eta, d.omega);
    const double half_width = gamma * std::exp(-d.eta * t);
    return {steady - half_width, steady + half_width};
}

}  // namespace spintraj
