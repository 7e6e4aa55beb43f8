// SPDX-License-Identifier: Apache-2.0
//
// Trajectory-level algorithms: the characteristic-period solver, analytic
// short-time estimates, scenario presets (snake, bouncing, entangling,
// boundary-residing, pulse, phase-shift, out-of-phase, damped), boundary
// dynamics classification and frozen-time detection.

#pragma once

#include "spintraj/drive.hpp"
#include "spintraj/entangle.hpp"
#include "spintraj/evolve.hpp"

#include <deque>
#include <numbers>
#include <optional>
#include <vector>

namespace spintraj {

struct InsufficientSamplesError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct NoBoundaryContactError : Error {
    using Error::Error;
};

enum class StateKind { Mixed, Pure };

inline std::string to_string(StateKind k) { return k == StateKind::Mixed ? "mixed" : "pure"; }

/// Qudit dimension used for mixed initial states. SpinHalf keeps C a qubit in
/// |up> for every weighting; PerLabelGroup mirrors the pure-state assignment.
enum class MixedQuditPolicy { SpinHalf, PerLabelGroup };

enum class NearZeroDynamics { Esd, Esb, Tzd, None };

inline std::string to_string(NearZeroDynamics d) {
    switch (d) {
        case NearZeroDynamics::Esd: return "ESD";
        case NearZeroDynamics::Esb: return "ESB";
        case NearZeroDynamics::Tzd: return "TZD";
        case NearZeroDynamics::None: return "none";
    }
    return "?";
}

enum class Preset {
    Snake, Bounce, Entangling, BoundaryResiding, Pulse, PhaseShift, OutOfPhase, Damped
};

inline std::string to_string(Preset p) {
    switch (p) {
        case Preset::Snake: return "snake";
        case Preset::Bounce: return "bounce";
        case Preset::Entangling: return "entangling";
        case Preset::BoundaryResiding: return "boundary_residing";
        case Preset::Pulse: return "pulse";
        case Preset::PhaseShift: return "phase_shift";
        case Preset::OutOfPhase: return "out_of_phase";
        case Preset::Damped: return "damped";
    }
    return "?";
}

inline std::optional<Preset> parse_preset(std::string_view s) {
    for (Preset p : {Preset::Snake, Preset::Bounce, Preset::Entangling, Preset::BoundaryResiding,
                     Preset::Pulse, Preset::PhaseShift, Preset::OutOfPhase, Preset::Damped})
        if (to_string(p) == s) return p;
    return std::nullopt;
}

/// Ordered (t, C_E) samples plus run metadata.
struct Trajectory {
    std::vector<double> t;
    std::vector<double> c_e;

    Weighting label = Weighting::W1;
    double epsilon = 0.0;
    StateKind kind = StateKind::Mixed;
    Preset preset = Preset::Snake;
    DrivePair drives;
    std::optional<double> t_star;
    std::optional<double> frozen_time;
    NearZeroDynamics classification = NearZeroDynamics::None;
};

/// First boundary contact expressed both as the vibration period T* (the
/// sinusoidal period whose quarter point lands on the boundary) and as the
/// ETI value I* accumulated there.
struct CharacteristicPeriod {
    double t_star = 0.0;
    double i_star = 0.0;
};

// ---------------------------------------------------------------------------
// initial-state assembly shared by solver and scenarios
// ---------------------------------------------------------------------------

inline QuditSpin state_qudit_spin(Weighting label, StateKind kind,
                                  MixedQuditPolicy policy = MixedQuditPolicy::SpinHalf) {
    if (kind == StateKind::Pure || policy == MixedQuditPolicy::PerLabelGroup)
        return pure_qudit_spin(label);
    return QuditSpin::Half;
}

inline DensityMatrix initial_state(const BellWeighting& w, StateKind kind,
                                   const SystemConfig& cfg) {
    return kind == StateKind::Mixed ? initial_mixed(w, cfg) : initial_pure(w);
}

// ---------------------------------------------------------------------------
// characteristic-period solver
// ---------------------------------------------------------------------------

struct SolverOptions {
    double scan_step = 1e-3;
    double scan_max = 2.0 * std::numbers::pi;
    double bisect_tol = 1e-8;   // |Delta I| at the bracketing stage
    double touch_probe = 1e-4;  // local dips shallower than this get refined
    // The kappa spectrum is a square root of computed eigenvalues, so C_E
    // carries ~1e-8 of noise right at the boundary. A contact therefore has
    // to cross below -noise_band; dips that bottom out inside the band are
    // near-misses, not contacts.
    double noise_band = 1e-8;
};

namespace detail {

// C_E of the qubit marginal after conjugation by exp(-i I K)
class EtiConcurrence {
  public:
    EtiConcurrence(const DensityMatrix& rho0, const ExchangeOperator& op)
        : rho0_(rho0.rho), eig_(op.eig), d_(op.qudit_dim) {}

    double operator()(double i_value) const {
        const cmat u = unitary_from_eig(eig_, i_value);
        const cmat rho = u * rho0_ * u.adjoint();
        return extended_concurrence_4x4(trace_out_qudit(rho, d_)).c_extended;
    }

  private:
    cmat rho0_;
    HermitianEig eig_;
    int d_;
};

}  // namespace detail

/// Scan C_E as a function of the ETI value along I = sign(j0) s, s > 0, and
/// locate the first boundary crossing, refined by bisection. Local dips that
/// approach the boundary between grid points are minimized by golden-section
/// search so narrow crossings cannot slip through; a dip whose bottom stays
/// within the noise band of zero does not count as a contact. Returns nothing
/// when no crossing occurs for s <= scan_max.
inline std::optional<CharacteristicPeriod> find_tstar(const DensityMatrix& rho0,
                                                      const ExchangeOperator& op, double j0,
                                                      const SolverOptions& opts = {}) {
    const detail::EtiConcurrence ce(rho0, op);
    const double dir = j0 < 0.0 ? -1.0 : 1.0;
    auto f = [&](double s) { return ce(dir * s); };

    auto result = [&](double s_star) {
        return CharacteristicPeriod{2.0 * std::numbers::pi * s_star / std::abs(j0), dir * s_star};
    };
    auto bisect = [&](double lo, double hi, double sign0) {
        while (hi - lo > opts.bisect_tol) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) * sign0 < 0.0 ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    // golden-section minimization of sign0 * C_E over [lo, hi]
    auto refine_dip = [&](double lo, double hi, double sign0) {
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = sign0 * f(x1), f2 = sign0 * f(x2);
        while (b - a > 1e-10) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a); f1 = sign0 * f(x1);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a); f2 = sign0 * f(x2);
            }
        }
        const double s = 0.5 * (a + b);
        return std::pair<double, double>{s, f(s)};
    };

    const long n = static_cast<long>(std::ceil(opts.scan_max / opts.scan_step));
    double sign0 = 0.0;
    double m_prev2 = 0.0, m_prev = 0.0;  // sign0-normalized history for dip detection
    double s_prev = 0.0;
    double c = f(0.0);
    if (std::abs(c) > opts.noise_band) sign0 = c > 0.0 ? 1.0 : -1.0;
    bool have2 = false;
    for (long i = 1; i <= n; ++i) {
        const double s = static_cast<double>(i) * opts.scan_step;
        c = f(s);
        if (sign0 == 0.0) {
            if (std::abs(c) > opts.noise_band) sign0 = c > 0.0 ? 1.0 : -1.0;
            s_prev = s;
            continue;
        }
        const double m = sign0 * c;
        if (m < -opts.noise_band) return result(bisect(s_prev, s, sign0));
        if (have2 && m_prev <= opts.touch_probe && m_prev < m_prev2 && m_prev <= m) {
            auto [s_dip, c_dip] = refine_dip(s - 2.0 * opts.scan_step, s, sign0);
            if (sign0 * c_dip < -opts.noise_band)
                return result(bisect(s - 2.0 * opts.scan_step, s_dip, sign0));
        }
        m_prev2 = m_prev;
        m_prev = m;
        have2 = have2 || i >= 2;
        s_prev = s;
    }
    return std::nullopt;
}

/// Label/kind convenience overload; builds the initial state and exchange
/// operator from the configuration.
inline std::optional<CharacteristicPeriod> find_tstar(
    Weighting label, double epsilon, StateKind kind, const SystemConfig& cfg,
    MixedQuditPolicy policy = MixedQuditPolicy::SpinHalf, const SolverOptions& opts = {}) {
    SystemConfig run_cfg = cfg;
    run_cfg.qudit_spin = state_qudit_spin(label, kind, policy);
    const BellWeighting w = weighting(label, epsilon);
    const DensityMatrix rho0 = initial_state(w, kind, run_cfg);
    const ExchangeOperator op = exchange_operator(run_cfg);
    return find_tstar(rho0, op, run_cfg.j0, opts);
}

// ---------------------------------------------------------------------------
// analytic short-time estimate (constant exchange, mixed states)
// ---------------------------------------------------------------------------

/// Closed-form approximate characteristic period for mixed states under
/// constant exchange, valid to second order in the elapsed time.
inline double analytic_tstar(Weighting label, double epsilon) {
    const double e = epsilon;
    auto root = [&](double radicand, double power) {
        if (radicand < 0.0)
            throw DomainError("analytic_tstar: " + to_string(label) + " undefined at epsilon " +
                              std::to_string(e));
        return std::pow(radicand, power);
    };
    switch (label) {
        case Weighting::W1:
        case Weighting::W3:
        case Weighting::W5: return root(16.0 * e / (1.0 + e), 0.5);
        case Weighting::W2:
        case Weighting::W4: return 2.0 * std::sqrt(2.0);
        case Weighting::W7:
        case Weighting::W8: return root(32.0 * e / (1.0 + 3.0 * e), 0.5);
        case Weighting::W9: return root(32.0 * e / (3.0 + 5.0 * e), 0.5);
        case Weighting::W10: {
            const double q = 1.0 - e;
            return root(-1024.0 * e * (1.0 + e) / (q * q), 0.25);
        }
        case Weighting::W11:
        case Weighting::W12: return root(24.0 * e / (1.0 + 2.0 * e), 0.5);
        case Weighting::W13: return root(12.0 * e / (1.0 + 2.0 * e), 0.5);
        case Weighting::W14: {
            const double q = 1.0 - e;
            return root(-(384.0 + 768.0 * e) * e / (q * q), 0.25);
        }
        case Weighting::W6:
            throw DomainError("analytic_tstar: no closed form for W6");
    }
    throw DomainError("analytic_tstar: unknown weighting");
}

/// ETI accumulated at the quarter point t = T*/4: |j0| T*/(2 pi) for a
/// sinusoidal drive, |j0| T*/4 for a constant one.
inline double eti_at_quarter(const CharacteristicPeriod& cp, double j0, DriveKind waveform) {
    switch (waveform) {
        case DriveKind::Sinusoidal: return std::abs(j0) * cp.t_star / (2.0 * std::numbers::pi);
        case DriveKind::Constant: return std::abs(j0) * cp.t_star / 4.0;
        default:
            throw DomainError("eti_at_quarter: waveform must be constant or sinusoidal");
    }
}

// ---------------------------------------------------------------------------
// trajectory sampling
// ---------------------------------------------------------------------------

/// Sample C_E of the qubit marginal on a uniform grid over [0, t_end],
/// choosing the single-ETI fast path when the drives allow it and the
/// time-ordered stepper otherwise.
inline Trajectory sample_trajectory(const DensityMatrix& rho0, const ExchangeOperator& op,
                                    const DrivePair& drives, double t_end, int n_samples,
                                    const StepperOptions& opts = {}) {
    Trajectory traj;
    traj.drives = drives;
    traj.t.resize(n_samples + 1);
    traj.c_e.resize(n_samples + 1);
    for (int i = 0; i <= n_samples; ++i)
        traj.t[i] = t_end * static_cast<double>(i) / static_cast<double>(n_samples);
    if (fast_path_available(drives, op.gamma)) {
        const detail::EtiConcurrence ce(rho0, op);
        for (int i = 0; i <= n_samples; ++i) traj.c_e[i] = ce(eti(drives.a, traj.t[i]));
    } else {
        const int d = op.qudit_dim;
        traj.c_e = evolve_stepper_sample(rho0, op, drives, traj.t, [d](const cmat& rho) {
            return extended_concurrence_4x4(trace_out_qudit(rho, d)).c_extended;
        }, opts);
    }
    return traj;
}

// ---------------------------------------------------------------------------
// classification and frozen time
// ---------------------------------------------------------------------------

/// Classify the dynamics at the first boundary event: ESD for a crossing out
/// of the entangled side, ESB for the mirror image, TZD for a touch that
/// returns with unchanged sign, none when the trajectory never reaches the
/// boundary.
inline NearZeroDynamics classify_near_zero(const Trajectory& traj,
                                           double tol = boundary_tolerance) {
    const auto& c = traj.c_e;
    const size_t n = c.size();
    if (n < 8) throw InsufficientSamplesError("classify_near_zero: trajectory too short");

    size_t i0 = 0;
    while (i0 < n && std::abs(c[i0]) <= tol) ++i0;
    if (i0 == n) return NearZeroDynamics::Tzd;  // never leaves the boundary
    const double s = c[i0] > 0.0 ? 1.0 : -1.0;
    auto crossing = [&] { return s > 0.0 ? NearZeroDynamics::Esd : NearZeroDynamics::Esb; };

    for (size_t i = i0 + 1; i < n; ++i) {
        const double m = s * c[i];
        if (m < -tol) return crossing();
        if (m <= tol) {
            // touched the boundary; the departure side decides
            size_t j = i + 1;
            while (j < n && std::abs(c[j]) <= tol) ++j;
            if (j == n || c[j] * s > 0.0) return NearZeroDynamics::Tzd;
            return crossing();
        }
        // a dip that straddles samples: quadratic fit around an interior
        // local minimum, counted as a touch when the vertex reaches zero
        if (i >= i0 + 2 && s * c[i - 1] <= s * c[i - 2] && s * c[i - 1] <= m &&
            s * c[i - 1] <= 1e-4) {
            const double y0 = s * c[i - 2], y1 = s * c[i - 1], y2 = m;
            const double denom = y0 - 2.0 * y1 + y2;
            if (denom > 0.0) {
                const double delta = 0.5 * (y0 - y2) / denom;  // vertex offset in samples
                const double v = y1 - 0.25 * (y0 - y2) * delta;
                if (std::abs(delta) <= 1.0) {
                    if (v < -tol) return crossing();
                    if (std::abs(v) <= tol) return NearZeroDynamics::Tzd;
                }
            }
        }
    }
    return NearZeroDynamics::None;
}

/// Earliest time beyond which C_E stays within a band of width tol over the
/// given look-ahead window. Nothing if the trajectory never settles.
inline std::optional<double> frozen_time(const Trajectory& traj, double window, double tol) {
    const size_t n = traj.t.size();
    if (n < 2) return std::nullopt;
    const double dt = traj.t[1] - traj.t[0];
    const size_t nw = static_cast<size_t>(window / dt);
    if (nw + 1 > n) return std::nullopt;
    // sliding max-min with monotonic deques
    std::deque<size_t> maxq, minq;
    for (size_t i = 0; i + 1 < n + 1; ++i) {
        while (!maxq.empty() && traj.c_e[maxq.back()] <= traj.c_e[i]) maxq.pop_back();
        maxq.push_back(i);
        while (!minq.empty() && traj.c_e[minq.back()] >= traj.c_e[i]) minq.pop_back();
        minq.push_back(i);
        if (i < nw) continue;
        const size_t start = i - nw;
        while (maxq.front() < start) maxq.pop_front();
        while (minq.front() < start) minq.pop_front();
        if (traj.c_e[maxq.front()] - traj.c_e[minq.front()] < tol) return traj.t[start];
    }
    return std::nullopt;
}

/// Frozen time with the default window 5/eta and band 1e-3; eta is read from
/// drive A of the trajectory.
inline std::optional<double> frozen_time(const Trajectory& traj) {
    const double eta = traj.drives.a.eta;
    if (eta <= 0.0) return std::nullopt;
    return frozen_time(traj, 5.0 / eta, 1e-3);
}

// ---------------------------------------------------------------------------
// scenario presets
// ---------------------------------------------------------------------------

struct ScenarioRequest {
    Preset preset = Preset::Snake;
    Weighting label = Weighting::W1;
    double epsilon = 0.01;
    StateKind kind = StateKind::Mixed;

    double period_factor = 0.0;    // T / T*; 0 = preset default
    double phi_deg = 0.0;          // common vibration phase (phase_shift)
    double delta_phi_deg = 0.0;    // phase difference phi_A - phi_B; 0 = preset default
    double damping = 0.0;          // eta; 0 = preset default for Damped
    double periods = 0.0;          // sampled duration in periods; 0 = preset default
    int samples_per_period = 0;    // 0 = preset default

    SystemConfig cfg = isotropic_config();
    MixedQuditPolicy mixed_policy = MixedQuditPolicy::SpinHalf;
    StepperOptions stepper;  // refine_tol tightened/loosened per preset if left at default
};

namespace detail {

inline double preset_period_factor(Preset p) {
    switch (p) {
        case Preset::Snake: return 1.25;
        case Preset::Entangling: return 0.5;
        default: return 1.0;
    }
}

inline double default_delta_phi(Preset p, StateKind kind) {
    if (p == Preset::Damped) return 30.0;
    if (p == Preset::OutOfPhase) return kind == StateKind::Mixed ? 120.0 : 90.0;
    return 0.0;
}

}  // namespace detail

/// Assemble drives for a preset, evolve, sample, classify and (for damped
/// runs) detect the frozen time.
inline Trajectory run_scenario(const ScenarioRequest& req) {
    SystemConfig cfg = req.cfg;
    cfg.qudit_spin = state_qudit_spin(req.label, req.kind, req.mixed_policy);
    const BellWeighting w = weighting(req.label, req.epsilon);
    const DensityMatrix rho0 = initial_state(w, req.kind, cfg);
    const ExchangeOperator op = exchange_operator(cfg);

    const auto cp = find_tstar(rho0, op, cfg.j0);
    if (!cp)
        throw NoBoundaryContactError(to_string(req.preset) + ": " + to_string(req.label) + " " +
                                     to_string(req.kind) +
                                     " never reaches the boundary; no characteristic period");

    const double j0 = cfg.j0;
    const double j0_b = cfg.j0 / cfg.gamma;
    const double factor =
        req.period_factor > 0.0 ? req.period_factor : detail::preset_period_factor(req.preset);

    DrivePair drives;
    double t_end = 0.0;
    int spp = req.samples_per_period > 0 ? req.samples_per_period : 2000;
    StepperOptions stepper = req.stepper;

    switch (req.preset) {
        case Preset::Snake:
        case Preset::Bounce:
        case Preset::Entangling: {
            const double T = factor * cp->t_star;
            const double omega = 2.0 * std::numbers::pi / T;
            drives = {sinusoidal_drive(j0, omega), sinusoidal_drive(j0_b, omega)};
            t_end = (req.periods > 0.0 ? req.periods : 2.0) * T;
            break;
        }
        case Preset::BoundaryResiding: {
            drives = {step_stop_drive(j0, cp->t_star), step_stop_drive(j0_b, cp->t_star)};
            t_end = (req.periods > 0.0 ? req.periods : 2.0) * cp->t_star;
            break;
        }
        case Preset::Pulse: {
            // the cos^2 waveform accumulates I(T/4) = j0 T/8, so the period
            // reaching the boundary at the quarter point is re-solved here
            const double T = 8.0 * std::abs(cp->i_star) / std::abs(j0);
            drives = {cos2_pulse_drive(j0, T), cos2_pulse_drive(j0_b, T)};
            t_end = (req.periods > 0.0 ? req.periods : 3.0) * T;
            break;
        }
        case Preset::PhaseShift: {
            const double T = factor * cp->t_star;
            const double omega = 2.0 * std::numbers::pi / T;
            const double phi = req.phi_deg * std::numbers::pi / 180.0;
            drives = {sinusoidal_drive(j0, omega, phi), sinusoidal_drive(j0_b, omega, phi)};
            t_end = (req.periods > 0.0 ? req.periods : 3.0) * T;
            break;
        }
        case Preset::OutOfPhase: {
            const double T = factor * cp->t_star;
            const double omega = 2.0 * std::numbers::pi / T;
            const double dphi = (req.delta_phi_deg != 0.0
                                     ? req.delta_phi_deg
                                     : detail::default_delta_phi(req.preset, req.kind)) *
                                std::numbers::pi / 180.0;
            drives = {sinusoidal_drive(j0, omega, dphi), sinusoidal_drive(j0_b, omega, 0.0)};
            t_end = req.periods > 0.0 ? req.periods * T : 120.0;
            spp = req.samples_per_period > 0 ? req.samples_per_period : 128;
            if (stepper.dt0 == 0.0) stepper.dt0 = T / 2000.0;
            if (stepper.refine_tol == 1e-8) stepper.refine_tol = 1e-6;
            break;
        }
        case Preset::Damped: {
            const double T = factor * cp->t_star;
            const double omega = 2.0 * std::numbers::pi / T;
            const double eta = req.damping > 0.0 ? req.damping : 7e-3;
            const double dphi = (req.delta_phi_deg != 0.0
                                     ? req.delta_phi_deg
                                     : detail::default_delta_phi(req.preset, req.kind)) *
                                std::numbers::pi / 180.0;
            drives = {damped_drive(j0, omega, dphi, eta), damped_drive(j0_b, omega, 0.0, eta)};
            t_end = req.periods > 0.0 ? req.periods * T : 9.5 / eta;
            spp = req.samples_per_period > 0 ? req.samples_per_period : 128;
            if (stepper.dt0 == 0.0) stepper.dt0 = T / 1024.0;
            if (stepper.refine_tol == 1e-8) stepper.refine_tol = 3e-4;
            break;
        }
    }

    const double period = drives.a.omega > 0.0 ? 2.0 * std::numbers::pi / drives.a.omega
                                               : cp->t_star;
    const int n_samples = std::max(16, static_cast<int>(std::lround(t_end / period * spp)));
    Trajectory traj = sample_trajectory(rho0, op, drives, t_end, n_samples, stepper);

    traj.label = req.label;
    traj.epsilon = req.epsilon;
    traj.kind = req.kind;
    traj.preset = req.preset;
    traj.t_star = cp->t_star;
    traj.classification = classify_near_zero(traj);
    if (req.preset == Preset::Damped) traj.frozen_time = frozen_time(traj);
    return traj;
}

}  // namespace spintraj
