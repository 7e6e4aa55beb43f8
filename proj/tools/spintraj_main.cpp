// SPDX-License-Identifier: Apache-2.0
//
// spintraj command-line front end.
//
//   spintraj table1 [--epsilon E] [--j0 J] [--tolerance TOL]
//       recompute the characteristic-time table and compare against the
//       published values; exit 1 when any entry drifts out of tolerance
//   spintraj run <config> [--out-dir DIR] [--plot] [--jobs N]
//       run the scenarios described by a config file and emit CSV series
//   spintraj freq <J0_meV> <Tstar>
//       convert an exchange amplitude and characteristic period into the
//       physical operating frequency
//
// Exit codes: 0 success, 1 tolerance failure, 2 config error, 3 numerical
// non-convergence.

#include "spintraj/io/config.hpp"
#include "spintraj/io/csv.hpp"
#include "spintraj/io/svg.hpp"
#include "spintraj/reference.hpp"
#include "spintraj/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace spintraj;

namespace {

constexpr double hbar_ev_s = 6.582119569e-16;

struct BadInputError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// table1
// ---------------------------------------------------------------------------

int cmd_table1(double eps_magnitude, double j0, double tolerance) {
    SystemConfig cfg = isotropic_config(j0);
    std::printf("characteristic times T* (hbar/|J0|) at |epsilon| = %g, J0 = %g\n", eps_magnitude,
                j0);
    std::printf("%-5s %-6s %9s %12s %12s %10s  %s\n", "row", "kind", "eps", "computed", "reference",
                "delta", "status");

    struct Job {
        Weighting label;
        StateKind kind;
    };
    std::vector<Job> jobs;
    for (Weighting wl : all_weightings())
        for (StateKind kind : {StateKind::Mixed, StateKind::Pure}) jobs.push_back({wl, kind});

    bool all_ok = true;
    for (const Job& job : jobs) {
        const ReferenceRow& ref = reference_row(job.label);
        const auto expect = job.kind == StateKind::Mixed ? ref.t_star_mixed : ref.t_star_pure;
        const double eps = solver_epsilon(job.label, job.kind, eps_magnitude);
        const auto cp = find_tstar(job.label, eps, job.kind, cfg);

        bool ok = false;
        char computed[24], delta[24];
        if (cp)
            std::snprintf(computed, sizeof(computed), "%.4f", cp->t_star);
        else
            std::snprintf(computed, sizeof(computed), "%s", "n/a");
        if (cp && expect) {
            ok = std::abs(cp->t_star - *expect) <= tolerance;
            std::snprintf(delta, sizeof(delta), "%+.4f", cp->t_star - *expect);
        } else {
            ok = !cp && !expect;
            std::snprintf(delta, sizeof(delta), "%s", "-");
        }
        all_ok = all_ok && ok;
        char refs[24];
        if (expect)
            std::snprintf(refs, sizeof(refs), "%.4f", *expect);
        else
            std::snprintf(refs, sizeof(refs), "%s", "n/a");
        std::printf("%-5s %-6s %9.4f %12s %12s %10s  %s\n", to_string(job.label).c_str(),
                    to_string(job.kind).c_str(), eps, computed, refs, delta, ok ? "ok" : "FAIL");
    }
    std::printf(all_ok ? "all 28 entries within %.3g\n" : "one or more entries out of tolerance\n",
                tolerance);
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunPlan {
    std::vector<ScenarioRequest> requests;
    fs::path out_dir = "out";
    bool plot = false;
};

RunPlan parse_run_config(const std::string& path) {
    const io::KeyValueConfig cfg = io::KeyValueConfig::parse_file(path);
    RunPlan plan;

    const std::string preset_name = cfg.require("scenario", "preset");
    const auto preset = parse_preset(preset_name);
    if (!preset) throw io::ConfigParseError("field 'scenario.preset': unknown preset '" +
                                            preset_name + "'");

    const std::string kind_name = cfg.get("scenario", "kind").value_or("mixed");
    StateKind kind;
    if (kind_name == "mixed")
        kind = StateKind::Mixed;
    else if (kind_name == "pure")
        kind = StateKind::Pure;
    else
        throw io::ConfigParseError("field 'scenario.kind': expected mixed or pure, got '" +
                                   kind_name + "'");

    std::vector<Weighting> labels;
    for (const std::string& s : cfg.get_list("scenario", "weightings")) {
        const auto wl = parse_weighting(s);
        if (!wl)
            throw io::ConfigParseError("field 'scenario.weightings': unknown weighting '" + s +
                                       "'");
        labels.push_back(*wl);
    }
    if (labels.empty())
        throw io::ConfigParseError("field 'scenario.weightings': at least one weighting required");

    std::vector<double> epsilons = cfg.get_double_list("scenario", "epsilon");
    if (epsilons.empty()) epsilons = {0.01};

    ScenarioRequest base;
    base.preset = *preset;
    base.kind = kind;
    base.period_factor = cfg.get_double("scenario", "period_factor", 0.0);
    base.phi_deg = cfg.get_double("scenario", "phi_deg", 0.0);
    base.delta_phi_deg = cfg.get_double("scenario", "delta_phi_deg", 0.0);
    base.damping = cfg.get_double("scenario", "damping", 0.0);
    base.periods = cfg.get_double("scenario", "periods", 0.0);
    base.samples_per_period = cfg.get_int("scenario", "samples_per_period", 0);
    if (base.samples_per_period != 0 && base.samples_per_period < 16)
        throw io::ConfigParseError(
            "field 'scenario.samples_per_period': resolution must be at least 16");
    base.cfg.j0 = cfg.get_double("scenario", "j0", -1.0);
    base.cfg.gamma = cfg.get_double("scenario", "gamma", 1.0);
    const auto eta = cfg.get_double_list("scenario", "eta");
    if (!eta.empty()) {
        if (eta.size() != 3)
            throw io::ConfigParseError("field 'scenario.eta': expected three components");
        base.cfg.eta_a = Eigen::Vector3d(eta[0], eta[1], eta[2]);
    }
    if (cfg.get("scenario", "mixed_qudit").value_or("spin_half") == "per_label_group")
        base.mixed_policy = MixedQuditPolicy::PerLabelGroup;

    for (Weighting wl : labels)
        for (double eps : epsilons) {
            ScenarioRequest req = base;
            req.label = wl;
            req.epsilon = eps;
            plan.requests.push_back(req);
        }

    plan.out_dir = cfg.get("output", "dir").value_or("out");
    plan.plot = cfg.get_bool("output", "plot", false);
    return plan;
}

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir_override,
            bool plot_override, int jobs) {
    RunPlan plan = parse_run_config(config_path);
    if (out_dir_override) plan.out_dir = *out_dir_override;
    if (plot_override) plan.plot = true;

    const int n = static_cast<int>(plan.requests.size());
    const std::vector<Trajectory> results = run_jobs<Trajectory>(
        n, jobs, [&](int i) { return run_scenario(plan.requests[static_cast<size_t>(i)]); });

    fs::create_directories(plan.out_dir);
    // single collector writes in deterministic order
    for (const Trajectory& traj : results) {
        const std::string stem = io::trajectory_stem(traj);
        const fs::path csv_path = plan.out_dir / (stem + ".csv");
        io::write_trajectory_csv(csv_path.string(), traj);
        std::printf("wrote %s (%zu samples", csv_path.string().c_str(), traj.t.size());
        if (traj.t_star) std::printf(", T* = %.4f", *traj.t_star);
        if (traj.frozen_time) std::printf(", frozen at t = %.1f", *traj.frozen_time);
        std::printf(")\n");
        if (plan.plot) {
            const fs::path svg_path = plan.out_dir / (stem + ".svg");
            io::write_trajectory_svg(svg_path.string(), {{&traj}},
                                     stem + "  [" + to_string(traj.classification) + "]");
            std::printf("wrote %s\n", svg_path.string().c_str());
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// freq
// ---------------------------------------------------------------------------

int cmd_freq(double j0_mev, double t_star) {
    if (j0_mev == 0.0 || !(t_star > 0.0))
        throw BadInputError("freq: need a nonzero J0 and a positive T*");
    const double f_hz = std::abs(j0_mev) * 1e-3 / (hbar_ev_s * t_star);
    const char* band = f_hz < 0.3e9 ? "radio, below the microwave band (0.3-300 GHz)"
                       : f_hz <= 300e9 ? "microwave band (0.3-300 GHz)"
                                       : "infrared, above the microwave band (0.3-300 GHz)";
    auto human = [](double f) {
        char buf[48];
        if (f >= 1e12)
            std::snprintf(buf, sizeof(buf), "%.4g THz", f / 1e12);
        else if (f >= 1e9)
            std::snprintf(buf, sizeof(buf), "%.4g GHz", f / 1e9);
        else if (f >= 1e6)
            std::snprintf(buf, sizeof(buf), "%.4g MHz", f / 1e6);
        else
            std::snprintf(buf, sizeof(buf), "%.4g Hz", f);
        return std::string(buf);
    };
    std::printf("f = |J0| / (hbar T*) = %.6e Hz = %s  (%s)\n", f_hz, human(f_hz).c_str(), band);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-qubit entanglement trajectory simulator"};
    app.require_subcommand(1);

    double eps = 0.01, j0 = -1.0, tolerance = 0.002;
    auto* table1 = app.add_subcommand("table1", "recompute the characteristic-time table");
    table1->add_option("--epsilon", eps, "entanglement switch parameter magnitude");
    table1->add_option("--j0", j0, "exchange amplitude");
    table1->add_option("--tolerance", tolerance, "acceptance tolerance on T*");

    std::string config_path;
    std::string out_dir;
    bool plot = false;
    int jobs = 1;
    auto* run = app.add_subcommand("run", "run scenarios from a config file");
    run->add_option("config", config_path, "scenario config file")->required();
    auto* out_opt = run->add_option("--out-dir", out_dir, "output directory (overrides config)");
    run->add_flag("--plot", plot, "also emit SVG plots");
    run->add_option("--jobs", jobs, "worker threads for independent runs");

    double j0_mev = 0.0, t_star = 0.0;
    auto* freq = app.add_subcommand("freq", "operating frequency for a physical exchange");
    freq->add_option("j0_mev", j0_mev, "exchange amplitude |J0| in meV")->required();
    freq->add_option("t_star", t_star, "characteristic period in hbar/|J0|")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (table1->parsed()) return cmd_table1(eps, j0, tolerance);
        if (run->parsed())
            return cmd_run(config_path,
                           out_opt->count() ? std::optional<std::string>(out_dir) : std::nullopt,
                           plot, jobs);
        if (freq->parsed()) return cmd_freq(j0_mev, t_star);
    } catch (const io::ConfigParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const io::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const BadInputError& e) {
        std::fprintf(stderr, "bad input: %s\n", e.what());
        return 2;
    } catch (const NonConvergentSteppingError& e) {
        std::fprintf(stderr, "numerical non-convergence: %s\n", e.what());
        return 3;
    } catch (const QuadratureNonConvergenceError& e) {
        std::fprintf(stderr, "numerical non-convergence: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
