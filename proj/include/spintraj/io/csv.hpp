// SPDX-License-Identifier: Apache-2.0
//
// Trajectory CSV emission: '#'-prefixed metadata comments, a "t,c_e" header,
// then one sample per line at 15 significant digits with LF endings. Output
// is a pure function of the trajectory, so repeated runs are byte-identical.

#pragma once

#include "spintraj/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <string>

namespace spintraj::io {

inline std::string format_g15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

inline std::string trajectory_csv(const Trajectory& traj) {
    std::string out;
    out.reserve(traj.t.size() * 44 + 256);
    out += "# weighting: " + to_string(traj.label) + "\n";
    out += "# kind: " + to_string(traj.kind) + "\n";
    out += "# epsilon: " + format_g15(traj.epsilon) + "\n";
    out += "# preset: " + to_string(traj.preset) + "\n";
    out += "# t_star: " + (traj.t_star ? format_g15(*traj.t_star) : std::string("none")) + "\n";
    out += "# frozen_time: " +
           (traj.frozen_time ? format_g15(*traj.frozen_time) : std::string("none")) + "\n";
    out += "# classification: " + to_string(traj.classification) + "\n";
    out += "t,c_e\n";
    for (size_t i = 0; i < traj.t.size(); ++i)
        out += format_g15(traj.t[i]) + "," + format_g15(traj.c_e[i]) + "\n";
    return out;
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << trajectory_csv(traj);
    if (!f) throw Error("write failed for '" + path + "'");
}

/// Deterministic file stem for a trajectory run, e.g.
/// "bounce_W3_mixed_eps+0.0100".
inline std::string trajectory_stem(const Trajectory& traj) {
    char eps[32];
    std::snprintf(eps, sizeof(eps), "%+.4f", traj.epsilon);
    return to_string(traj.preset) + "_" + to_string(traj.label) + "_" + to_string(traj.kind) +
           "_eps" + eps;
}

}  // namespace spintraj::io
