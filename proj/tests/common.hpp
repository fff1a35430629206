#pragma once

// Shared fixtures for the test binaries: canonical domains, closed forms for
// the two-phase radial profile, and small manufactured trajectories.

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "stefanlab/analysis.hpp"
#include "stefanlab/barriers.hpp"
#include "stefanlab/elliptic.hpp"
#include "stefanlab/field.hpp"
#include "stefanlab/front.hpp"
#include "stefanlab/geometry.hpp"
#include "stefanlab/neumann.hpp"
#include "stefanlab/runner.hpp"
#include "stefanlab/scenario.hpp"
#include "stefanlab/stefan.hpp"

namespace testbed {

using namespace stefanlab;

inline constexpr double kPi = 3.14159265358979323846;

inline StarDomain circle_domain() {
    return build_star_domain(0, 0.0, 0.5, 1.0, 256);
}

// Closed forms for the standard circle scenario (unit front, R = 4): the
// positive phase is the log annulus between r0 = 1/2 and 1, the negative
// phase the log annulus between 1 and 4.
inline double circle_plus(double rad) {
    return std::log(1.0 / rad) / std::log(2.0);
}
inline double circle_minus(double rad) {
    return -std::log(rad) / std::log(4.0);
}

inline const InitialData& circle_init_64() {
    static InitialData d = build_initial_data(circle_domain(), 4.0, 1.0 / 64.0);
    return d;
}

// Hot spot sharp enough to trip the one-phase machinery at scale r = 0.1
// about the theta = 0 anchor while leaving the anchor fluxes balanced.
inline const InitialData& spiked_init_128() {
    static InitialData d = build_initial_data(circle_domain(), 4.0, 1.0 / 128.0,
                                              1e-4, 60.0, 0.095, 0.055);
    return d;
}

inline ScalarField field_of(const Grid& g, double t,
                            const std::function<double(Vec2)>& f) {
    ScalarField u(g, 0.0, t);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) u.at(i, j) = f(g.pos(i, j));
    return u;
}

inline Trajectory traj_of(const std::vector<ScalarField>& fields) {
    Trajectory tr;
    tr.grid = fields.front().grid;
    for (const ScalarField& f : fields) {
        tr.times.push_back(f.t);
        std::vector<float> snap(f.v.size());
        for (std::size_t k = 0; k < f.v.size(); ++k) snap[k] = float(f.v[k]);
        tr.snaps.push_back(std::move(snap));
    }
    return tr;
}

inline BarrierTrajectory barrier_of(const std::vector<ScalarField>& fields,
                                    BarrierTrajectory::Kind kind,
                                    double outside = 0.0) {
    BarrierTrajectory bt;
    bt.kind = kind;
    bt.grid = fields.front().grid;
    bt.outside_value = outside;
    for (const ScalarField& f : fields) {
        bt.times.push_back(f.t);
        std::vector<float> snap(f.v.size());
        for (std::size_t k = 0; k < f.v.size(); ++k) snap[k] = float(f.v[k]);
        bt.snaps.push_back(std::move(snap));
    }
    return bt;
}

// Counter-clockwise polyline circle (positive phase inside on the left).
inline FrontCurve circle_curve(double rho, double t, int n = 1024) {
    FrontCurve fc;
    fc.t = t;
    FrontCurve::Chain ch;
    ch.closed = true;
    for (int k = 0; k < n; ++k) {
        double a = 2.0 * kPi * k / n;
        ch.pts.push_back({rho * std::cos(a), rho * std::sin(a)});
    }
    fc.chains.push_back(std::move(ch));
    return fc;
}

inline std::string scenario_path(const std::string& name) {
    return std::string(STEFANLAB_SCENARIO_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool same_bytes(const std::string& a, const std::string& b) {
    return read_file(a) == read_file(b);
}

}  // namespace testbed
