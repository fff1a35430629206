#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "stefanlab/field.hpp"
#include "stefanlab/geometry.hpp"

namespace stefanlab {

// temperature from enthalpy, unit latent heat: melted above E=1, frozen below 0
inline double beta_of(double E) {
    return std::min(E, 0.0) + std::max(E - 1.0, 0.0);
}

// Explicit conservative enthalpy scheme E' = E + dt * lap_h(beta(E)).
// Only E is stored; interior nodes per row form one contiguous span and every
// node outside the spans is pinned (its E never changes). Slab states mirror
// across the top/bottom faces instead of pinning those rows.
struct StefanState {
    Grid grid;
    double t = 0.0;
    double dt = 0.0;
    std::vector<double> E;
    std::vector<int> row_lo, row_hi;  // inclusive; lo > hi means fully pinned row
    bool reflect_y = false;
    long steps_taken = 0;

    // scratch beta(E) grid for the stepper
    std::vector<double> beta_;
};

// Disk state: interior |x| < R, the surrounding ring stays at u0 (give it -1).
StefanState make_disk_state(const ScalarField& u0, double R, double cfl = 0.9);
// Slab state: columns 0 and nx-1 pinned at u0, rows mirrored top/bottom.
StefanState make_slab_state(const ScalarField& u0, double cfl = 0.9);

ScalarField u_of(const StefanState& s);
void step(StefanState& s);

struct ConservationSample {
    double t = 0.0;
    double drift_rel = 0.0;  // |dE_interior - boundary flux| / max(1, |E_interior|)
};

// One step with the interior enthalpy budget audited against the pinned-face flux.
ConservationSample step_checked(StefanState& s);

struct Trajectory {
    Grid grid;
    std::vector<double> times;
    std::vector<std::vector<float>> snaps;

    int count() const { return int(times.size()); }
    int nearest(double t) const;
    double sample(int k, Vec2 p) const;  // bilinear; throws outside the grid
    ScalarField field(int k) const;
};

// Advances the state, capturing u at the first step whose time reaches each
// requested snapshot time (actual times recorded). check_every > 0 audits
// conservation on that step cadence.
Trajectory run(StefanState& s, std::vector<double> snapshot_times,
               std::vector<ConservationSample>* cons = nullptr,
               int check_every = 0);

// Manifest lines: "t <time> file <relative path>".
void write_trajectory(const Trajectory& traj, const std::string& dir,
                      const std::string& stem);
Trajectory read_trajectory(const std::string& manifest_path);

}  // namespace stefanlab
