#pragma once

#include <string>
#include <vector>

namespace stefanlab {

// Flat key=value configuration with [section] headers and # comments.
// Unknown keys are errors so typos cannot silently fall back to defaults.
struct Scenario {
    enum class Kind { Disk, Slab };

    std::string name = "unnamed";
    Kind kind = Kind::Disk;

    // [domain]
    unsigned seed = 0;
    double target_L = 0.0;
    double r0 = 0.5;
    double base_radius = 1.0;
    double R = 4.0;
    int n_angles = 256;
    double spike_factor = 1.0;
    double spike_theta = 0.0;
    double spike_width = 0.3;

    // [slab]
    double slab_length = 1.25;
    int slab_ny = 4;
    double stefan_number = 1.0;
    double slab_t0 = 0.1;
    std::string slab_profile = "similarity";  // or "linear"

    // [grid]
    double h = 1.0 / 128.0;

    // [solver]
    double cfl = 0.9;
    double t_end = 0.15;
    int n_snapshots = 12;
    std::vector<double> snapshot_times;  // optional explicit override
    double solve_tol = 1e-4;

    // [analysis]
    int n_probes = 8;
    std::vector<double> d_ladder = {0.05, 0.1, 0.2};
    double M = 10.0;
    std::vector<double> M_sweep = {5.0, 10.0, 20.0};
    std::vector<double> K1_sweep = {1.0, 2.0, 4.0, 8.0};
    double sigma = 0.05;
    double r_decomp = 0.1;

    // [barriers]
    bool barriers_enable = true;
    double barrier_b = 1.25;
    double barrier_r = 0.1;
    double C_n = 4.0;
    double c_neg = 1.0;
    double cap_C2 = 1.0;
    double cap_C3 = 2.0;
};

Scenario parse_scenario(const std::string& text);
Scenario read_scenario(const std::string& path);

// Halves h k times; dt follows through cfl in the solver setup.
void apply_refine(Scenario& sc, int k);

}  // namespace stefanlab
