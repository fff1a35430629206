#pragma once

#include <vector>

#include "stefanlab/field.hpp"
#include "stefanlab/geometry.hpp"

namespace stefanlab {

// Dirichlet problem on an arbitrary node mask. `inside` marks unknowns;
// every other node is boundary data read from `bval`.
struct MaskedRegion {
    Grid grid;
    std::vector<std::uint8_t> inside;
    std::vector<double> bval;

    MaskedRegion() = default;
    explicit MaskedRegion(const Grid& g)
        : grid(g), inside(g.size(), 0), bval(g.size(), 0.0) {}
};

struct SolveStats {
    int sweeps = 0;
    double residual = 0.0;  // final max |5-point laplacian| over inside nodes
    bool converged = false;
};

// Red-black SOR. `u` carries the initial guess in and the solution out;
// entries at boundary nodes are overwritten with bval. Residual is measured
// in laplacian units (value / h^2).
SolveStats solve_dirichlet(const MaskedRegion& region, ScalarField& u,
                           double tol, int max_sweeps = 200000);

double max_masked_laplacian(const MaskedRegion& region, const ScalarField& u);

// Two-phase initial state on the disk B_R(0): harmonic in dom \ B_r0 with
// data 1 on the r0-circle and 0 on the front, harmonic in B_R \ dom with data
// 0 on the front and -1 on the R-circle, C^1 paraboloid cap inside B_r0.
// An optional hot spot multiplies the positive phase by
// 1 + (spike_factor - 1) * exp(-(|x - x_s|/spike_width)^2) where x_s is the
// boundary point at angle spike_theta and spike_width is a length.
struct InitialData {
    ScalarField u0;
    double N0 = 0.0;        // max |discrete laplacian| away from the front
    double max_grad = 0.0;  // max central gradient, used to scale tolerances
    SolveStats pos, neg;
};

InitialData build_initial_data(const StarDomain& dom, double R, double h,
                               double tol = 1e-4, double spike_factor = 1.0,
                               double spike_theta = 0.0, double spike_width = 0.3);

// Least-squares slope of log u0+(x0 - s e_n) against log s, one per probe.
struct GrowthFit {
    std::vector<double> slope;  // per probe
    double alpha_hat = 0.0;     // max slope
    double beta_hat = 0.0;      // min slope
};

GrowthFit growth_exponents(const ScalarField& u0, const ProbeSet& probes,
                           const std::vector<double>& s_ladder);

// Monotonicity functional of a disjointly supported pair (hp, hm >= 0):
// phi(r) = r^-4 * Int_{B_r(x0)} |grad hp|^2 * Int_{B_r(x0)} |grad hm|^2
// (two space dimensions, so the |x|^{2-n} weight is identically 1).
// Gradients use central differences, falling back to one-sided differences
// into the support so the integrand never straddles the zero set.
struct ACFSeries {
    std::vector<double> r;
    std::vector<double> phi;
};

ACFSeries acf_phi(const ScalarField& hp, const ScalarField& hm, Vec2 x0,
                  const std::vector<double>& radii);

void write_acf_csv(const ACFSeries& s, const std::string& path);

// (hp(x0 - d e_n)/d, hm(x0 + d e_n)/d); the proof bounds their product.
struct FluxPair {
    double plus = 0.0;
    double minus = 0.0;
    double product() const { return plus * minus; }
};

FluxPair flux_product_check(const ScalarField& hp, const ScalarField& hm,
                            Vec2 x0, Vec2 e_n, double d);

}  // namespace stefanlab
