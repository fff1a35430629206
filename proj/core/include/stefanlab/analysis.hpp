#pragma once

#include <string>
#include <vector>

#include "stefanlab/elliptic.hpp"
#include "stefanlab/front.hpp"
#include "stefanlab/geometry.hpp"
#include "stefanlab/stefan.hpp"

namespace stefanlab {

// t(x0,d) = min(d^2/u+(x0 - d e_n, 0), d^2/u-(x0 + d e_n, 0)); in_band checks
// membership in [d^{7/6}, d^{5/6}]. ok is false when either one-sided value
// is below 1e-12 (one-phase or misplaced probe).
struct WaitingTime {
    double u_plus = 0.0;
    double u_minus = 0.0;
    double t_wait = 0.0;
    bool ok = false;
    bool in_band = false;
};

WaitingTime waiting_time(const ScalarField& u0, Vec2 x0, Vec2 e_n, double d);

struct FluxRatios {
    double r_plus = 0.0;
    double r_minus = 0.0;
    bool one_phase = false;
};

FluxRatios flux_ratios(const ScalarField& u0, Vec2 x0, Vec2 e_n, double d);

// Envelopes of u(p,t2)/u(p,t1) (fwd) and its reciprocal orientation (bwd)
// over ordered snapshot pairs with t2 <= min(t_wait, t1 + t_wait/2); pairs
// anchored at the first snapshot run up to t_wait itself. phase +1 reads
// max(u,0), phase -1 reads max(-u,0); samples under 1e-14 are skipped.
struct HarnackSeries {
    double fwd = 0.0;
    double bwd = 0.0;
    int n_pairs = 0;
};

HarnackSeries harnack_ratios(const Trajectory& traj, Vec2 p, int phase,
                             double t_wait);

// One boundary arc of the good/bad decomposition at scale r about x0.
// side +1 tests u+(x - s e, 0)/s against M C0, side -1 tests u-(x + s e, 0)/s.
// Bad arcs carry the largest root r_x of ratio(s) = M C0 and the box height
// r_x/(M C0).
struct DecompArc {
    Vec2 x;
    double theta = 0.0;
    int side = +1;
    bool bad = false;
    double r_x = 0.0;
    double t_height = 0.0;
    double max_ratio = 0.0;
};

struct DecompositionReport {
    Vec2 center;  // star center the normals point away from
    Vec2 x0;
    double r = 0.0;
    double M = 0.0;
    double C0 = 0.0;
    double t_top = 0.0;
    double h = 0.0;
    double lemma41_const = 0.0;  // worst opposite-side ratio / C0 at bad events
    std::vector<double> s_ladder;
    std::vector<DecompArc> arcs;

    // Membership in Sigma = B_r(x0) x [0, t_top] minus the bad boxes, each
    // ball inflated by inflate_cells grid cells.
    bool in_sigma(Vec2 y, double t, double inflate_cells = 1.0) const;
    int n_bad() const;
};

DecompositionReport decompose(const ScalarField& u0, const StarDomain& dom,
                              Vec2 x0, double r, double M);

// K = max over front vertices in Sigma and s in the ladder of
// u±(x -+ s e_n, t)/s, divided by M C0.
struct ConditionA {
    double K = 0.0;
    int n_checked = 0;
};

ConditionA condition_A_constant(const Trajectory& traj,
                                const DecompositionReport& rep);

// Normal front displacement over lag tau = r^{5/4}/(K1 M C0) for anchors on
// the front inside Sigma; bound r^{5/4} + 3h.
struct TimeLipschitz {
    double K1 = 0.0;
    double tau = 0.0;
    double max_disp = 0.0;
    double bound = 0.0;
    int n_pairs = 0;
    int n_missing = 0;
    bool pass = false;
};

TimeLipschitz time_lipschitz_check(const Trajectory& traj,
                                   const DecompositionReport& rep, double K1,
                                   double dt);

// Log-log least squares of the front displacement d(x0, t) against t, where
// d is the farthest front crossing along the probe ray (either direction).
// Samples with d < min_d drop; needs 5 samples to conclude.
struct DistanceLawFit {
    double p_hat = 0.0;
    int n_pts = 0;
    bool ok = false;
    bool in_band = false;
    double band_lo = 0.0;
    double band_hi = 0.0;
};

DistanceLawFit distance_law_fit(const Trajectory& traj, Vec2 x0, Vec2 e_n,
                                double band_lo, double band_hi);
// Same fit against explicit front curves: ray/segment intersection.
DistanceLawFit distance_law_fit(const std::vector<FrontCurve>& fronts,
                                const std::vector<double>& times, Vec2 x0,
                                Vec2 e_n, double band_lo, double band_hi,
                                double min_d = 0.0);

// Gradient bound over B_r(x0) x [t_wait/2, t_wait] with the anchor values
// read at the first snapshot past t_wait/2:
// C_hat = max |grad u±| r / u±(x0 -+ r e_n, t0). trigger records whether the
// ball is flux-unbalanced (R+ >= M or R- >= M) at the anchor.
struct BadBallCheck {
    bool trigger = false;
    double R_anchor = 0.0;
    double C_hat = 0.0;
    int n_samples = 0;
};

BadBallCheck bad_ball_gradient_check(const Trajectory& traj, Vec2 center, Vec2 x0,
                                     double r, double t_wait, double M);

// Range of |grad u±| d / u±(x0 -+ d e_n, 0) at ray front crossings over
// [t_wait/2, t_wait] for a balanced probe.
struct GradBand {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
    bool ok = false;
};

GradBand gradient_comparability_check(const Trajectory& traj, Vec2 center, Vec2 x0,
                                      Vec2 e_n, double d, const WaitingTime& wt);

// Max positive violation of u(x0 + (1+sigma)(x-x0), T) <= u(x, T) over grid
// nodes and dilation centers in B_{r0/2}(0), per snapshot with
// T <= (1+sigma)^2 sigma^{1/5}/3. Reports the base time t = T/(1+sigma)^2.
struct DefectRow {
    double t = 0.0;
    double defect = 0.0;
};

std::vector<DefectRow> star_shape_defect(const Trajectory& traj, double sigma,
                                         double r0);

struct RegularityRow {
    Vec2 x0;
    double d = 0.0;
    double t_wait = 0.0;
    double r_plus = 0.0;
    double r_minus = 0.0;
    double C0 = 0.0;
    bool is_bad = false;
    double harnack_fwd = 0.0;
    double harnack_bwd = 0.0;
    double K_cond_A = 0.0;
    double p_hat = 0.0;
    double C_grad = 0.0;
};

// Per-probe bad test at scale d: any s in [d^{5/4}, d] with a one-sided
// ratio at least M C0.
bool probe_is_bad(const ScalarField& u0, Vec2 x0, Vec2 e_n, double d, double M,
                  double C0);

void write_regularity_csv(const std::vector<RegularityRow>& rows,
                          const std::string& path);

}  // namespace stefanlab
