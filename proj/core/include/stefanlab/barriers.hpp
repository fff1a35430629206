#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stefanlab/elliptic.hpp"
#include "stefanlab/front.hpp"
#include "stefanlab/stefan.hpp"

namespace stefanlab {

// Comparison field sampled at simulator snapshot times. Stored on a grid-
// aligned window; samples outside the window return outside_value (barriers
// built from collar functions extend by zero).
struct BarrierTrajectory {
    enum class Kind { Supersolution, Subsolution };
    Kind kind = Kind::Supersolution;
    Grid grid;
    std::vector<double> times;
    std::vector<std::vector<float>> snaps;
    double outside_value = 0.0;

    int count() const { return int(times.size()); }
    int nearest(double t) const;
    double sample(int k, Vec2 p) const;
};

// Outer radial envelope of a front, sampled at n uniform angles about the
// origin. Empty bins are filled by periodic interpolation.
std::vector<double> star_profile_from_front(const FrontCurve& fc, int n_angles);

// Harmonic function on the collar between an inner boundary (a circle of
// radius `inner` when inner_is_circle, else the profile scaled by `inner`)
// and the profile scaled by outer_scale; data inner_value inside, 0 outside.
struct CollarSpec {
    double outer_scale = 1.0;
    bool inner_is_circle = false;
    double inner = 0.0;
    double inner_value = 1.0;
    double tol = 1e-6;
};

ScalarField harmonic_collar(const Grid& g, const std::vector<double>& profile,
                            const CollarSpec& spec);

// Phi(x,t) = inf{omega(y) : |y-x| <= rho(t)}, rho(t) = r^b - (t-t_k) r^{b-2}/2
// (floored at zero). Needs 5/4 <= b < 61/48 and r < 1 so the recession speed
// r^{b-2}/2 dominates the collar gradient scale r^{13/24-b}, and an initial
// stencil radius of at least one cell.
BarrierTrajectory inf_convolution_supersolution(const ScalarField& omega, double r,
                                                double b, double t_k,
                                                const std::vector<double>& times);

// U2+(x,t) = (1-eps) sup{U1+(x0 + (1+sqrt(eps))(z-x0), t) :
//                        |z-x| <= sqrt(eps)(1-c(tau)) r_scale},
// c(tau) = tau^{4/5} with tau = (t-t0)/T clamped to [0,1].
BarrierTrajectory sup_convolution_subsolution(const BarrierTrajectory& U1, Vec2 x0,
                                              double r_scale, double eps, double t0,
                                              double T);

// Attaches the signed negative part: harmonic in the zero set within
// B_ring_R(x0), data 0 on the positive-set boundary and `level` on the ring,
// subtracted from the stored positive part.
void attach_negative_part(BarrierTrajectory& U, Vec2 x0, double ring_R,
                          double level, double tol = 1e-7);

// Receding logarithmic cap around y1: zero inside radius
// rc(t) = r^{5/4}/2 - C3 (t - t0), else 2 C2 r^{5/4} ln(s/rc)/ln(2 r^{5/4}/rc).
BarrierTrajectory radial_cap_barrier(Vec2 y1, double r, double C2, double C3,
                                     double t0, const Grid& g,
                                     const std::vector<double>& times);

struct CertRow {
    double t = 0.0;
    double max_violation = 0.0;
    Vec2 argmax;
};

struct Certification {
    std::vector<CertRow> rows;
    double max_violation = 0.0;
    Vec2 argmax;
    double tol = 0.0;
    bool pass = false;
};

// Supersolution barriers must dominate u, subsolution barriers must stay
// below; violations are measured at trajectory nodes where region() holds.
Certification certify_ordering(const Trajectory& u, const BarrierTrajectory& b,
                               const std::function<bool(Vec2)>& region, double tol);

// max over region of lower(x) - upper(x - shift) per matched time.
Certification certify_barrier_pair(const BarrierTrajectory& lower,
                                   const BarrierTrajectory& upper, Vec2 shift,
                                   const std::function<bool(Vec2)>& region,
                                   double tol);

void write_certification_csv(const Certification& c, const std::string& path);

// Differential audit of the inf-convolution: the front recedes at
// r^{b-2}/2, which must dominate the one-sided gradient on its zero set.
struct ConvolutionAudit {
    double speed = 0.0;
    double max_front_grad = 0.0;
    double margin = 0.0;  // speed - max_front_grad
};

ConvolutionAudit audit_inf_convolution(const BarrierTrajectory& phi, double r,
                                       double b);

// Closed-form audit of the radial cap: inner-ring slope vs the recession
// speed C3 at each sample time.
ConvolutionAudit audit_radial_cap(double r, double C2, double C3, double t0,
                                  const std::vector<double>& times);

}  // namespace stefanlab
