#pragma once

#include <optional>
#include <vector>

#include "stefanlab/field.hpp"
#include "stefanlab/stefan.hpp"

namespace stefanlab {

// Zero level set of u, oriented so the positive phase lies on the left of the
// travel direction. Nodes with u = 0 count as negative (the positive phase is
// the open set {u > 0}), which pins the contour against the melted side of
// any mushy band. Chains that hit the grid boundary stay open.
struct FrontCurve {
    struct Chain {
        std::vector<Vec2> pts;
        bool closed = false;
    };
    std::vector<Chain> chains;
    double t = 0.0;

    std::size_t vertex_count() const;
    // longest chain is the primary interface in the scenarios here
    const Chain* primary() const;
};

FrontCurve extract_front(const ScalarField& u);
FrontCurve extract_front(const Trajectory& traj, int k);

// Symmetric Hausdorff distance between vertex sets measured against segments.
double hausdorff(const FrontCurve& a, const FrontCurve& b);

// Signed position s of the zero crossing of u(x0 + s e_n) for s in
// [-window, window], sampled at half-cell steps with linear refinement.
// farthest=true returns the crossing of largest |s| (the penetration
// supremum), otherwise the one nearest x0. Empty when no sign change.
std::optional<double> ray_front_crossing(const ScalarField& u, Vec2 x0, Vec2 e_n,
                                         double window, bool farthest = true);
std::optional<double> ray_front_crossing(const Trajectory& traj, int k, Vec2 x0,
                                         Vec2 e_n, double window,
                                         bool farthest = true);

// Two-sided penetration depth of the front through x0 along +-e_n.
std::optional<double> front_distance(const Trajectory& traj, int k, Vec2 x0,
                                     Vec2 e_n, double window);

// One-sided two-point difference of u along e_n using samples from the
// requested phase side (+1 uses x and x - delta e_n, -1 uses x + delta e_n
// and x). Falls back to a cell-sized offset when the stencil crosses the
// front; ok=false when even that fails.
struct GradProbe {
    double value = 0.0;
    bool fallback = false;
    bool ok = false;
};

GradProbe gradient_one_sided(const ScalarField& u, Vec2 x, int phase, Vec2 e_n,
                             double delta);
GradProbe gradient_one_sided(const Trajectory& traj, int k, Vec2 x, int phase,
                             Vec2 e_n, double delta);

}  // namespace stefanlab
