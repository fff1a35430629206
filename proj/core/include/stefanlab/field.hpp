#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stefanlab/geometry.hpp"

namespace stefanlab {

// Grid function with a time stamp. Values are node samples, row-major.
struct ScalarField {
    Grid grid;
    double t = 0.0;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0, double time = 0.0)
        : grid(g), t(time), v(g.size(), fill) {}

    double& at(int i, int j) { return v[grid.idx(i, j)]; }
    double at(int i, int j) const { return v[grid.idx(i, j)]; }

    // Bilinear interpolation. Empty if p falls outside the node hull.
    std::optional<double> sample(Vec2 p) const;
    double sample_or(Vec2 p, double fallback) const;
};

// Snapshot file: one header line "nx ny h ox oy t", then ny lines of nx
// values each (row j on line j). Round-trips exactly (17 significant digits).
void write_snapshot(const ScalarField& f, const std::string& path);
ScalarField read_snapshot(const std::string& path);

double max_abs(const ScalarField& f);
// Largest central-difference gradient magnitude over interior nodes.
double max_gradient(const ScalarField& f);

}  // namespace stefanlab
