#include "stefanlab/field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stefanlab {

std::optional<double> ScalarField::sample(Vec2 p) const {
    const Grid& g = grid;
    double fx = (p.x - g.ox) / g.h;
    double fy = (p.y - g.oy) / g.h;
    if (fx < 0.0 || fy < 0.0 || fx > g.nx - 1 || fy > g.ny - 1) return std::nullopt;
    int i = std::min(int(fx), g.nx - 2);
    int j = std::min(int(fy), g.ny - 2);
    double ax = fx - i, ay = fy - j;
    const double* b = v.data() + g.idx(i, j);
    double lo = b[0] * (1.0 - ax) + b[1] * ax;
    double hi = b[g.nx] * (1.0 - ax) + b[g.nx + 1] * ax;
    return lo * (1.0 - ay) + hi * ay;
}

double ScalarField::sample_or(Vec2 p, double fallback) const {
    auto s = sample(p);
    return s ? *s : fallback;
}

void write_snapshot(const ScalarField& f, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
    char head[160];
    int n = std::snprintf(head, sizeof head, "%d %d %.17g %.17g %.17g %.17g\n",
                          f.grid.nx, f.grid.ny, f.grid.h, f.grid.ox, f.grid.oy, f.t);
    std::fwrite(head, 1, n, out);
    std::string line;
    line.reserve(std::size_t(f.grid.nx) * 26);
    char buf[40];
    for (int j = 0; j < f.grid.ny; ++j) {
        line.clear();
        const double* row = f.v.data() + f.grid.idx(0, j);
        for (int i = 0; i < f.grid.nx; ++i) {
            int m = std::snprintf(buf, sizeof buf, i ? " %.17g" : "%.17g", row[i]);
            line.append(buf, m);
        }
        line.push_back('\n');
        std::fwrite(line.data(), 1, line.size(), out);
    }
    std::fclose(out);
}

ScalarField read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    ScalarField f;
    if (!(in >> f.grid.nx >> f.grid.ny >> f.grid.h >> f.grid.ox >> f.grid.oy >> f.t))
        throw std::runtime_error("read_snapshot: bad header in " + path);
    if (f.grid.nx <= 0 || f.grid.ny <= 0)
        throw std::runtime_error("read_snapshot: bad dimensions in " + path);
    f.v.resize(f.grid.size());
    for (double& x : f.v)
        if (!(in >> x)) throw std::runtime_error("read_snapshot: truncated " + path);
    return f;
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::fabs(x));
    return m;
}

double max_gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    double m = 0.0;
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            double gx = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * g.h);
            double gy = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * g.h);
            m = std::max(m, std::hypot(gx, gy));
        }
    return m;
}

}  // namespace stefanlab
