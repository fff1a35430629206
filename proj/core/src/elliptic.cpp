#include "stefanlab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace stefanlab {

namespace {

// Interior span [lo, hi] per row (disk/annulus masks give contiguous rows is
// not guaranteed here, so sweeps walk the full row and test the mask).
double residual_max(const MaskedRegion& rg, const ScalarField& u) {
    const Grid& g = rg.grid;
    const double inv_h2 = 1.0 / (g.h * g.h);
    double rmax = 0.0;
#pragma omp parallel for schedule(static) reduction(max : rmax)
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int k = g.idx(i, j);
            if (!rg.inside[k]) continue;
            double s = u.v[k - 1] + u.v[k + 1] + u.v[k - g.nx] + u.v[k + g.nx];
            rmax = std::max(rmax, std::fabs((s - 4.0 * u.v[k]) * inv_h2));
        }
    return rmax;
}

}  // namespace

SolveStats solve_dirichlet(const MaskedRegion& region, ScalarField& u,
                           double tol, int max_sweeps) {
    const Grid& g = region.grid;
    if (u.grid.nx != g.nx || u.grid.ny != g.ny)
        throw std::invalid_argument("solve_dirichlet: grid mismatch");
    // unknowns must not touch the outermost ring (their stencil would leave the grid)
    int span_w = 0, span_h = 0;
    {
        int i0 = g.nx, i1 = -1, j0 = g.ny, j1 = -1;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (region.inside[g.idx(i, j)]) {
                    if (i == 0 || i == g.nx - 1 || j == 0 || j == g.ny - 1)
                        throw std::invalid_argument("solve_dirichlet: unknown on grid edge");
                    i0 = std::min(i0, i); i1 = std::max(i1, i);
                    j0 = std::min(j0, j); j1 = std::max(j1, j);
                }
        if (i1 < i0) return {0, 0.0, true};  // nothing to solve
        span_w = i1 - i0 + 1;
        span_h = j1 - j0 + 1;
    }

    for (std::size_t k = 0; k < g.size(); ++k)
        if (!region.inside[k]) u.v[k] = region.bval[k];

    const int n_eff = std::max(span_w, span_h);
    const double omega = 2.0 / (1.0 + std::sin(3.14159265358979323846 / n_eff));
    SolveStats st;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        // same-color nodes never share a stencil edge, so each color sweep is
        // race-free row-parallel and bitwise independent of the schedule
        for (int color = 0; color < 2; ++color) {
#pragma omp parallel for schedule(static)
            for (int j = 1; j < g.ny - 1; ++j) {
                int i = 1 + ((j + color) & 1);
                int k = g.idx(i, j);
                for (; i + 1 < g.nx; i += 2, k += 2) {
                    if (!region.inside[k]) continue;
                    double s = u.v[k - 1] + u.v[k + 1] + u.v[k - g.nx] + u.v[k + g.nx];
                    u.v[k] += omega * (0.25 * s - u.v[k]);
                }
            }
        }
        st.sweeps = sweep;
        if (sweep % 20 == 0 || sweep == max_sweeps) {
            st.residual = residual_max(region, u);
            if (st.residual <= tol) {
                st.converged = true;
                return st;
            }
        }
    }
    st.residual = residual_max(region, u);
    st.converged = st.residual <= tol;
    return st;
}

double max_masked_laplacian(const MaskedRegion& region, const ScalarField& u) {
    return residual_max(region, u);
}

InitialData build_initial_data(const StarDomain& dom, double R, double h,
                               double tol, double spike_factor,
                               double spike_theta, double spike_width) {
    if (dom.max_radius() >= 0.5 * R)
        throw std::invalid_argument("build_initial_data: domain not inside B_{R/2}");
    InitialData out;
    Grid g = Grid::covering(-R - 2.0 * h, -R - 2.0 * h, R + 2.0 * h, R + 2.0 * h, h);
    const double r0 = dom.r0;

    std::vector<std::uint8_t> in_dom(g.size());
    std::vector<double> rad(g.size()), theta(g.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int k = g.idx(i, j);
            Vec2 p = g.pos(i, j);
            rad[k] = norm(p - dom.center);
            theta[k] = std::atan2(p.y - dom.center.y, p.x - dom.center.x);
            in_dom[k] = dom.contains(p) ? 1 : 0;
        }

    // positive phase: dom \ B_r0, data 1 inside / 0 outside
    ScalarField upos(g);
    {
        MaskedRegion rg(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            double rho = dom.radius(theta[k]);
            if (in_dom[k] && rad[k] > r0) {
                rg.inside[k] = 1;
                upos.v[k] = std::clamp(std::log(rad[k] / rho) / std::log(r0 / rho), 0.0, 1.0);
            } else {
                rg.bval[k] = rad[k] <= r0 ? 1.0 : 0.0;
            }
        }
        out.pos = solve_dirichlet(rg, upos, tol);
    }

    // negative phase: B_R \ dom, data 0 on the front / -1 on the R-circle
    ScalarField uneg(g);
    {
        MaskedRegion rg(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            double rho = dom.radius(theta[k]);
            if (!in_dom[k] && rad[k] < R) {
                rg.inside[k] = 1;
                uneg.v[k] = std::clamp(-std::log(rad[k] / rho) / std::log(R / rho), -1.0, 0.0);
            } else {
                rg.bval[k] = in_dom[k] ? 0.0 : -1.0;
            }
        }
        out.neg = solve_dirichlet(rg, uneg, tol);
    }

    // radial derivative of the annulus solution just outside the r0-circle,
    // angle-averaged, fixes the C^1 paraboloid cap
    double dudr = 0.0;
    {
        const int na = 64;
        int used = 0;
        for (int a = 0; a < na; ++a) {
            double th = 2.0 * 3.14159265358979323846 * (a + 0.5) / na;
            Vec2 e = {std::cos(th), std::sin(th)};
            auto v1 = upos.sample(dom.center + (r0 + h) * e);
            auto v2 = upos.sample(dom.center + (r0 + 3.0 * h) * e);
            if (v1 && v2) {
                dudr += (*v2 - *v1) / (2.0 * h);
                ++used;
            }
        }
        dudr /= std::max(1, used);
    }
    const double A = -r0 * dudr;  // > 0 when u decays outward

    ScalarField u0(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (in_dom[k]) {
            if (rad[k] > r0)
                u0.v[k] = upos.v[k];
            else
                u0.v[k] = 1.0 + 0.5 * A * (1.0 - rad[k] * rad[k] / (r0 * r0));
        } else {
            u0.v[k] = rad[k] < R ? uneg.v[k] : -1.0;
        }
    }

    if (spike_factor != 1.0) {
        Vec2 xs = dom.boundary_point(spike_theta);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                std::size_t k = std::size_t(g.idx(i, j));
                if (!in_dom[k]) continue;
                Vec2 dp = g.pos(i, j) - xs;
                double q = dot(dp, dp) / (spike_width * spike_width);
                u0.v[k] *= 1.0 + (spike_factor - 1.0) * std::exp(-q);
            }
    }

    // N0 = max |lap u0| away from the sign change (and off the pinned outer ring)
    double N0 = 0.0;
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            int k = g.idx(i, j);
            if (rad[k] >= R - 2.0 * h) continue;
            bool s0 = u0.v[k] > 0.0;
            bool mixed = (u0.v[k - 1] > 0.0) != s0 || (u0.v[k + 1] > 0.0) != s0 ||
                         (u0.v[k - g.nx] > 0.0) != s0 || (u0.v[k + g.nx] > 0.0) != s0;
            if (mixed) continue;
            double lap = (u0.v[k - 1] + u0.v[k + 1] + u0.v[k - g.nx] + u0.v[k + g.nx] -
                          4.0 * u0.v[k]) / (h * h);
            N0 = std::max(N0, std::fabs(lap));
        }
    out.N0 = N0;
    out.u0 = std::move(u0);
    out.max_grad = max_gradient(out.u0);
    return out;
}

GrowthFit growth_exponents(const ScalarField& u0, const ProbeSet& probes,
                           const std::vector<double>& s_ladder) {
    if (s_ladder.size() < 3)
        throw std::invalid_argument("growth_exponents: need >= 3 scales");
    GrowthFit fit;
    for (const Probe& pr : probes.probes) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (double s : s_ladder) {
            auto v = u0.sample(pr.x0 - s * pr.e_n);
            if (!v || *v <= 0.0) continue;
            double X = std::log(s), Y = std::log(*v);
            sx += X; sy += Y; sxx += X * X; sxy += X * Y;
            ++n;
        }
        if (n < 3)
            throw std::runtime_error("growth_exponents: probe ray left the positive phase");
        fit.slope.push_back((n * sxy - sx * sy) / (n * sxx - sx * sx));
    }
    fit.alpha_hat = *std::max_element(fit.slope.begin(), fit.slope.end());
    fit.beta_hat = *std::min_element(fit.slope.begin(), fit.slope.end());
    return fit;
}

namespace {

// |grad|^2 with one-sided differences into the support near its edge
double grad_sq_in_support(const ScalarField& f, int i, int j) {
    const Grid& g = f.grid;
    double c = f.at(i, j);
    if (c <= 0.0) return 0.0;
    auto diff1d = [&](int ia, int ja, int ib, int jb, double ca) -> double {
        bool pa = g.in_bounds(ia, ja) && f.at(ia, ja) > 0.0;
        bool pb = g.in_bounds(ib, jb) && f.at(ib, jb) > 0.0;
        if (pa && pb) return (f.at(ib, jb) - f.at(ia, ja)) / (2.0 * g.h);
        if (pb) return (f.at(ib, jb) - ca) / g.h;
        if (pa) return (ca - f.at(ia, ja)) / g.h;
        return 0.0;
    };
    double gx = diff1d(i - 1, j, i + 1, j, c);
    double gy = diff1d(i, j - 1, i, j + 1, c);
    return gx * gx + gy * gy;
}

}  // namespace

ACFSeries acf_phi(const ScalarField& hp, const ScalarField& hm, Vec2 x0,
                  const std::vector<double>& radii) {
    const Grid& g = hp.grid;
    if (hm.grid.nx != g.nx || hm.grid.ny != g.ny)
        throw std::invalid_argument("acf_phi: grid mismatch");
    int overlap = 0;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (hp.v[k] > 0.0 && hm.v[k] > 0.0) ++overlap;
    // a one-cell seam along the common zero set is tolerated, more is an error
    if (overlap > 2 * (g.nx + g.ny))
        throw std::invalid_argument("acf_phi: supports overlap beyond a cell band");

    double rmax = *std::max_element(radii.begin(), radii.end());
    struct Node { double r2, wp, wm; };
    std::vector<Node> nodes;
    int i0 = std::max(0, int((x0.x - rmax - g.ox) / g.h) - 1);
    int i1 = std::min(g.nx - 1, int((x0.x + rmax - g.ox) / g.h) + 1);
    int j0 = std::max(0, int((x0.y - rmax - g.oy) / g.h) - 1);
    int j1 = std::min(g.ny - 1, int((x0.y + rmax - g.oy) / g.h) + 1);
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
            Vec2 p = g.pos(i, j);
            double r2 = dot(p - x0, p - x0);
            if (r2 > rmax * rmax) continue;
            nodes.push_back({r2, grad_sq_in_support(hp, i, j),
                             grad_sq_in_support(hm, i, j)});
        }
    std::sort(nodes.begin(), nodes.end(),
              [](const Node& a, const Node& b) { return a.r2 < b.r2; });

    ACFSeries out;
    out.r = radii;
    std::sort(out.r.begin(), out.r.end());
    const double cell = g.h * g.h;
    double ip = 0.0, im = 0.0;
    std::size_t pos = 0;
    for (double r : out.r) {
        while (pos < nodes.size() && nodes[pos].r2 <= r * r) {
            ip += nodes[pos].wp * cell;
            im += nodes[pos].wm * cell;
            ++pos;
        }
        out.phi.push_back(ip * im / (r * r * r * r));
    }
    return out;
}

void write_acf_csv(const ACFSeries& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_acf_csv: cannot open " + path);
    out << "r,phi\n";
    char buf[80];
    for (std::size_t k = 0; k < s.r.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.r[k], s.phi[k]);
        out << buf;
    }
}

FluxPair flux_product_check(const ScalarField& hp, const ScalarField& hm,
                            Vec2 x0, Vec2 e_n, double d) {
    if (d <= 0.0) throw std::invalid_argument("flux_product_check: d <= 0");
    FluxPair fp;
    fp.plus = std::max(0.0, hp.sample_or(x0 - d * e_n, 0.0)) / d;
    fp.minus = std::max(0.0, hm.sample_or(x0 + d * e_n, 0.0)) / d;
    return fp;
}

}  // namespace stefanlab
