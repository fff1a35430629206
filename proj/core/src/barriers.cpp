#include "stefanlab/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <stdexcept>

namespace stefanlab {

namespace {

double interp_profile(const std::vector<double>& prof, double theta) {
    const int n = int(prof.size());
    double s = theta / (2.0 * M_PI) * n;
    s -= std::floor(s / n) * n;
    int k = int(std::floor(s));
    double f = s - k;
    return prof[k % n] * (1.0 - f) + prof[(k + 1) % n] * f;
}

// Grid-aligned window of g covering [x0,x1]x[y0,y1], clipped to g.
Grid make_window(const Grid& g, double x0, double y0, double x1, double y1) {
    int i0 = std::max(0, int(std::floor((x0 - g.ox) / g.h)));
    int j0 = std::max(0, int(std::floor((y0 - g.oy) / g.h)));
    int i1 = std::min(g.nx - 1, int(std::ceil((x1 - g.ox) / g.h)));
    int j1 = std::min(g.ny - 1, int(std::ceil((y1 - g.oy) / g.h)));
    if (i1 < i0 || j1 < j0) throw std::runtime_error("barrier window is empty");
    Grid w;
    w.nx = i1 - i0 + 1;
    w.ny = j1 - j0 + 1;
    w.h = g.h;
    w.ox = g.ox + i0 * g.h;
    w.oy = g.oy + j0 * g.h;
    return w;
}

// res[i] = min src[i .. i+2w], res.size() = src.size() - 2w.
void sliding_min(const std::vector<double>& src, int w, std::vector<double>& res) {
    const int n = int(src.size());
    const int win = 2 * w + 1;
    res.assign(n - 2 * w, 0.0);
    std::deque<int> dq;
    for (int i = 0; i < n; ++i) {
        while (!dq.empty() && src[dq.back()] >= src[i]) dq.pop_back();
        dq.push_back(i);
        if (dq.front() <= i - win) dq.pop_front();
        if (i >= 2 * w) res[i - 2 * w] = src[dq.front()];
    }
}

}  // namespace

int BarrierTrajectory::nearest(double t) const {
    if (times.empty()) throw std::runtime_error("barrier has no snapshots");
    int best = 0;
    for (int k = 1; k < count(); ++k)
        if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
    return best;
}

double BarrierTrajectory::sample(int k, Vec2 p) const {
    double fx = (p.x - grid.ox) / grid.h;
    double fy = (p.y - grid.oy) / grid.h;
    if (fx < 0.0 || fy < 0.0 || fx > grid.nx - 1 || fy > grid.ny - 1)
        return outside_value;
    int i = std::min(int(fx), grid.nx - 2);
    int j = std::min(int(fy), grid.ny - 2);
    if (grid.nx == 1) i = 0;
    if (grid.ny == 1) j = 0;
    double ax = fx - i, ay = fy - j;
    const std::vector<float>& v = snaps[size_t(k)];
    auto at = [&](int ii, int jj) { return double(v[size_t(jj) * grid.nx + ii]); };
    int i1 = std::min(i + 1, grid.nx - 1), j1 = std::min(j + 1, grid.ny - 1);
    return (1 - ax) * (1 - ay) * at(i, j) + ax * (1 - ay) * at(i1, j) +
           (1 - ax) * ay * at(i, j1) + ax * ay * at(i1, j1);
}

std::vector<double> star_profile_from_front(const FrontCurve& fc, int n_angles) {
    if (n_angles < 8) throw std::invalid_argument("star_profile_from_front: n_angles < 8");
    std::vector<double> prof(size_t(n_angles), -1.0);
    for (const auto& ch : fc.chains) {
        for (const Vec2& p : ch.pts) {
            double r = norm(p);
            if (r < 1e-14) continue;
            double th = std::atan2(p.y, p.x);
            int k = int(std::floor((th + 2.0 * M_PI) / (2.0 * M_PI) * n_angles)) % n_angles;
            prof[size_t(k)] = std::max(prof[size_t(k)], r);
        }
    }
    // Fill empty bins from the nearest populated neighbours, periodically.
    for (int k = 0; k < n_angles; ++k) {
        if (prof[size_t(k)] > 0.0) continue;
        int lo = k, hi = k;
        for (int s = 1; s < n_angles; ++s) {
            int m = (k - s + n_angles) % n_angles;
            if (prof[size_t(m)] > 0.0) { lo = m; break; }
        }
        for (int s = 1; s < n_angles; ++s) {
            int m = (k + s) % n_angles;
            if (prof[size_t(m)] > 0.0) { hi = m; break; }
        }
        if (prof[size_t(lo)] <= 0.0 || prof[size_t(hi)] <= 0.0)
            throw std::runtime_error("star_profile_from_front: front has no vertices");
        int span = (hi - lo + n_angles) % n_angles;
        int off = (k - lo + n_angles) % n_angles;
        double f = span == 0 ? 0.0 : double(off) / span;
        prof[size_t(k)] = prof[size_t(lo)] * (1.0 - f) + prof[size_t(hi)] * f;
    }
    return prof;
}

ScalarField harmonic_collar(const Grid& g, const std::vector<double>& profile,
                            const CollarSpec& spec) {
    MaskedRegion reg;
    reg.grid = g;
    reg.inside.assign(g.size(), 0);
    reg.bval.assign(g.size(), 0.0);
    ScalarField u(g);
    auto inner_radius = [&](double th) {
        return spec.inner_is_circle ? spec.inner : spec.inner * interp_profile(profile, th);
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            Vec2 p = g.pos(i, j);
            double r = norm(p);
            double th = std::atan2(p.y, p.x);
            double rin = inner_radius(th);
            double rout = spec.outer_scale * interp_profile(profile, th);
            size_t n = size_t(g.idx(i, j));
            if (r <= rin) {
                reg.bval[n] = spec.inner_value;
                u.v[n] = spec.inner_value;
            } else if (r >= rout) {
                reg.bval[n] = 0.0;
                u.v[n] = 0.0;
            } else {
                reg.inside[n] = 1;
                u.v[n] = spec.inner_value * std::log(r / rout) / std::log(rin / rout);
            }
        }
    solve_dirichlet(reg, u, spec.tol);
    return u;
}

BarrierTrajectory inf_convolution_supersolution(const ScalarField& omega, double r,
                                                double b, double t_k,
                                                const std::vector<double>& times) {
    if (b < 1.25 || b >= 61.0 / 48.0)
        throw std::invalid_argument("inf_convolution: b outside [5/4, 61/48)");
    if (r <= 0.0 || r >= 1.0)
        throw std::invalid_argument("inf_convolution: need 0 < r < 1");
    const Grid& g = omega.grid;
    const double rho0 = std::pow(r, b);
    if (rho0 < g.h)
        throw std::invalid_argument("inf_convolution: initial radius under one cell");
    if (times.empty()) throw std::invalid_argument("inf_convolution: no times");

    int ilo = g.nx, ihi = -1, jlo = g.ny, jhi = -1;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (omega.v[size_t(g.idx(i, j))] > 0.0) {
                ilo = std::min(ilo, i); ihi = std::max(ihi, i);
                jlo = std::min(jlo, j); jhi = std::max(jhi, j);
            }
    if (ihi < 0) throw std::runtime_error("inf_convolution: omega has no support");

    BarrierTrajectory bt;
    bt.kind = BarrierTrajectory::Kind::Supersolution;
    bt.grid = make_window(g, g.ox + (ilo - 2) * g.h, g.oy + (jlo - 2) * g.h,
                          g.ox + (ihi + 2) * g.h, g.oy + (jhi + 2) * g.h);
    bt.times = times;
    const int i0 = int(std::lround((bt.grid.ox - g.ox) / g.h));
    const int j0 = int(std::lround((bt.grid.oy - g.oy) / g.h));
    const double speed = 0.5 * std::pow(r, b - 2.0);

    auto omega_at = [&](int ii, int jj) {
        if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) return 0.0;
        return omega.v[size_t(g.idx(ii, jj))];
    };

    std::vector<double> scratch, rowmin;
    for (double t : times) {
        double rho = std::max(0.0, rho0 - (t - t_k) * speed);
        const int m = int(std::floor(rho / g.h));
        std::vector<float> snap(bt.grid.size(), 0.0f);
        for (int j = 0; j < bt.grid.ny; ++j) {
            std::vector<double> acc(size_t(bt.grid.nx),
                                    std::numeric_limits<double>::infinity());
            for (int dj = -m; dj <= m; ++dj) {
                double span = rho * rho - double(dj) * dj * g.h * g.h;
                int w = span <= 0.0 ? 0 : int(std::floor(std::sqrt(span) / g.h));
                scratch.assign(size_t(bt.grid.nx + 2 * w), 0.0);
                for (int i = -w; i < bt.grid.nx + w; ++i)
                    scratch[size_t(i + w)] = omega_at(i0 + i, j0 + j + dj);
                sliding_min(scratch, w, rowmin);
                for (int i = 0; i < bt.grid.nx; ++i)
                    acc[size_t(i)] = std::min(acc[size_t(i)], rowmin[size_t(i)]);
            }
            for (int i = 0; i < bt.grid.nx; ++i)
                snap[size_t(j) * bt.grid.nx + i] = float(acc[size_t(i)]);
        }
        bt.snaps.push_back(std::move(snap));
    }
    return bt;
}

BarrierTrajectory sup_convolution_subsolution(const BarrierTrajectory& U1, Vec2 x0,
                                              double r_scale, double eps, double t0,
                                              double T) {
    if (eps <= 0.0 || eps >= 1.0)
        throw std::invalid_argument("sup_convolution: eps outside (0,1)");
    if (r_scale <= 0.0 || T <= 0.0)
        throw std::invalid_argument("sup_convolution: bad scale or window");
    const double se = std::sqrt(eps);
    const Grid& g = U1.grid;
    const double half = (1.0 + 2.0 * se) * r_scale + 6.0 * g.h;

    BarrierTrajectory bt;
    bt.kind = BarrierTrajectory::Kind::Subsolution;
    bt.grid = make_window(g, x0.x - half, x0.y - half, x0.x + half, x0.y + half);
    bt.times = U1.times;

    for (int k = 0; k < U1.count(); ++k) {
        double tau = std::clamp((U1.times[size_t(k)] - t0) / T, 0.0, 1.0);
        double rad = se * (1.0 - std::pow(tau, 0.8)) * r_scale;
        const int m = int(std::floor(rad / g.h));
        std::vector<float> snap(bt.grid.size(), 0.0f);
        for (int j = 0; j < bt.grid.ny; ++j)
            for (int i = 0; i < bt.grid.nx; ++i) {
                Vec2 x = bt.grid.pos(i, j);
                double best = 0.0;
                for (int dj = -m; dj <= m; ++dj)
                    for (int di = -m; di <= m; ++di) {
                        if (double(di) * di + double(dj) * dj > rad * rad / (g.h * g.h))
                            continue;
                        Vec2 z{x.x + di * g.h, x.y + dj * g.h};
                        Vec2 y = x0 + (1.0 + se) * (z - x0);
                        best = std::max(best, U1.sample(k, y));
                    }
                snap[size_t(j) * bt.grid.nx + i] = float((1.0 - eps) * best);
            }
        bt.snaps.push_back(std::move(snap));
    }
    return bt;
}

void attach_negative_part(BarrierTrajectory& U, Vec2 x0, double ring_R,
                          double level, double tol) {
    const Grid& g = U.grid;
    for (int k = 0; k < U.count(); ++k) {
        std::vector<float>& snap = U.snaps[size_t(k)];
        MaskedRegion reg;
        reg.grid = g;
        reg.inside.assign(g.size(), 0);
        reg.bval.assign(g.size(), 0.0);
        ScalarField w(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                size_t n = size_t(g.idx(i, j));
                double d = norm(g.pos(i, j) - x0);
                if (snap[n] > 0.0f) continue;  // positive part stays, data 0 there
                if (d >= ring_R || i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1) {
                    reg.bval[n] = level;
                    w.v[n] = level;
                } else {
                    reg.inside[n] = 1;
                    w.v[n] = level * d / ring_R;
                }
            }
        solve_dirichlet(reg, w, tol);
        for (size_t n = 0; n < snap.size(); ++n)
            if (!(snap[n] > 0.0f)) snap[n] = float(-w.v[n]);
    }
}

BarrierTrajectory radial_cap_barrier(Vec2 y1, double r, double C2, double C3,
                                     double t0, const Grid& g,
                                     const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("radial_cap: no times");
    if (C2 <= 0.0 || C3 <= 0.0) throw std::invalid_argument("radial_cap: constants");
    const double rb = std::pow(r, 1.25);
    const double t_last = *std::max_element(times.begin(), times.end());
    if (0.5 * rb - C3 * (t_last - t0) <= 2.0 * g.h)
        throw std::invalid_argument("radial_cap: cap recedes under two cells");
    if (1.5 * rb < 3.0 * g.h)
        throw std::invalid_argument("radial_cap: annulus thinner than three cells");

    BarrierTrajectory bt;
    bt.kind = BarrierTrajectory::Kind::Supersolution;
    double half = 2.4 * rb + 4.0 * g.h;
    bt.grid = make_window(g, y1.x - half, y1.y - half, y1.x + half, y1.y + half);
    bt.times = times;
    for (double t : times) {
        double rc = 0.5 * rb - C3 * (t - t0);
        std::vector<float> snap(bt.grid.size(), 0.0f);
        for (int j = 0; j < bt.grid.ny; ++j)
            for (int i = 0; i < bt.grid.nx; ++i) {
                double s = norm(bt.grid.pos(i, j) - y1);
                if (s <= rc) continue;
                snap[size_t(j) * bt.grid.nx + i] =
                    float(2.0 * C2 * rb * std::log(s / rc) / std::log(2.0 * rb / rc));
            }
        bt.snaps.push_back(std::move(snap));
    }
    return bt;
}

Certification certify_ordering(const Trajectory& u, const BarrierTrajectory& b,
                               const std::function<bool(Vec2)>& region, double tol) {
    Certification c;
    c.tol = tol;
    c.max_violation = -std::numeric_limits<double>::infinity();
    const bool super = b.kind == BarrierTrajectory::Kind::Supersolution;
    double gap = std::numeric_limits<double>::infinity();
    for (size_t k = 1; k < u.times.size(); ++k)
        gap = std::min(gap, u.times[k] - u.times[k - 1]);
    for (int k = 0; k < b.count(); ++k) {
        int ku = u.nearest(b.times[size_t(k)]);
        if (std::abs(u.times[size_t(ku)] - b.times[size_t(k)]) >
            std::max(1e-12, 0.5 * gap))
            throw std::invalid_argument(
                "certify_ordering: barrier time off the trajectory snapshot grid");
        CertRow row;
        row.t = b.times[size_t(k)];
        row.max_violation = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < b.grid.ny; ++j)
            for (int i = 0; i < b.grid.nx; ++i) {
                Vec2 p = b.grid.pos(i, j);
                if (!region(p)) continue;
                double vu = u.sample(ku, p);
                double vb = double(b.snaps[size_t(k)][size_t(j) * b.grid.nx + i]);
                double viol = super ? vu - vb : vb - vu;
                if (viol > row.max_violation) {
                    row.max_violation = viol;
                    row.argmax = p;
                }
            }
        if (!std::isfinite(row.max_violation)) { row.max_violation = 0.0; row.argmax = Vec2{}; }
        if (row.max_violation > c.max_violation) {
            c.max_violation = row.max_violation;
            c.argmax = row.argmax;
        }
        c.rows.push_back(row);
    }
    // per-time rows keep the signed value; the headline number is a violation
    c.max_violation = std::max(c.max_violation, 0.0);
    c.pass = c.max_violation <= tol;
    return c;
}

Certification certify_barrier_pair(const BarrierTrajectory& lower,
                                   const BarrierTrajectory& upper, Vec2 shift,
                                   const std::function<bool(Vec2)>& region,
                                   double tol) {
    Certification c;
    c.tol = tol;
    c.max_violation = -std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    for (size_t k = 1; k < upper.times.size(); ++k)
        gap = std::min(gap, upper.times[k] - upper.times[k - 1]);
    for (int k = 0; k < lower.count(); ++k) {
        int ku = upper.nearest(lower.times[size_t(k)]);
        if (std::abs(upper.times[size_t(ku)] - lower.times[size_t(k)]) >
            std::max(1e-12, 0.5 * gap))
            throw std::invalid_argument(
                "certify_barrier_pair: barrier time grids mismatched");
        CertRow row;
        row.t = lower.times[size_t(k)];
        row.max_violation = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < lower.grid.ny; ++j)
            for (int i = 0; i < lower.grid.nx; ++i) {
                Vec2 p = lower.grid.pos(i, j);
                if (!region(p)) continue;
                double lo = double(lower.snaps[size_t(k)][size_t(j) * lower.grid.nx + i]);
                double up = upper.sample(ku, p - shift);
                double viol = lo - up;
                if (viol > row.max_violation) {
                    row.max_violation = viol;
                    row.argmax = p;
                }
            }
        if (!std::isfinite(row.max_violation)) { row.max_violation = 0.0; row.argmax = Vec2{}; }
        if (row.max_violation > c.max_violation) {
            c.max_violation = row.max_violation;
            c.argmax = row.argmax;
        }
        c.rows.push_back(row);
    }
    c.max_violation = std::max(c.max_violation, 0.0);
    c.pass = c.max_violation <= tol;
    return c;
}

void write_certification_csv(const Certification& c, const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "t,max_violation,argmax_x,argmax_y\n");
    for (const CertRow& r : c.rows)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", r.t, r.max_violation, r.argmax.x,
                     r.argmax.y);
    std::fclose(f);
}

ConvolutionAudit audit_inf_convolution(const BarrierTrajectory& phi, double r,
                                       double b) {
    ConvolutionAudit a;
    a.speed = 0.5 * std::pow(r, b - 2.0);
    const Grid& g = phi.grid;
    for (const auto& snap : phi.snaps)
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i) {
                float v = snap[size_t(j) * g.nx + i];
                if (!(v > 0.0f)) continue;
                bool edge = !(snap[size_t(j) * g.nx + i - 1] > 0.0f) ||
                            !(snap[size_t(j) * g.nx + i + 1] > 0.0f) ||
                            !(snap[size_t(j - 1) * g.nx + i] > 0.0f) ||
                            !(snap[size_t(j + 1) * g.nx + i] > 0.0f);
                if (edge) a.max_front_grad = std::max(a.max_front_grad, double(v) / g.h);
            }
    a.margin = a.speed - a.max_front_grad;
    return a;
}

ConvolutionAudit audit_radial_cap(double r, double C2, double C3, double t0,
                                  const std::vector<double>& times) {
    ConvolutionAudit a;
    a.speed = C3;
    const double rb = std::pow(r, 1.25);
    for (double t : times) {
        double rc = 0.5 * rb - C3 * (t - t0);
        if (rc <= 0.0) throw std::invalid_argument("audit_radial_cap: cap vanished");
        double slope = 2.0 * C2 * rb / (rc * std::log(2.0 * rb / rc));
        a.max_front_grad = std::max(a.max_front_grad, slope);
    }
    a.margin = a.speed - a.max_front_grad;
    return a;
}

}  // namespace stefanlab
