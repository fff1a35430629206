#include "stefanlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace stefanlab {

namespace {

constexpr double kPhaseFloor = 1e-12;

double sample_or_throw(const ScalarField& u, Vec2 p, const char* who) {
    auto v = u.sample(p);
    if (!v) throw std::runtime_error(std::string(who) + ": probe point leaves the grid");
    return *v;
}

bool in_grid(const Grid& g, Vec2 p) {
    return p.x >= g.ox && p.y >= g.oy && p.x <= g.ox + (g.nx - 1) * g.h &&
           p.y <= g.oy + (g.ny - 1) * g.h;
}

double phase_value(double u, int phase) {
    return phase > 0 ? std::max(u, 0.0) : std::max(-u, 0.0);
}

// u±(x -+ s e, 0)/s for the requested side; absent samples count as zero.
double side_ratio(const ScalarField& u0, Vec2 x, Vec2 e, int side, double s) {
    Vec2 p = side > 0 ? x - s * e : x + s * e;
    auto v = u0.sample(p);
    if (!v) return 0.0;
    return phase_value(*v, side) / s;
}

std::vector<double> geometric_ladder(double hi, double lo, int n) {
    std::vector<double> s(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        s[size_t(i)] = std::exp(std::log(hi) + (std::log(lo) - std::log(hi)) * i / (n - 1));
    return s;
}

}  // namespace

WaitingTime waiting_time(const ScalarField& u0, Vec2 x0, Vec2 e_n, double d) {
    WaitingTime w;
    w.u_plus = phase_value(sample_or_throw(u0, x0 - d * e_n, "waiting_time"), +1);
    w.u_minus = phase_value(sample_or_throw(u0, x0 + d * e_n, "waiting_time"), -1);
    if (w.u_plus <= kPhaseFloor || w.u_minus <= kPhaseFloor) return w;
    w.t_wait = std::min(d * d / w.u_plus, d * d / w.u_minus);
    w.ok = true;
    w.in_band = w.t_wait >= std::pow(d, 7.0 / 6.0) && w.t_wait <= std::pow(d, 5.0 / 6.0);
    return w;
}

FluxRatios flux_ratios(const ScalarField& u0, Vec2 x0, Vec2 e_n, double d) {
    FluxRatios f;
    double up = phase_value(sample_or_throw(u0, x0 - d * e_n, "flux_ratios"), +1);
    double um = phase_value(sample_or_throw(u0, x0 + d * e_n, "flux_ratios"), -1);
    if (up <= kPhaseFloor || um <= kPhaseFloor) {
        f.one_phase = true;
        return f;
    }
    f.r_plus = up / um;
    f.r_minus = um / up;
    return f;
}

HarnackSeries harnack_ratios(const Trajectory& traj, Vec2 p, int phase,
                             double t_wait) {
    HarnackSeries hs;
    std::vector<double> val(size_t(traj.count()));
    for (int k = 0; k < traj.count(); ++k)
        val[size_t(k)] = phase_value(traj.sample(k, p), phase);
    for (int k1 = 0; k1 < traj.count(); ++k1) {
        double t1 = traj.times[size_t(k1)];
        if (t1 > t_wait) break;
        for (int k2 = k1 + 1; k2 < traj.count(); ++k2) {
            double t2 = traj.times[size_t(k2)];
            if (t2 > t_wait) break;
            if (k1 != 0 && t2 > t1 + 0.5 * t_wait + 1e-15) break;
            if (val[size_t(k1)] < 1e-14 || val[size_t(k2)] < 1e-14) continue;
            hs.fwd = std::max(hs.fwd, val[size_t(k2)] / val[size_t(k1)]);
            hs.bwd = std::max(hs.bwd, val[size_t(k1)] / val[size_t(k2)]);
            ++hs.n_pairs;
        }
    }
    return hs;
}

bool DecompositionReport::in_sigma(Vec2 y, double t, double inflate_cells) const {
    if (norm(y - x0) > r || t < 0.0 || t > t_top) return false;
    for (const DecompArc& a : arcs) {
        if (!a.bad) continue;
        if (norm(y - a.x) <= a.r_x + inflate_cells * h && t <= a.t_height)
            return false;
    }
    return true;
}

int DecompositionReport::n_bad() const {
    int n = 0;
    for (const DecompArc& a : arcs) n += a.bad ? 1 : 0;
    return n;
}

DecompositionReport decompose(const ScalarField& u0, const StarDomain& dom,
                              Vec2 x0, double r, double M) {
    DecompositionReport rep;
    rep.center = dom.center;
    rep.x0 = x0;
    rep.r = r;
    rep.M = M;
    rep.h = u0.grid.h;
    rep.s_ladder = geometric_ladder(r, std::pow(r, 1.25), 24);

    Vec2 e0 = normalized(x0 - dom.center);
    double up = phase_value(sample_or_throw(u0, x0 - r * e0, "decompose"), +1);
    double um = phase_value(sample_or_throw(u0, x0 + r * e0, "decompose"), -1);
    rep.C0 = std::max(up, um) / r;
    if (rep.C0 <= 0.0) throw std::runtime_error("decompose: vanishing C0");
    if (up <= kPhaseFloor && um <= kPhaseFloor)
        throw std::runtime_error("decompose: both phases vanish at scale r");
    rep.t_top = std::min(up > kPhaseFloor ? r * r / up : 1e300,
                         um > kPhaseFloor ? r * r / um : 1e300);

    const double thr = M * rep.C0;
    const int n_arc = int(std::ceil(2.0 * M_PI * dom.max_radius() * 1.3 / rep.h)) + 8;
    for (int a = 0; a < n_arc; ++a) {
        double theta = 2.0 * M_PI * a / n_arc;
        Vec2 x = dom.boundary_point(theta);
        if (norm(x - x0) > 2.0 * r) continue;
        Vec2 e = normalized(x - dom.center);
        for (int side : {+1, -1}) {
            DecompArc arc;
            arc.x = x;
            arc.theta = theta;
            arc.side = side;
            int hit = -1;
            for (int i = 0; i < int(rep.s_ladder.size()); ++i) {
                double ratio = side_ratio(u0, x, e, side, rep.s_ladder[size_t(i)]);
                arc.max_ratio = std::max(arc.max_ratio, ratio);
                if (hit < 0 && ratio >= thr) hit = i;
            }
            if (hit >= 0) {
                arc.bad = true;
                if (hit == 0) {
                    arc.r_x = r;
                } else {
                    // largest root: ratio < thr at s_hi, >= thr at s_lo
                    double s_lo = rep.s_ladder[size_t(hit)];
                    double s_hi = rep.s_ladder[size_t(hit - 1)];
                    for (int it = 0; it < 60 && s_hi - s_lo > 1e-4 * rep.h; ++it) {
                        double mid = 0.5 * (s_lo + s_hi);
                        if (side_ratio(u0, x, e, side, mid) >= thr)
                            s_lo = mid;
                        else
                            s_hi = mid;
                    }
                    arc.r_x = s_lo;
                }
                arc.t_height = arc.r_x / thr;
                for (double s : rep.s_ladder)
                    if (side_ratio(u0, x, e, side, s) >= thr)
                        rep.lemma41_const = std::max(
                            rep.lemma41_const, side_ratio(u0, x, e, -side, s) / rep.C0);
            }
            rep.arcs.push_back(arc);
        }
    }
    return rep;
}

ConditionA condition_A_constant(const Trajectory& traj,
                                const DecompositionReport& rep) {
    ConditionA out;
    const double thr = rep.M * rep.C0;
    double worst = 0.0;
    for (int k = 0; k < traj.count(); ++k) {
        double t = traj.times[size_t(k)];
        if (t > rep.t_top + 1e-15) break;
        FrontCurve fc = extract_front(traj, k);
        ScalarField uk = traj.field(k);
        for (const auto& ch : fc.chains)
            for (const Vec2& v : ch.pts) {
                if (!rep.in_sigma(v, t, 1.0)) continue;
                Vec2 e = v - rep.center;
                if (norm(e) < 1e-12) continue;
                e = normalized(e);
                for (double s : rep.s_ladder) {
                    worst = std::max(worst, side_ratio(uk, v, e, +1, s));
                    worst = std::max(worst, side_ratio(uk, v, e, -1, s));
                }
                ++out.n_checked;
            }
    }
    if (out.n_checked == 0)
        throw std::runtime_error("condition_A_constant: front never meets Sigma");
    out.K = worst / thr;
    return out;
}

TimeLipschitz time_lipschitz_check(const Trajectory& traj,
                                   const DecompositionReport& rep, double K1,
                                   double dt) {
    TimeLipschitz tl;
    tl.K1 = K1;
    tl.tau = std::pow(rep.r, 1.25) / (K1 * rep.M * rep.C0);
    tl.bound = std::pow(rep.r, 1.25) + 3.0 * rep.h;
    if (tl.tau < dt)
        throw std::invalid_argument("time_lipschitz_check: lag under one step");
    const double tol_t = std::max(2.0 * dt, 0.02 * tl.tau);
    for (int ka = 0; ka < traj.count(); ++ka) {
        double ta = traj.times[size_t(ka)];
        if (ta > rep.t_top + 1e-15) break;
        int kb = traj.nearest(ta + tl.tau);
        if (std::abs(traj.times[size_t(kb)] - (ta + tl.tau)) > tol_t) continue;
        FrontCurve fc = extract_front(traj, ka);
        for (const auto& ch : fc.chains)
            for (const Vec2& v : ch.pts) {
                if (!rep.in_sigma(v, ta, 1.0)) continue;
                Vec2 e = v - rep.center;
                if (norm(e) < 1e-12) continue;
                auto s = ray_front_crossing(traj, kb, v, normalized(e),
                                            2.0 * tl.bound, false);
                if (!s) {
                    ++tl.n_missing;
                    continue;
                }
                tl.max_disp = std::max(tl.max_disp, std::abs(*s));
                ++tl.n_pairs;
            }
    }
    if (tl.n_pairs == 0 && tl.n_missing == 0)
        throw std::runtime_error("time_lipschitz_check: no anchor pairs in Sigma");
    tl.pass = tl.n_pairs > 0 && tl.max_disp <= tl.bound;
    return tl;
}

namespace {

DistanceLawFit loglog_fit(const std::vector<double>& lt,
                          const std::vector<double>& ld, double band_lo,
                          double band_hi) {
    DistanceLawFit fit;
    fit.band_lo = band_lo;
    fit.band_hi = band_hi;
    fit.n_pts = int(lt.size());
    if (fit.n_pts < 5) return fit;
    double mt = 0.0, md = 0.0;
    for (int i = 0; i < fit.n_pts; ++i) {
        mt += lt[size_t(i)];
        md += ld[size_t(i)];
    }
    mt /= fit.n_pts;
    md /= fit.n_pts;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < fit.n_pts; ++i) {
        num += (lt[size_t(i)] - mt) * (ld[size_t(i)] - md);
        den += (lt[size_t(i)] - mt) * (lt[size_t(i)] - mt);
    }
    if (den <= 0.0) return fit;
    fit.p_hat = num / den;
    fit.ok = true;
    fit.in_band = fit.p_hat >= band_lo && fit.p_hat <= band_hi;
    return fit;
}

// farthest |s| with x0 + s e_n on a chain segment
double ray_sup_on_fronts(const FrontCurve& fc, Vec2 x0, Vec2 e_n) {
    Vec2 t{-e_n.y, e_n.x};
    double best = -1.0;
    for (const auto& ch : fc.chains) {
        size_t n = ch.pts.size();
        if (n < 2) continue;
        size_t m = ch.closed ? n : n - 1;
        for (size_t i = 0; i < m; ++i) {
            Vec2 a = ch.pts[i] - x0;
            Vec2 b = ch.pts[(i + 1) % n] - x0;
            double ca = dot(a, t), cb = dot(b, t);
            if ((ca > 0.0 && cb > 0.0) || (ca < 0.0 && cb < 0.0)) continue;
            double denom = ca - cb;
            double s;
            if (std::abs(denom) < 1e-300) s = dot(a, e_n);
            else {
                double w = ca / denom;
                s = dot(a, e_n) * (1.0 - w) + dot(b, e_n) * w;
            }
            best = std::max(best, std::abs(s));
        }
    }
    return best;
}

}  // namespace

DistanceLawFit distance_law_fit(const std::vector<FrontCurve>& fronts,
                                const std::vector<double>& times, Vec2 x0,
                                Vec2 e_n, double band_lo, double band_hi,
                                double min_d) {
    if (fronts.size() != times.size())
        throw std::invalid_argument("distance_law_fit: fronts/times mismatch");
    std::vector<double> lt, ld;
    for (size_t k = 0; k < fronts.size(); ++k) {
        if (times[k] <= 0.0) continue;
        double d = ray_sup_on_fronts(fronts[k], x0, e_n);
        if (d < min_d) continue;
        lt.push_back(std::log(times[k]));
        ld.push_back(std::log(std::max(d, 1e-300)));
    }
    return loglog_fit(lt, ld, band_lo, band_hi);
}

DistanceLawFit distance_law_fit(const Trajectory& traj, Vec2 x0, Vec2 e_n,
                                double band_lo, double band_hi) {
    const double dmin = 4.0 * traj.grid.h;
    const double window = 0.45;
    std::vector<double> lt, ld;
    for (int k = 0; k < traj.count(); ++k) {
        double t = traj.times[size_t(k)];
        if (t <= 0.0) continue;
        auto s = ray_front_crossing(traj, k, x0, e_n, window, true);
        if (!s) continue;
        double d = std::abs(*s);
        if (d < dmin) continue;
        lt.push_back(std::log(t));
        ld.push_back(std::log(d));
    }
    return loglog_fit(lt, ld, band_lo, band_hi);
}

BadBallCheck bad_ball_gradient_check(const Trajectory& traj, Vec2 center, Vec2 x0,
                                     double r, double t_wait, double M) {
    BadBallCheck bb;
    int k0 = traj.count() - 1;
    for (int k = 0; k < traj.count(); ++k)
        if (traj.times[size_t(k)] >= 0.5 * t_wait - 1e-15) {
            k0 = k;
            break;
        }
    Vec2 e = normalized(x0 - center);
    double ap = phase_value(traj.sample(k0, x0 - r * e), +1);
    double am = phase_value(traj.sample(k0, x0 + r * e), -1);
    bb.R_anchor = ap / std::max(am, kPhaseFloor);
    bb.trigger = ap >= M * am || am >= M * ap;
    for (int k = k0; k < traj.count(); ++k) {
        if (traj.times[size_t(k)] > t_wait + 1e-15) break;
        FrontCurve fc = extract_front(traj, k);
        for (const auto& ch : fc.chains)
            for (const Vec2& v : ch.pts) {
                if (norm(v - x0) > r) continue;
                Vec2 ev = v - center;
                if (norm(ev) < 1e-12) continue;
                ev = normalized(ev);
                for (int phase : {+1, -1}) {
                    double anchor = phase > 0 ? ap : am;
                    if (anchor <= kPhaseFloor) continue;
                    GradProbe gp = gradient_one_sided(traj, k, v, phase, ev,
                                                      2.0 * traj.grid.h);
                    if (!gp.ok) continue;
                    bb.C_hat = std::max(bb.C_hat, std::abs(gp.value) * r / anchor);
                    ++bb.n_samples;
                }
            }
    }
    return bb;
}

GradBand gradient_comparability_check(const Trajectory& traj, Vec2 center, Vec2 x0,
                                      Vec2 e_n, double d, const WaitingTime& wt) {
    (void)center;
    GradBand gb;
    gb.lo = std::numeric_limits<double>::infinity();
    if (!wt.ok) return gb;
    for (int k = 0; k < traj.count(); ++k) {
        double t = traj.times[size_t(k)];
        if (t < 0.5 * wt.t_wait - 1e-15 || t > wt.t_wait + 1e-15) continue;
        auto s = ray_front_crossing(traj, k, x0, e_n, 2.0 * d, false);
        if (!s) continue;
        Vec2 y = x0 + *s * e_n;
        for (int phase : {+1, -1}) {
            GradProbe gp = gradient_one_sided(traj, k, y, phase, e_n,
                                              2.0 * traj.grid.h);
            if (!gp.ok) continue;
            for (double anchor : {wt.u_plus, wt.u_minus}) {
                double ratio = std::abs(gp.value) * d / anchor;
                gb.lo = std::min(gb.lo, ratio);
                gb.hi = std::max(gb.hi, ratio);
                ++gb.n;
            }
        }
    }
    gb.ok = gb.n > 0;
    if (!gb.ok) gb.lo = 0.0;
    return gb;
}

std::vector<DefectRow> star_shape_defect(const Trajectory& traj, double sigma,
                                         double r0) {
    const Grid& g = traj.grid;
    if (sigma < 4.0 * g.h / r0)
        throw std::invalid_argument("star_shape_defect: sigma under 4h/r0");
    const double scale = 1.0 + sigma;
    const double t_cap = scale * scale * std::pow(sigma, 0.2) / 3.0;
    const Vec2 centers[5] = {{0.0, 0.0},
                             {0.5 * r0, 0.0},
                             {-0.5 * r0, 0.0},
                             {0.0, 0.5 * r0},
                             {0.0, -0.5 * r0}};
    std::vector<DefectRow> rows;
    for (int k = 0; k < traj.count(); ++k) {
        double T = traj.times[size_t(k)];
        if (T <= 0.0 || T > t_cap) continue;
        const std::vector<float>& snap = traj.snaps[size_t(k)];
        double defect = 0.0;
        for (const Vec2& c : centers)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    Vec2 x = g.pos(i, j);
                    Vec2 y = c + scale * (x - c);
                    if (!in_grid(g, y)) continue;
                    double fx = (y.x - g.ox) / g.h, fy = (y.y - g.oy) / g.h;
                    int ii = std::min(int(fx), g.nx - 2);
                    int jj = std::min(int(fy), g.ny - 2);
                    double ax = fx - ii, ay = fy - jj;
                    auto at = [&](int a, int b) {
                        return double(snap[size_t(b) * g.nx + a]);
                    };
                    double vy = (1 - ax) * (1 - ay) * at(ii, jj) +
                                ax * (1 - ay) * at(ii + 1, jj) +
                                (1 - ax) * ay * at(ii, jj + 1) +
                                ax * ay * at(ii + 1, jj + 1);
                    defect = std::max(defect, vy - double(snap[size_t(j) * g.nx + i]));
                }
        rows.push_back({T / (scale * scale), defect});
    }
    return rows;
}

bool probe_is_bad(const ScalarField& u0, Vec2 x0, Vec2 e_n, double d, double M,
                  double C0) {
    const double thr = M * C0;
    for (double s : geometric_ladder(d, std::pow(d, 1.25), 24))
        if (side_ratio(u0, x0, e_n, +1, s) >= thr ||
            side_ratio(u0, x0, e_n, -1, s) >= thr)
            return true;
    return false;
}

void write_regularity_csv(const std::vector<RegularityRow>& rows,
                          const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f,
                 "x0x,x0y,d,t_wait,Rplus,Rminus,C0,is_bad,harnack_fwd,harnack_bwd,"
                 "K_cond_A,p_hat,C_grad\n");
    for (const RegularityRow& r : rows)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,"
                     "%.17g,%.17g,%.17g\n",
                     r.x0.x, r.x0.y, r.d, r.t_wait, r.r_plus, r.r_minus, r.C0,
                     r.is_bad ? 1 : 0, r.harnack_fwd, r.harnack_bwd, r.K_cond_A,
                     r.p_hat, r.C_grad);
    std::fclose(f);
}

}  // namespace stefanlab
