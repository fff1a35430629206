#include "stefanlab/front.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace stefanlab {

namespace {

// Uniform view over double fields and float snapshots.
struct View {
    const Grid* g = nullptr;
    const double* fd = nullptr;
    const float* ff = nullptr;

    double node(int i, int j) const {
        int k = g->idx(i, j);
        return fd ? fd[k] : double(ff[k]);
    }
    std::optional<double> sample(Vec2 p) const {
        double fx = (p.x - g->ox) / g->h;
        double fy = (p.y - g->oy) / g->h;
        if (fx < 0.0 || fy < 0.0 || fx > g->nx - 1 || fy > g->ny - 1)
            return std::nullopt;
        int i = std::min(int(fx), g->nx - 2);
        int j = std::min(int(fy), g->ny - 2);
        double ax = fx - i, ay = fy - j;
        double v00 = node(i, j), v10 = node(i + 1, j);
        double v01 = node(i, j + 1), v11 = node(i + 1, j + 1);
        return (v00 * (1 - ax) + v10 * ax) * (1 - ay) +
               (v01 * (1 - ax) + v11 * ax) * ay;
    }
};

// edge key: 2 * (index of the lower/left node) + axis (0 = horizontal edge)
std::int64_t edge_key(const Grid& g, int i, int j, int axis) {
    return 2 * std::int64_t(g.idx(i, j)) + axis;
}

struct Seg {
    Vec2 a, b;
    std::int64_t ea, eb;
};

FrontCurve march(const View& v, double t) {
    const Grid& g = *v.g;
    std::vector<Seg> segs;

    auto lerp_h = [&](int i, int j) -> Vec2 {  // on edge (i,j)-(i+1,j)
        double ua = v.node(i, j), ub = v.node(i + 1, j);
        double f = ua / (ua - ub);
        return {g.ox + (i + f) * g.h, g.oy + j * g.h};
    };
    auto lerp_v = [&](int i, int j) -> Vec2 {  // on edge (i,j)-(i,j+1)
        double ua = v.node(i, j), ub = v.node(i, j + 1);
        double f = ua / (ua - ub);
        return {g.ox + i * g.h, g.oy + (j + f) * g.h};
    };

    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) {
            double ua = v.node(i, j), ub = v.node(i + 1, j);
            double uc = v.node(i + 1, j + 1), ud = v.node(i, j + 1);
            int code = (ua > 0.0 ? 1 : 0) | (ub > 0.0 ? 2 : 0) |
                       (uc > 0.0 ? 4 : 0) | (ud > 0.0 ? 8 : 0);
            if (code == 0 || code == 15) continue;

            const std::int64_t S = edge_key(g, i, j, 0);
            const std::int64_t E = edge_key(g, i + 1, j, 1);
            const std::int64_t N = edge_key(g, i, j + 1, 0);
            const std::int64_t W = edge_key(g, i, j, 1);
            const Vec2 pS = (code & 1) != ((code >> 1) & 1) ? lerp_h(i, j) : Vec2{};
            const Vec2 pE = ((code >> 1) & 1) != ((code >> 2) & 1) ? lerp_v(i + 1, j) : Vec2{};
            const Vec2 pN = ((code >> 3) & 1) != ((code >> 2) & 1) ? lerp_h(i, j + 1) : Vec2{};
            const Vec2 pW = (code & 1) != ((code >> 3) & 1) ? lerp_v(i, j) : Vec2{};

            auto add = [&](Vec2 a, std::int64_t ea, Vec2 b, std::int64_t eb) {
                segs.push_back({a, b, ea, eb});
            };
            switch (code) {
                case 1: add(pS, S, pW, W); break;
                case 2: add(pE, E, pS, S); break;
                case 3: add(pE, E, pW, W); break;
                case 4: add(pN, N, pE, E); break;
                case 5: {  // saddle, resolved by the cell-center sign
                    bool center = (ua + ub + uc + ud) > 0.0;
                    if (center) { add(pS, S, pE, E); add(pN, N, pW, W); }
                    else { add(pS, S, pW, W); add(pN, N, pE, E); }
                    break;
                }
                case 6: add(pN, N, pS, S); break;
                case 7: add(pN, N, pW, W); break;
                case 8: add(pW, W, pN, N); break;
                case 9: add(pS, S, pN, N); break;
                case 10: {
                    bool center = (ua + ub + uc + ud) > 0.0;
                    if (center) { add(pW, W, pS, S); add(pE, E, pN, N); }
                    else { add(pE, E, pS, S); add(pW, W, pN, N); }
                    break;
                }
                case 11: add(pE, E, pN, N); break;
                case 12: add(pW, W, pE, E); break;
                case 13: add(pS, S, pE, E); break;
                case 14: add(pW, W, pS, S); break;
                default: break;
            }
        }

    // link segments: successor shares this segment's exit edge
    std::unordered_map<std::int64_t, int> by_entry;
    by_entry.reserve(segs.size() * 2);
    for (int k = 0; k < int(segs.size()); ++k) by_entry[segs[k].ea] = k;

    std::vector<char> used(segs.size(), 0);
    FrontCurve fc;
    fc.t = t;
    auto walk = [&](int start, bool closed) {
        FrontCurve::Chain ch;
        ch.closed = closed;
        int k = start;
        ch.pts.push_back(segs[k].a);
        while (true) {
            used[k] = 1;
            if (norm(segs[k].b - ch.pts.back()) > 0.0) ch.pts.push_back(segs[k].b);
            auto it = by_entry.find(segs[k].eb);
            if (it == by_entry.end() || used[it->second]) break;
            k = it->second;
        }
        if (ch.pts.size() >= 2) fc.chains.push_back(std::move(ch));
    };

    std::unordered_map<std::int64_t, int> by_exit;
    by_exit.reserve(segs.size() * 2);
    for (int k = 0; k < int(segs.size()); ++k) by_exit[segs[k].eb] = k;
    for (int k = 0; k < int(segs.size()); ++k)
        if (!used[k] && by_exit.find(segs[k].ea) == by_exit.end()) walk(k, false);
    for (int k = 0; k < int(segs.size()); ++k)
        if (!used[k]) walk(k, true);
    return fc;
}

std::optional<double> ray_crossing(const View& v, Vec2 x0, Vec2 e_n,
                                   double window, bool farthest) {
    const double step = 0.5 * v.g->h;
    const int n = std::max(2, int(window / step));
    std::optional<double> best;
    double prev_s = -n * step;
    auto prev_u = v.sample(x0 + prev_s * e_n);
    for (int k = -n + 1; k <= n; ++k) {
        double s = k * step;
        auto u = v.sample(x0 + s * e_n);
        if (u && prev_u) {
            bool p0 = *prev_u > 0.0, p1 = *u > 0.0;
            if (p0 != p1) {
                double f = *prev_u / (*prev_u - *u);
                double cross = prev_s + f * (s - prev_s);
                if (!best || (farthest ? std::fabs(cross) > std::fabs(*best)
                                       : std::fabs(cross) < std::fabs(*best)))
                    best = cross;
            }
        }
        prev_s = s;
        prev_u = u;
    }
    return best;
}

GradProbe grad_probe(const View& v, Vec2 x, int phase, Vec2 e_n, double delta) {
    if (phase != 1 && phase != -1)
        throw std::invalid_argument("gradient_one_sided: phase must be +-1");
    auto attempt = [&](double d) -> std::optional<GradProbe> {
        Vec2 pa = phase == 1 ? x - d * e_n : x;      // deeper sample
        Vec2 pb = phase == 1 ? x : x + d * e_n;
        auto ua = v.sample(pa), ub = v.sample(pb);
        if (!ua || !ub) return std::nullopt;
        double deep = phase == 1 ? *ua : *ub;
        if (phase * deep <= 0.0) return std::nullopt;  // stencil crossed the front
        GradProbe g;
        g.value = (*ub - *ua) / d;
        g.ok = true;
        return g;
    };
    if (auto g = attempt(delta)) return *g;
    if (auto g = attempt(v.g->h)) {
        g->fallback = true;
        return *g;
    }
    return {};
}

}  // namespace

std::size_t FrontCurve::vertex_count() const {
    std::size_t n = 0;
    for (const Chain& c : chains) n += c.pts.size();
    return n;
}

const FrontCurve::Chain* FrontCurve::primary() const {
    const Chain* best = nullptr;
    for (const Chain& c : chains)
        if (!best || c.pts.size() > best->pts.size()) best = &c;
    return best;
}

FrontCurve extract_front(const ScalarField& u) {
    View v{&u.grid, u.v.data(), nullptr};
    return march(v, u.t);
}

FrontCurve extract_front(const Trajectory& traj, int k) {
    View v{&traj.grid, nullptr, traj.snaps[k].data()};
    return march(v, traj.times[k]);
}

namespace {
double point_seg_dist(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double den = dot(ab, ab);
    double t = den > 0.0 ? std::clamp(dot(p - a, ab) / den, 0.0, 1.0) : 0.0;
    return norm(p - (a + t * ab));
}

double one_sided_hausdorff(const FrontCurve& a, const FrontCurve& b) {
    double worst = 0.0;
    for (const auto& ca : a.chains)
        for (Vec2 p : ca.pts) {
            double best = 1e300;
            for (const auto& cb : b.chains) {
                const auto& q = cb.pts;
                for (std::size_t k = 0; k + 1 < q.size(); ++k)
                    best = std::min(best, point_seg_dist(p, q[k], q[k + 1]));
                if (cb.closed && q.size() >= 2)
                    best = std::min(best, point_seg_dist(p, q.back(), q.front()));
            }
            worst = std::max(worst, best);
        }
    return worst;
}
}  // namespace

double hausdorff(const FrontCurve& a, const FrontCurve& b) {
    if (a.vertex_count() == 0 || b.vertex_count() == 0)
        throw std::invalid_argument("hausdorff: empty front");
    return std::max(one_sided_hausdorff(a, b), one_sided_hausdorff(b, a));
}

std::optional<double> ray_front_crossing(const ScalarField& u, Vec2 x0, Vec2 e_n,
                                         double window, bool farthest) {
    View v{&u.grid, u.v.data(), nullptr};
    return ray_crossing(v, x0, e_n, window, farthest);
}

std::optional<double> ray_front_crossing(const Trajectory& traj, int k, Vec2 x0,
                                         Vec2 e_n, double window, bool farthest) {
    View v{&traj.grid, nullptr, traj.snaps[k].data()};
    return ray_crossing(v, x0, e_n, window, farthest);
}

std::optional<double> front_distance(const Trajectory& traj, int k, Vec2 x0,
                                     Vec2 e_n, double window) {
    auto s = ray_front_crossing(traj, k, x0, e_n, window, true);
    if (!s) return std::nullopt;
    return std::fabs(*s);
}

GradProbe gradient_one_sided(const ScalarField& u, Vec2 x, int phase, Vec2 e_n,
                             double delta) {
    View v{&u.grid, u.v.data(), nullptr};
    return grad_probe(v, x, phase, e_n, delta);
}

GradProbe gradient_one_sided(const Trajectory& traj, int k, Vec2 x, int phase,
                             Vec2 e_n, double delta) {
    View v{&traj.grid, nullptr, traj.snaps[k].data()};
    return grad_probe(v, x, phase, e_n, delta);
}

}  // namespace stefanlab
