#include "stefanlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "stefanlab/field.hpp"

namespace stefanlab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Vec2 normalized(Vec2 a) {
    double n = norm(a);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return {a.x / n, a.y / n};
}

Grid Grid::covering(double x0, double y0, double x1, double y1, double h) {
    Grid g;
    g.h = h;
    g.ox = x0;
    g.oy = y0;
    g.nx = int(std::ceil((x1 - x0) / h - 1e-12)) + 1;
    g.ny = int(std::ceil((y1 - y0) / h - 1e-12)) + 1;
    return g;
}

double StarDomain::radius(double theta) const {
    const int n = int(rho.size());
    double u = theta / kTwoPi * n;
    u -= std::floor(u / n) * n;
    int k = int(std::floor(u));
    double f = u - k;
    if (k >= n) { k = 0; f = 0.0; }
    return rho[k] * (1.0 - f) + rho[(k + 1) % n] * f;
}

bool StarDomain::contains(Vec2 p) const {
    Vec2 d = p - center;
    double r = norm(d);
    if (r == 0.0) return true;
    return r < radius(std::atan2(d.y, d.x));
}

Vec2 StarDomain::boundary_point(double theta) const {
    double r = radius(theta);
    return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

double StarDomain::min_radius() const {
    return *std::min_element(rho.begin(), rho.end());
}

double StarDomain::max_radius() const {
    return *std::max_element(rho.begin(), rho.end());
}

double measure_lipschitz(const StarDomain& dom) {
    const int n = int(dom.rho.size());
    const double dtheta = kTwoPi / n;
    double L = 0.0;
    for (int k = 0; k < n; ++k) {
        double dr = (dom.rho[(k + 1) % n] - dom.rho[(k + n - 1) % n]) / (2.0 * dtheta);
        L = std::max(L, std::fabs(dr) / dom.rho[k]);
    }
    return L;
}

double pedal_min(const StarDomain& dom) {
    const int n = int(dom.rho.size());
    const double dtheta = kTwoPi / n;
    double p = 1e300;
    for (int k = 0; k < n; ++k) {
        double r = dom.rho[k];
        double dr = (dom.rho[(k + 1) % n] - dom.rho[(k + n - 1) % n]) / (2.0 * dtheta);
        p = std::min(p, r * r / std::sqrt(r * r + dr * dr));
    }
    return p;
}

StarDomain build_star_domain(std::uint64_t seed, double target_L, double r0,
                             double base_radius, int n_angles, double L_cap) {
    if (n_angles < 32) throw std::invalid_argument("build_star_domain: n_angles < 32");
    if (target_L < 0.0 || target_L >= L_cap)
        throw std::invalid_argument("build_star_domain: target_L outside [0, L_cap)");
    if (r0 <= 0.0 || base_radius <= r0)
        throw std::invalid_argument("build_star_domain: need 0 < r0 < base_radius");

    StarDomain dom;
    dom.center = {0.0, 0.0};
    dom.r0 = r0;
    dom.rho.assign(n_angles, base_radius);

    if (target_L > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, kTwoPi);
        const int m_lo = 2, m_hi = 8;
        std::vector<double> amp, phase;
        for (int m = m_lo; m <= m_hi; ++m) {
            amp.push_back(gauss(rng) / std::pow(double(m), 1.5));
            phase.push_back(unif(rng));
        }
        // c scales the perturbation so that max |d/dtheta log rho| = target_L.
        double gp_max = 0.0;
        const int dense = 16 * n_angles;
        for (int k = 0; k < dense; ++k) {
            double th = kTwoPi * k / dense, gp = 0.0;
            for (int m = m_lo; m <= m_hi; ++m)
                gp -= amp[m - m_lo] * m * std::sin(m * th + phase[m - m_lo]);
            gp_max = std::max(gp_max, std::fabs(gp));
        }
        if (gp_max == 0.0) throw std::invalid_argument("build_star_domain: degenerate modes");
        const double c = target_L / gp_max;
        double gbar = 0.0;
        std::vector<double> g(n_angles);
        for (int k = 0; k < n_angles; ++k) {
            double th = kTwoPi * k / n_angles, gv = 0.0;
            for (int m = m_lo; m <= m_hi; ++m)
                gv += amp[m - m_lo] * std::cos(m * th + phase[m - m_lo]);
            g[k] = gv;
            gbar += gv / n_angles;
        }
        for (int k = 0; k < n_angles; ++k)
            dom.rho[k] = base_radius * std::exp(c * (g[k] - gbar));
    }

    dom.lipschitz_L = measure_lipschitz(dom);
    if (target_L > 0.0 &&
        std::fabs(dom.lipschitz_L - target_L) > 0.1 * target_L)
        throw std::runtime_error("build_star_domain: measured L off target by >10%");
    if (dom.min_radius() <= 1.02 * r0 || pedal_min(dom) <= 1.01 * r0)
        throw std::invalid_argument("build_star_domain: profile not star-shaped wrt B_r0");
    return dom;
}

bool star_shaped_wrt_ball(const StarDomain& dom, int n_boundary, int n_centers,
                          int n_along) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int b = 0; b < n_boundary; ++b) {
        double th = kTwoPi * b / n_boundary;
        Vec2 x = dom.boundary_point(th);
        for (int c = 0; c < n_centers; ++c) {
            double a = kTwoPi * unif(rng);
            double rr = dom.r0 * std::sqrt(unif(rng));
            Vec2 y = {dom.center.x + rr * std::cos(a), dom.center.y + rr * std::sin(a)};
            for (int k = 1; k < n_along; ++k) {
                double s = double(k) / n_along;
                // shrink slightly toward y so boundary roundoff does not trip the check
                Vec2 p = y + (s * (1.0 - 1e-9)) * (x - y);
                if (!dom.contains(p)) return false;
            }
        }
    }
    return true;
}

void write_star_domain(const StarDomain& dom, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_star_domain: cannot open " + path);
    char buf[128];
    std::snprintf(buf, sizeof buf, "center %.17g %.17g\n", dom.center.x, dom.center.y);
    out << buf;
    std::snprintf(buf, sizeof buf, "r0 %.17g\n", dom.r0);
    out << buf;
    out << "n_angles " << dom.rho.size() << "\n";
    for (double r : dom.rho) {
        std::snprintf(buf, sizeof buf, "%.17g\n", r);
        out << buf;
    }
}

StarDomain read_star_domain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_star_domain: cannot open " + path);
    StarDomain dom;
    std::string key;
    std::size_t n = 0;
    if (!(in >> key >> dom.center.x >> dom.center.y) || key != "center")
        throw std::runtime_error("read_star_domain: bad center line");
    if (!(in >> key >> dom.r0) || key != "r0")
        throw std::runtime_error("read_star_domain: bad r0 line");
    if (!(in >> key >> n) || key != "n_angles")
        throw std::runtime_error("read_star_domain: bad n_angles line");
    dom.rho.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        if (!(in >> dom.rho[k]))
            throw std::runtime_error("read_star_domain: truncated profile");
    dom.lipschitz_L = measure_lipschitz(dom);
    return dom;
}

ProbeSet make_probes(const StarDomain& dom, int n_probes,
                     std::vector<double> d_ladder) {
    ProbeSet ps;
    ps.d_ladder = std::move(d_ladder);
    ps.probes.reserve(n_probes);
    for (int p = 0; p < n_probes; ++p) {
        // half-offset keeps rays off the grid axes
        double th = kTwoPi * (p + 0.5) / n_probes;
        Probe pr;
        pr.theta = th;
        pr.x0 = dom.boundary_point(th);
        pr.e_n = normalized(pr.x0);
        ps.probes.push_back(pr);
    }
    return ps;
}

double cone_monotonicity_defect(const ScalarField& f, const Cone& cone,
                                const std::vector<double>& steps,
                                const std::function<bool(Vec2)>& region,
                                int n_dirs, int stride) {
    if (cone.half_aperture <= 0.0 || cone.half_aperture >= 1.5707963267948966)
        throw std::invalid_argument("cone_monotonicity_defect: bad aperture");
    const double a0 = std::atan2(cone.axis.y, cone.axis.x);
    std::vector<Vec2> dirs;
    for (int d = 0; d < n_dirs; ++d) {
        double a = a0 + cone.half_aperture * (n_dirs == 1 ? 0.0 : -1.0 + 2.0 * d / (n_dirs - 1));
        dirs.push_back({std::cos(a), std::sin(a)});
    }
    double defect = 0.0;
    for (int j = 0; j < f.grid.ny; j += stride)
        for (int i = 0; i < f.grid.nx; i += stride) {
            Vec2 p = f.grid.pos(i, j);
            if (!region(p)) continue;
            double fp = f.at(i, j);
            for (const Vec2& tau : dirs)
                for (double lam : steps) {
                    auto fq = f.sample(p + lam * tau);
                    if (!fq) continue;
                    defect = std::max(defect, fp - *fq);
                }
        }
    return defect;
}

}  // namespace stefanlab
