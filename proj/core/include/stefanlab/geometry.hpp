#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace stefanlab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a);
Vec2 normalized(Vec2 a);

// Uniform node-centered grid. Node (i,j) sits at (ox + i*h, oy + j*h).
struct Grid {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    double ox = 0.0;
    double oy = 0.0;

    std::size_t size() const { return std::size_t(nx) * std::size_t(ny); }
    int idx(int i, int j) const { return j * nx + i; }
    Vec2 pos(int i, int j) const { return {ox + i * h, oy + j * h}; }
    bool in_bounds(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }

    // Smallest grid with this spacing whose nodes cover [x0,x1] x [y0,y1].
    static Grid covering(double x0, double y0, double x1, double y1, double h);
};

// Closed curve given as a radial graph rho(theta) about `center`, sampled at
// n uniform angles. Star-shaped with respect to B_r0(center) by construction.
struct StarDomain {
    Vec2 center;
    double r0 = 0.0;
    std::vector<double> rho;
    double lipschitz_L = 0.0;  // measured slope of the local graph, max |rho'|/rho

    double radius(double theta) const;  // periodic linear interpolation
    bool contains(Vec2 p) const;        // open set, boundary counts as outside
    Vec2 boundary_point(double theta) const;
    double min_radius() const;
    double max_radius() const;
};

// Band-limited random profile rho = base * exp(c*(g - mean g)) with the mode
// amplitude c chosen so the measured Lipschitz constant hits target_L.
// Throws std::invalid_argument if target_L >= L_cap or the profile would not
// be star-shaped with respect to B_r0.
StarDomain build_star_domain(std::uint64_t seed, double target_L, double r0,
                             double base_radius, int n_angles, double L_cap = 0.25);

double measure_lipschitz(const StarDomain& dom);
// Minimum over theta of the distance from center to the boundary tangent line.
// >= r0 is equivalent to star-shapedness with respect to B_r0(center).
double pedal_min(const StarDomain& dom);
// Brute-force check: segments from sampled points of B_r0(center) to sampled
// boundary points stay inside. Used by property tests.
bool star_shaped_wrt_ball(const StarDomain& dom, int n_boundary, int n_centers,
                          int n_along = 32);

void write_star_domain(const StarDomain& dom, const std::string& path);
StarDomain read_star_domain(const std::string& path);

struct Cone {
    Vec2 axis;              // need not be unit length
    double half_aperture = 0.0;  // radians, in (0, pi/2)
};

// One measurement site on the initial front: x0 on the boundary, e_n = x0/|x0|.
struct Probe {
    Vec2 x0;
    Vec2 e_n;
    double theta = 0.0;
};

struct ProbeSet {
    std::vector<Probe> probes;
    std::vector<double> d_ladder;
};

ProbeSet make_probes(const StarDomain& dom, int n_probes,
                     std::vector<double> d_ladder);

struct ScalarField;

// max over sampled nodes p (where region(p) is true), directions tau in the
// cone and step sizes lambda of (f(p) - f(p + lambda*tau))^+. Zero means f is
// nondecreasing along every sampled cone direction. Sample points whose
// translate leaves the grid are skipped.
double cone_monotonicity_defect(const ScalarField& f, const Cone& cone,
                                const std::vector<double>& steps,
                                const std::function<bool(Vec2)>& region,
                                int n_dirs = 9, int stride = 1);

}  // namespace stefanlab
