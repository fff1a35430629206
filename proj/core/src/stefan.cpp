#include "stefanlab/stefan.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace stefanlab {

namespace {

struct Neumaier {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

void fill_beta(const double* E, double* b, int n) {
    for (int i = 0; i < n; ++i)
        b[i] = std::min(E[i], 0.0) + std::max(E[i] - 1.0, 0.0);
}

StefanState init_common(const ScalarField& u0, double cfl) {
    if (cfl <= 0.0 || cfl > 0.9)
        throw std::invalid_argument("stefan: need 0 < cfl <= 0.9");
    StefanState s;
    s.grid = u0.grid;
    s.t = u0.t;
    s.dt = cfl * u0.grid.h * u0.grid.h / 4.0;
    s.E.resize(u0.v.size());
    for (std::size_t k = 0; k < u0.v.size(); ++k)
        s.E[k] = u0.v[k] + (u0.v[k] > 0.0 ? 1.0 : 0.0);
    s.beta_.resize(u0.v.size());
    return s;
}

}  // namespace

StefanState make_disk_state(const ScalarField& u0, double R, double cfl) {
    StefanState s = init_common(u0, cfl);
    const Grid& g = s.grid;
    s.row_lo.assign(g.ny, 1);
    s.row_hi.assign(g.ny, 0);
    for (int j = 0; j < g.ny; ++j) {
        int lo = g.nx, hi = -1;
        for (int i = 0; i < g.nx; ++i) {
            Vec2 p = g.pos(i, j);
            if (p.x * p.x + p.y * p.y < R * R) {
                lo = std::min(lo, i);
                hi = std::max(hi, i);
            }
        }
        if (hi >= 0 && (lo < 1 || hi > g.nx - 2))
            throw std::invalid_argument("make_disk_state: grid does not cover the pinned ring");
        s.row_lo[j] = lo;
        s.row_hi[j] = hi;
        if (hi >= 0 && (j < 1 || j > g.ny - 2))
            throw std::invalid_argument("make_disk_state: grid does not cover the pinned ring");
    }
    return s;
}

StefanState make_slab_state(const ScalarField& u0, double cfl) {
    StefanState s = init_common(u0, cfl);
    const Grid& g = s.grid;
    if (g.nx < 3) throw std::invalid_argument("make_slab_state: nx < 3");
    s.row_lo.assign(g.ny, 1);
    s.row_hi.assign(g.ny, g.nx - 2);
    s.reflect_y = true;
    return s;
}

ScalarField u_of(const StefanState& s) {
    ScalarField u(s.grid, 0.0, s.t);
    for (std::size_t k = 0; k < s.E.size(); ++k) u.v[k] = beta_of(s.E[k]);
    return u;
}

void step(StefanState& s) {
    const Grid& g = s.grid;
    const int nx = g.nx, ny = g.ny;
    const double c = s.dt / (g.h * g.h);
    double* B = s.beta_.data();

#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j)
        fill_beta(s.E.data() + std::size_t(j) * nx, B + std::size_t(j) * nx, nx);

    // each row reads only the pre-step beta grid and writes only its own E
    // span, so the sweep is row-parallel and bitwise schedule-independent;
    // ghost rows beyond the top/bottom faces mirror the face row (zero flux),
    // and disk rows at the border are pinned so the mirror is never read there
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
        const int lo = s.row_lo[j], hi = s.row_hi[j];
        if (lo > hi) continue;
        const double* b0 = B + std::size_t(j) * nx;
        const double* bm = (j > 0) ? b0 - nx : b0;
        const double* bp = (j + 1 < ny) ? b0 + nx : b0;
        double* Erow = s.E.data() + std::size_t(j) * nx;
        for (int i = lo; i <= hi; ++i)
            Erow[i] += c * (bm[i] + bp[i] + b0[i - 1] + b0[i + 1] - 4.0 * b0[i]);
    }
    s.t += s.dt;
    ++s.steps_taken;
}

ConservationSample step_checked(StefanState& s) {
    const Grid& g = s.grid;
    const int nx = g.nx, ny = g.ny;
    std::vector<double> bu(s.E.size());
    fill_beta(s.E.data(), bu.data(), int(s.E.size()));

    auto in_span = [&](int j, int i) {
        return j >= 0 && j < ny && i >= s.row_lo[j] && i <= s.row_hi[j];
    };

    Neumaier before, flux;
    for (int j = 0; j < ny; ++j) {
        const int lo = s.row_lo[j], hi = s.row_hi[j];
        if (lo > hi) continue;
        const std::size_t base = std::size_t(j) * nx;
        for (int i = lo; i <= hi; ++i) before.add(s.E[base + i]);
        // pinned horizontal faces
        flux.add(bu[base + lo - 1] - bu[base + lo]);
        flux.add(bu[base + hi + 1] - bu[base + hi]);
        // pinned vertical faces (mirrored faces carry zero flux)
        for (int i = lo; i <= hi; ++i) {
            if (!in_span(j - 1, i) && !(j == 0 && s.reflect_y))
                flux.add(bu[base - nx + i] - bu[base + i]);
            if (!in_span(j + 1, i) && !(j == ny - 1 && s.reflect_y))
                flux.add(bu[base + nx + i] - bu[base + i]);
        }
    }

    step(s);

    Neumaier after;
    for (int j = 0; j < ny; ++j)
        for (int i = s.row_lo[j]; i <= s.row_hi[j]; ++i)
            after.add(s.E[std::size_t(j) * nx + i]);

    const double c = s.dt / (g.h * g.h);
    ConservationSample out;
    out.t = s.t;
    out.drift_rel = std::fabs(after.value() - before.value() - c * flux.value()) /
                    std::max(1.0, std::fabs(before.value()));
    return out;
}

int Trajectory::nearest(double t) const {
    int best = 0;
    for (int k = 1; k < count(); ++k)
        if (std::fabs(times[k] - t) < std::fabs(times[best] - t)) best = k;
    return best;
}

double Trajectory::sample(int k, Vec2 p) const {
    const Grid& g = grid;
    double fx = (p.x - g.ox) / g.h;
    double fy = (p.y - g.oy) / g.h;
    if (fx < 0.0 || fy < 0.0 || fx > g.nx - 1 || fy > g.ny - 1)
        throw std::out_of_range("Trajectory::sample: point outside grid");
    int i = std::min(int(fx), g.nx - 2);
    int j = std::min(int(fy), g.ny - 2);
    double ax = fx - i, ay = fy - j;
    const float* b = snaps[k].data() + g.idx(i, j);
    double lo = b[0] * (1.0 - ax) + b[1] * ax;
    double hi = b[g.nx] * (1.0 - ax) + b[g.nx + 1] * ax;
    return lo * (1.0 - ay) + hi * ay;
}

ScalarField Trajectory::field(int k) const {
    ScalarField f(grid, 0.0, times[k]);
    for (std::size_t n = 0; n < f.v.size(); ++n) f.v[n] = snaps[k][n];
    return f;
}

Trajectory run(StefanState& s, std::vector<double> snapshot_times,
               std::vector<ConservationSample>* cons, int check_every) {
    std::sort(snapshot_times.begin(), snapshot_times.end());
    Trajectory traj;
    traj.grid = s.grid;
    auto capture = [&]() {
        traj.times.push_back(s.t);
        std::vector<float> snap(s.E.size());
        for (std::size_t k = 0; k < s.E.size(); ++k)
            snap[k] = float(beta_of(s.E[k]));
        traj.snaps.push_back(std::move(snap));
    };
    for (double target : snapshot_times) {
        while (s.t < target - 1e-13) {
            if (check_every > 0 && s.steps_taken % check_every == 0) {
                ConservationSample cs = step_checked(s);
                if (cons) cons->push_back(cs);
            } else {
                step(s);
            }
        }
        if (traj.times.empty() || traj.times.back() != s.t) capture();
    }
    return traj;
}

void write_trajectory(const Trajectory& traj, const std::string& dir,
                      const std::string& stem) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream mf(fs::path(dir) / (stem + ".manifest"));
    if (!mf) throw std::runtime_error("write_trajectory: cannot open manifest");
    char buf[128];
    for (int k = 0; k < traj.count(); ++k) {
        std::snprintf(buf, sizeof buf, "%s_%04d.snap", stem.c_str(), k);
        std::string fname = buf;
        write_snapshot(traj.field(k), (fs::path(dir) / fname).string());
        std::snprintf(buf, sizeof buf, "t %.17g file %s\n", traj.times[k], fname.c_str());
        mf << buf;
    }
}

Trajectory read_trajectory(const std::string& manifest_path) {
    namespace fs = std::filesystem;
    std::ifstream mf(manifest_path);
    if (!mf) throw std::runtime_error("read_trajectory: cannot open " + manifest_path);
    fs::path dir = fs::path(manifest_path).parent_path();
    Trajectory traj;
    std::string kt, kf, fname;
    double t;
    while (mf >> kt >> t >> kf >> fname) {
        if (kt != "t" || kf != "file")
            throw std::runtime_error("read_trajectory: bad manifest line");
        ScalarField f = read_snapshot((dir / fname).string());
        if (traj.count() == 0) traj.grid = f.grid;
        traj.times.push_back(t);
        std::vector<float> snap(f.v.size());
        for (std::size_t k = 0; k < f.v.size(); ++k) snap[k] = float(f.v[k]);
        traj.snaps.push_back(std::move(snap));
    }
    if (traj.count() == 0)
        throw std::runtime_error("read_trajectory: empty manifest " + manifest_path);
    return traj;
}

}  // namespace stefanlab
