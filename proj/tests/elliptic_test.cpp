#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "common.hpp"

using namespace stefanlab;
using testbed::circle_minus;
using testbed::circle_plus;

namespace {

MaskedRegion box_region(const Grid& g, int margin) {
    MaskedRegion rg(g);
    for (int j = margin; j < g.ny - margin; ++j)
        for (int i = margin; i < g.nx - margin; ++i)
            rg.inside[g.idx(i, j)] = 1;
    return rg;
}

}  // namespace

TEST_CASE("masked solve is exact on affine data") {
    Grid g = Grid::covering(0.0, 0.0, 1.0, 0.75, 1.0 / 40.0);
    MaskedRegion rg = box_region(g, 1);
    ScalarField truth = testbed::field_of(g, 0.0, [](Vec2 p) {
        return 0.7 * p.x - 0.3 * p.y + 0.1;
    });
    for (std::size_t k = 0; k < g.size(); ++k) rg.bval[k] = truth.v[k];
    ScalarField u(g);
    SolveStats st = solve_dirichlet(rg, u, 1e-11);
    CHECK(st.converged);
    CHECK(st.residual <= 1e-11);
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        err = std::max(err, std::fabs(u.v[k] - truth.v[k]));
    CHECK(err <= 1e-8);
    CHECK(max_masked_laplacian(rg, u) <= 1e-11);
}

TEST_CASE("masked solve attains its extremes on the boundary") {
    Grid g = Grid::covering(0.0, 0.0, 1.0, 1.0, 1.0 / 48.0);
    for (std::uint32_t seed : {1u, 2u, 3u, 4u, 5u}) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> uval(-1.0, 2.0);
        std::uniform_real_distribution<double> upos(0.25, 0.75);
        std::uniform_real_distribution<double> urad(0.1, 0.3);

        MaskedRegion rg(g);
        for (int blob = 0; blob < 3; ++blob) {
            Vec2 c{upos(rng), upos(rng)};
            double rad = urad(rng);
            for (int j = 1; j < g.ny - 1; ++j)
                for (int i = 1; i < g.nx - 1; ++i)
                    if (norm(g.pos(i, j) - c) < rad) rg.inside[g.idx(i, j)] = 1;
        }
        for (std::size_t k = 0; k < g.size(); ++k) rg.bval[k] = uval(rng);

        ScalarField u(g);
        SolveStats st = solve_dirichlet(rg, u, 1e-12);
        REQUIRE(st.converged);

        // data range over boundary nodes adjacent to an unknown
        double blo = 1e300, bhi = -1e300;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                int k = g.idx(i, j);
                if (rg.inside[k]) continue;
                bool touches = false;
                for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                    if (g.in_bounds(i + di, j + dj) &&
                        rg.inside[g.idx(i + di, j + dj)])
                        touches = true;
                if (!touches) continue;
                blo = std::min(blo, rg.bval[k]);
                bhi = std::max(bhi, rg.bval[k]);
            }
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (!rg.inside[k]) continue;
            CHECK(u.v[k] >= blo - 1e-9);
            CHECK(u.v[k] <= bhi + 1e-9);
        }
    }
}

TEST_CASE("annulus solve matches the log profile") {
    Grid g = Grid::covering(-1.1, -1.1, 1.1, 1.1, 1.0 / 128.0);
    MaskedRegion rg(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double rad = norm(g.pos(i, j));
            int k = g.idx(i, j);
            if (i > 0 && i < g.nx - 1 && j > 0 && j < g.ny - 1 && rad > 0.5 &&
                rad < 1.0)
                rg.inside[k] = 1;
            else if (rad <= 0.5)
                rg.bval[k] = 1.0;
        }
    ScalarField u(g);
    REQUIRE(solve_dirichlet(rg, u, 1e-7).converged);
    const double tol = 2.0 / 128.0;
    CHECK(std::fabs(u.sample_or({0.9, 0.0}, -9) - circle_plus(0.9)) <= tol);
    CHECK(std::fabs(u.sample_or({0.7, 0.0}, -9) - circle_plus(0.7)) <= tol);
    CHECK(std::fabs(u.sample_or({0.0, 0.6}, -9) - circle_plus(0.6)) <= tol);
}

TEST_CASE("two-phase initial data matches the radial closed form") {
    const InitialData& d = testbed::circle_init_64();
    const ScalarField& u0 = d.u0;
    const double tol = 2.0 / 64.0;
    CHECK(std::fabs(u0.sample_or({0.9, 0.0}, -9) - circle_plus(0.9)) <= tol);
    CHECK(std::fabs(u0.sample_or({0.6, 0.0}, -9) - circle_plus(0.6)) <= tol);
    CHECK(std::fabs(u0.sample_or({1.1, 0.0}, -9) - circle_minus(1.1)) <= tol);
    CHECK(std::fabs(u0.sample_or({0.0, -2.0}, -9) - circle_minus(2.0)) <= tol);
    CHECK(u0.sample_or({0.97 / std::sqrt(2.0), 0.97 / std::sqrt(2.0)}, -9) > 0.0);
    CHECK(u0.sample_or({1.05, 0.0}, 9) < 0.0);

    // pinned far field
    const Grid& g = u0.grid;
    int hits = 0;
    for (int j = 0; j < g.ny; j += 7)
        for (int i = 0; i < g.nx; i += 7)
            if (norm(g.pos(i, j)) >= 4.0) {
                CHECK(u0.at(i, j) == -1.0);
                ++hits;
            }
    CHECK(hits > 10);

    // C^1 paraboloid cap: center value 1 + A/2 with A = 1/log 2
    CHECK(u0.sample_or({0.0, 0.0}, -9) ==
          doctest::Approx(1.0 + 0.5 / std::log(2.0)).epsilon(0.05));

    CHECK(d.max_grad == max_gradient(u0));
    CHECK(d.max_grad > 2.0);
    CHECK(d.max_grad < 5.0);
    CHECK(d.pos.converged);
    CHECK(d.neg.converged);

    // the recorded laplacian bound covers every stencil that stays in one phase
    double lap_max = 0.0;
    const double h = g.h;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            int k = g.idx(i, j);
            if (norm(g.pos(i, j)) >= 4.0 - 2.0 * h) continue;
            bool s0 = u0.v[k] > 0.0;
            if ((u0.v[k - 1] > 0.0) != s0 || (u0.v[k + 1] > 0.0) != s0 ||
                (u0.v[k - g.nx] > 0.0) != s0 || (u0.v[k + g.nx] > 0.0) != s0)
                continue;
            double lap = (u0.v[k - 1] + u0.v[k + 1] + u0.v[k - g.nx] +
                          u0.v[k + g.nx] - 4.0 * u0.v[k]) / (h * h);
            lap_max = std::max(lap_max, std::fabs(lap));
        }
    CHECK(d.N0 > 0.0);
    CHECK(lap_max <= d.N0 + 1e-9);
}

TEST_CASE("hot spot multiplies the positive phase by a gaussian bump") {
    StarDomain dom = testbed::circle_domain();
    InitialData d = build_initial_data(dom, 4.0, 1.0 / 64.0, 1e-4, 8.0, 0.0, 0.35);
    // sample at distance 0.1 inward from the spike anchor (1, 0)
    double expect = circle_plus(0.9) * (1.0 + 7.0 * std::exp(-(0.1 / 0.35) * (0.1 / 0.35)));
    CHECK(d.u0.sample_or({0.9, 0.0}, -9) == doctest::Approx(expect).epsilon(0.05));
    // far side of the circle sees almost none of the bump
    CHECK(d.u0.sample_or({-0.9, 0.0}, -9) ==
          doctest::Approx(circle_plus(0.9)).epsilon(0.05));
    // the negative phase is untouched
    CHECK(std::fabs(d.u0.sample_or({1.1, 0.0}, -9) - circle_minus(1.1)) <= 2.0 / 64.0);
    // the bump is smooth: no 1/r blowup anywhere near the domain center
    CHECK(d.max_grad < 60.0);
}

TEST_CASE("growth exponents bracket the harmonic slopes") {
    const ScalarField& u0 = testbed::circle_init_64().u0;
    StarDomain dom = testbed::circle_domain();
    ProbeSet ps = make_probes(dom, 8, {0.1});
    const double h = u0.grid.h;
    std::vector<double> ladder;
    for (int i = 0; i < 8; ++i)
        ladder.push_back(std::exp(std::log(4.0 * h) +
                                  (std::log(0.3) - std::log(4.0 * h)) * i / 7.0));
    GrowthFit fit = growth_exponents(u0, ps, ladder);
    REQUIRE(fit.slope.size() == 8);
    CHECK(fit.beta_hat <= fit.alpha_hat);
    CHECK(fit.alpha_hat <= 1.05);
    CHECK(fit.alpha_hat >= 0.95);
    CHECK(fit.beta_hat <= 1.05);
    CHECK(fit.beta_hat >= 0.95);
}

TEST_CASE("growth exponents recover a synthetic power law") {
    Grid g = Grid::covering(-1.3, -1.3, 1.3, 1.3, 1.0 / 256.0);
    const double p = 1.1;
    ScalarField u = testbed::field_of(g, 0.0, [p](Vec2 q) {
        return std::pow(std::max(1.0 - norm(q), 0.0), p);
    });
    ProbeSet ps;
    ps.d_ladder = {0.1};
    for (int k = 0; k < 6; ++k) {
        double th = 2.0 * testbed::kPi * k / 6.0;
        Probe pr;
        pr.theta = th;
        pr.x0 = {std::cos(th), std::sin(th)};
        pr.e_n = pr.x0;
        ps.probes.push_back(pr);
    }
    std::vector<double> ladder;
    for (double s = 0.02; s <= 0.31; s *= 1.4) ladder.push_back(s);
    GrowthFit fit = growth_exponents(u, ps, ladder);
    CHECK(fit.alpha_hat == doctest::Approx(p).epsilon(0.01));
    CHECK(fit.beta_hat == doctest::Approx(p).epsilon(0.01));
}

TEST_CASE("planar harmonic pair hits the flat-interface constant") {
    Grid g = Grid::covering(-0.6, -0.6, 0.6, 0.6, 1.0 / 256.0);
    ScalarField hp = testbed::field_of(g, 0.0, [](Vec2 p) {
        return std::max(-p.x, 0.0);
    });
    ScalarField hm = testbed::field_of(g, 0.0, [](Vec2 p) {
        return std::max(p.x, 0.0);
    });
    ACFSeries s = acf_phi(hp, hm, {0.0, 0.0}, {0.25, 0.275, 0.3});
    const double target = testbed::kPi * testbed::kPi / 4.0;
    for (double phi : s.phi)
        CHECK(phi == doctest::Approx(target).epsilon(0.03));
}

TEST_CASE("flux-product functional grows with the ball radius") {
    const ScalarField& u0 = testbed::circle_init_64().u0;
    const Grid& g = u0.grid;
    ScalarField hp(g), hm(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        hp.v[k] = std::max(u0.v[k], 0.0);
        hm.v[k] = std::max(-u0.v[k], 0.0);
    }
    std::vector<double> radii;
    for (double r = 8.0 / 64.0; r <= 0.31; r *= 1.18) radii.push_back(r);
    ACFSeries s = acf_phi(hp, hm, {1.0, 0.0}, radii);
    const double h = g.h;
    for (std::size_t j = 0; j + 1 < s.phi.size(); ++j)
        CHECK(s.phi[j + 1] >= s.phi[j] - (0.05 * s.phi[j] + 10.0 * h));
}

TEST_CASE("overlapping supports are rejected") {
    Grid g = Grid::covering(-0.5, -0.5, 0.5, 0.5, 1.0 / 32.0);
    ScalarField blob = testbed::field_of(g, 0.0, [](Vec2 p) {
        return std::max(0.3 - norm(p), 0.0);
    });
    CHECK_THROWS_AS(acf_phi(blob, blob, {0.0, 0.0}, {0.2}),
                    std::invalid_argument);
}

TEST_CASE("empty phase zeroes the functional") {
    Grid g = Grid::covering(-0.5, -0.5, 0.5, 0.5, 1.0 / 64.0);
    ScalarField hp = testbed::field_of(g, 0.0, [](Vec2 p) {
        return std::max(0.3 - norm(p), 0.0);
    });
    ScalarField hm(g);
    ACFSeries s = acf_phi(hp, hm, {0.0, 0.0}, {0.1, 0.2});
    for (double phi : s.phi) CHECK(phi == 0.0);
}

TEST_CASE("flux pairs match the annulus slopes at the anchor") {
    const ScalarField& u0 = testbed::circle_init_64().u0;
    const Grid& g = u0.grid;
    ScalarField hp(g), hm(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        hp.v[k] = std::max(u0.v[k], 0.0);
        hm.v[k] = std::max(-u0.v[k], 0.0);
    }
    FluxPair fp = flux_product_check(hp, hm, {1.0, 0.0}, {1.0, 0.0}, 0.1);
    CHECK(fp.plus == doctest::Approx(circle_plus(0.9) / 0.1).epsilon(0.05));
    // the cold side is shallow, so the O(h) front smear costs more there
    CHECK(fp.minus == doctest::Approx(-circle_minus(1.1) / 0.1).epsilon(0.12));
    CHECK(fp.product() == fp.plus * fp.minus);
    CHECK(fp.product() <= 10.0);
}

TEST_CASE("symmetric planar data gives a unit flux product") {
    Grid g = Grid::covering(-0.5, -0.5, 0.5, 0.5, 1.0 / 64.0);
    ScalarField hp = testbed::field_of(g, 0.0, [](Vec2 p) {
        return std::max(-p.x, 0.0);
    });
    ScalarField hm = testbed::field_of(g, 0.0, [](Vec2 p) {
        return std::max(p.x, 0.0);
    });
    FluxPair fp = flux_product_check(hp, hm, {0.0, 0.0}, {1.0, 0.0}, 0.25);
    CHECK(fp.product() == doctest::Approx(1.0).epsilon(1e-9));
}
