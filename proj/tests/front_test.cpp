#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "common.hpp"

using namespace stefanlab;

namespace {

double signed_area(const FrontCurve::Chain& ch) {
    double a = 0.0;
    std::size_t n = ch.pts.size();
    for (std::size_t k = 0; k < n; ++k) {
        Vec2 p = ch.pts[k], q = ch.pts[(k + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

FrontCurve curve_of(std::vector<Vec2> pts, bool closed) {
    FrontCurve fc;
    FrontCurve::Chain ch;
    ch.pts = std::move(pts);
    ch.closed = closed;
    fc.chains.push_back(std::move(ch));
    return fc;
}

}  // namespace

TEST_CASE("radial cone extracts to a circle") {
    const double h = 1.0 / 64.0;
    Grid g = Grid::covering(-1.0, -1.0, 1.0, 1.0, h);
    ScalarField u = testbed::field_of(g, 0.25, [](Vec2 p) { return 0.5 - norm(p); });
    FrontCurve fc = extract_front(u);
    REQUIRE(fc.chains.size() == 1);
    CHECK(fc.chains[0].closed);
    CHECK(fc.t == 0.25);
    CHECK(signed_area(fc.chains[0]) > 0.0);

    FrontCurve truth = curve_of(testbed::circle_curve(0.5, 0.25), true);
    CHECK(hausdorff(fc, truth) <= h / 2.0);
}

TEST_CASE("inverted cone reverses the orientation") {
    const double h = 1.0 / 64.0;
    Grid g = Grid::covering(-1.0, -1.0, 1.0, 1.0, h);
    ScalarField u = testbed::field_of(g, 0.0, [](Vec2 p) { return norm(p) - 0.5; });
    FrontCurve fc = extract_front(u);
    REQUIRE(fc.chains.size() == 1);
    CHECK(fc.chains[0].closed);
    CHECK(signed_area(fc.chains[0]) < 0.0);
}

TEST_CASE("zero nodes sit on the contour exactly") {
    const double h = 1.0 / 8.0;
    Grid g = Grid::covering(-1.0, -1.0, 1.0, 1.0, h);
    ScalarField u = testbed::field_of(g, 0.0, [](Vec2 p) { return p.x - 0.5; });
    FrontCurve fc = extract_front(u);
    REQUIRE(fc.vertex_count() > 0);
    for (const auto& ch : fc.chains) {
        CHECK(!ch.closed);
        for (Vec2 p : ch.pts) CHECK(p.x == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("single-signed fields carry no contour") {
    Grid g = Grid::covering(-0.5, -0.5, 0.5, 0.5, 1.0 / 16.0);
    ScalarField hot = testbed::field_of(g, 0.0, [](Vec2) { return 1.0; });
    ScalarField cold = testbed::field_of(g, 0.0, [](Vec2) { return -1.0; });
    CHECK(extract_front(hot).vertex_count() == 0);
    CHECK(extract_front(cold).vertex_count() == 0);
    CHECK(extract_front(hot).primary() == nullptr);
    CHECK_THROWS_AS(hausdorff(extract_front(hot), extract_front(cold)),
                    std::invalid_argument);
}

TEST_CASE("hausdorff distance recovers a known ring gap") {
    FrontCurve a = curve_of(testbed::circle_curve(1.0, 0.0), true);
    FrontCurve b = curve_of(testbed::circle_curve(1.07, 0.0), true);
    CHECK(hausdorff(a, b) == doctest::Approx(0.07).epsilon(1e-3));
    CHECK(hausdorff(a, a) == 0.0);
}

TEST_CASE("ray crossing is exact on linear data") {
    Grid g = Grid::covering(-1.0, -0.2, 1.0, 0.2, 1.0 / 64.0);
    ScalarField u = testbed::field_of(g, 0.0, [](Vec2 p) { return 0.3 - p.x; });
    auto s = ray_front_crossing(u, {0.0, 0.0}, {1.0, 0.0}, 0.6);
    REQUIRE(s.has_value());
    CHECK(*s == doctest::Approx(0.3).epsilon(1e-9));

    // no sign change inside a too-small window
    CHECK(!ray_front_crossing(u, {0.0, 0.0}, {1.0, 0.0}, 0.2).has_value());
}

TEST_CASE("nearest and farthest crossings straddle a positive pocket") {
    Grid g = Grid::covering(-0.2, -0.2, 1.0, 0.2, 1.0 / 64.0);
    ScalarField u = testbed::field_of(g, 0.0, [](Vec2 p) {
        return -(p.x - 0.2) * (p.x - 0.6);
    });
    auto near = ray_front_crossing(u, {0.0, 0.0}, {1.0, 0.0}, 0.9, false);
    auto far = ray_front_crossing(u, {0.0, 0.0}, {1.0, 0.0}, 0.9, true);
    REQUIRE(near.has_value());
    REQUIRE(far.has_value());
    CHECK(*near == doctest::Approx(0.2).epsilon(5e-3));
    CHECK(*far == doctest::Approx(0.6).epsilon(5e-3));
}

TEST_CASE("penetration depth tracks a moving radial front") {
    Grid g = Grid::covering(-1.0, -1.0, 1.0, 1.0, 1.0 / 64.0);
    std::vector<ScalarField> fields;
    std::vector<double> rhos = {0.5, 0.55, 0.45};
    for (std::size_t k = 0; k < rhos.size(); ++k) {
        double rho = rhos[k];
        fields.push_back(testbed::field_of(g, 0.01 * double(k), [rho](Vec2 p) {
            return rho - norm(p);
        }));
    }
    Trajectory traj = testbed::traj_of(fields);
    Vec2 x0 = {0.5, 0.0}, e_n = {1.0, 0.0};
    auto d0 = front_distance(traj, 0, x0, e_n, 0.2);
    auto d1 = front_distance(traj, 1, x0, e_n, 0.2);
    auto d2 = front_distance(traj, 2, x0, e_n, 0.2);
    REQUIRE(d0.has_value());
    REQUIRE(d1.has_value());
    REQUIRE(d2.has_value());
    CHECK(*d0 <= 1e-9);
    CHECK(*d1 == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(*d2 == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("one-sided gradient is exact on linear data") {
    Grid g = Grid::covering(-1.0, -1.0, 1.0, 1.0, 1.0 / 32.0);
    ScalarField u = testbed::field_of(g, 0.0, [](Vec2 p) { return -3.0 * p.x + 0.2; });
    GradProbe gp = gradient_one_sided(u, {-0.25, 0.0}, +1, {1.0, 0.0}, 0.25);
    REQUIRE(gp.ok);
    CHECK(!gp.fallback);
    CHECK(gp.value == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("one-sided gradient falls back when the stencil crosses the front") {
    Grid g = Grid::covering(-1.0, -1.0, 1.0, 1.0, 1.0 / 32.0);
    ScalarField u = testbed::field_of(g, 0.0, [](Vec2 p) { return 0.5 - norm(p); });
    // the requested stencil foot lands in the cold phase, the cell-sized one survives
    GradProbe gp = gradient_one_sided(u, {0.45, 0.0}, +1, {-1.0, 0.0}, 0.2);
    REQUIRE(gp.ok);
    CHECK(gp.fallback);
    CHECK(gp.value == doctest::Approx(1.0).epsilon(0.2));
}
