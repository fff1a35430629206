#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <string>

#include "common.hpp"

using namespace stefanlab;

namespace {

std::string what_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("empty scenario text yields the documented defaults") {
    Scenario sc = parse_scenario("");
    CHECK(sc.name == "unnamed");
    CHECK(sc.kind == Scenario::Kind::Disk);
    CHECK(sc.seed == 0u);
    CHECK(sc.r0 == 0.5);
    CHECK(sc.base_radius == 1.0);
    CHECK(sc.R == 4.0);
    CHECK(sc.n_angles == 256);
    CHECK(sc.spike_factor == 1.0);
    CHECK(sc.h == 1.0 / 128.0);
    CHECK(sc.cfl == 0.9);
    CHECK(sc.t_end == 0.15);
    CHECK(sc.n_snapshots == 12);
    CHECK(sc.snapshot_times.empty());
    CHECK(sc.solve_tol == 1e-4);
    CHECK(sc.d_ladder == std::vector<double>{0.05, 0.1, 0.2});
    CHECK(sc.M == 10.0);
    CHECK(sc.M_sweep == std::vector<double>{5.0, 10.0, 20.0});
    CHECK(sc.K1_sweep == std::vector<double>{1.0, 2.0, 4.0, 8.0});
    CHECK(sc.sigma == 0.05);
    CHECK(sc.r_decomp == 0.1);
    CHECK(sc.barriers_enable);
    CHECK(sc.barrier_b == 1.25);
    CHECK(sc.slab_profile == "similarity");
}

TEST_CASE("sections, comments and lists parse into the right fields") {
    const char* text =
        "# leading comment\n"
        "name = probe  # trailing comment\n"
        "kind = slab\n"
        "\n"
        "[slab]\n"
        "length = 2.5\n"
        "ny = 6\n"
        "stefan_number = 0.4\n"
        "t0 = 0.2\n"
        "profile = linear\n"
        "[grid]\n"
        "h = 0.015625\n"
        "[solver]\n"
        "cfl = 0.5\n"
        "t_end = 0.3\n"
        "n_snapshots = 5\n"
        "snapshot_times = 0, 0.1,, 0.2 ,0.3\n"
        "tol = 1e-6\n"
        "[analysis]\n"
        "d_ladder = 0.1\n"
        "K1_sweep = 2,4\n"
        "[barriers]\n"
        "enable = 0\n"
        "cap_C3 = 7\n";
    Scenario sc = parse_scenario(text);
    CHECK(sc.name == "probe");
    CHECK(sc.kind == Scenario::Kind::Slab);
    CHECK(sc.slab_length == 2.5);
    CHECK(sc.slab_ny == 6);
    CHECK(sc.stefan_number == 0.4);
    CHECK(sc.slab_t0 == 0.2);
    CHECK(sc.slab_profile == "linear");
    CHECK(sc.h == 0.015625);
    CHECK(sc.cfl == 0.5);
    CHECK(sc.t_end == 0.3);
    CHECK(sc.n_snapshots == 5);
    CHECK(sc.snapshot_times == std::vector<double>{0.0, 0.1, 0.2, 0.3});
    CHECK(sc.solve_tol == 1e-6);
    CHECK(sc.d_ladder == std::vector<double>{0.1});
    CHECK(sc.K1_sweep == std::vector<double>{2.0, 4.0});
    CHECK_FALSE(sc.barriers_enable);
    CHECK(sc.cap_C3 == 7.0);
}

TEST_CASE("unknown keys and malformed lines are hard errors") {
    CHECK_THROWS_AS(parse_scenario("[domain]\nbogus = 1\n"), std::invalid_argument);
    std::string msg = what_of([] { parse_scenario("[domain]\nbogus = 1\n"); });
    CHECK(msg.find("domain.bogus") != std::string::npos);

    CHECK_THROWS_AS(parse_scenario("kind = sphere\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("[domain\nr0 = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("just some words\n"), std::invalid_argument);

    std::string bad = what_of([] { parse_scenario("[grid]\nh = 1.5q\n"); });
    CHECK(bad.find("grid.h") != std::string::npos);
    std::string badlist =
        what_of([] { parse_scenario("[solver]\nsnapshot_times = 0.1,2q\n"); });
    CHECK(badlist.find("snapshot_times") != std::string::npos);
    CHECK_THROWS(parse_scenario("[grid]\nh = abc\n"));
}

TEST_CASE("validation rejects out-of-range solver settings") {
    CHECK_THROWS_AS(parse_scenario("[grid]\nh = -0.01\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("[solver]\ncfl = 0.95\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("[solver]\ncfl = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("[solver]\nt_end = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("[solver]\nn_snapshots = 1\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("[domain]\nR = 0.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("kind = slab\n[slab]\nprofile = cubic\n"),
                    std::invalid_argument);
    // slab scenarios do not require R > base_radius
    CHECK_NOTHROW(parse_scenario("kind = slab\n[domain]\nR = 0.5\n"));
}

TEST_CASE("read_scenario reports missing files by path") {
    CHECK_THROWS_AS(read_scenario("/nonexistent/nowhere.cfg"), std::runtime_error);
    std::string msg = what_of([] { read_scenario("/nonexistent/nowhere.cfg"); });
    CHECK(msg.find("scenario not found") != std::string::npos);
    CHECK(msg.find("/nonexistent/nowhere.cfg") != std::string::npos);
}

TEST_CASE("refinement halves the grid spacing exactly") {
    Scenario sc = parse_scenario("[grid]\nh = 0.03125\n");
    apply_refine(sc, 2);
    CHECK(sc.h == 0.0078125);
    apply_refine(sc, 0);
    CHECK(sc.h == 0.0078125);
    CHECK_THROWS_AS(apply_refine(sc, -1), std::invalid_argument);
}

TEST_CASE("every shipped scenario file parses with its advertised identity") {
    struct Row {
        const char* file;
        const char* name;
        Scenario::Kind kind;
    };
    const Row rows[] = {
        {"badball.cfg", "badball", Scenario::Kind::Disk},
        {"circle.cfg", "circle", Scenario::Kind::Disk},
        {"lipschitz.cfg", "lipschitz", Scenario::Kind::Disk},
        {"neumann1d.cfg", "neumann1d", Scenario::Kind::Slab},
        {"planar_sym.cfg", "planar_sym", Scenario::Kind::Slab},
        {"shrink.cfg", "shrink", Scenario::Kind::Disk},
    };
    for (const Row& r : rows) {
        Scenario sc = read_scenario(testbed::scenario_path(r.file));
        CHECK(sc.name == r.name);
        CHECK(sc.kind == r.kind);
        CHECK(sc.h > 0.0);
        if (sc.kind == Scenario::Kind::Disk) CHECK(sc.R > sc.base_radius);
    }
    Scenario bb = read_scenario(testbed::scenario_path("badball.cfg"));
    CHECK(bb.spike_factor == 8.0);
    CHECK(bb.h == 0.0078125);
    CHECK(bb.spike_width == 0.35);
}
