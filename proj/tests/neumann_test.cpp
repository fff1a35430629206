#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "common.hpp"

using namespace stefanlab;

namespace {

// (St, lambda) pairs computed once from the transcendental equation with an
// independent high-precision root finder and frozen here.
const std::vector<std::pair<double, double>> kLambdaTable = {
    {0.1, 0.220016272743}, {0.2, 0.306423905361}, {0.5, 0.464785920646},
    {1.0, 0.620062633314}, {2.0, 0.800601362806}, {5.0, 1.059687014282},
};

}  // namespace

TEST_CASE("similarity root matches the frozen table") {
    for (auto [st, lam] : kLambdaTable)
        CHECK(similarity_lambda(st) == doctest::Approx(lam).epsilon(1e-9));
}

TEST_CASE("similarity root satisfies the transcendental equation") {
    const double rt_pi = std::sqrt(testbed::kPi);
    for (auto [st, lam_frozen] : kLambdaTable) {
        double lam = similarity_lambda(st);
        double residual = st - lam * rt_pi * std::exp(lam * lam) * std::erf(lam);
        CHECK(std::fabs(residual) <= 1e-8);
        (void)lam_frozen;
    }
}

TEST_CASE("similarity root grows with the driving number") {
    double prev = 0.0;
    for (double st : {0.05, 0.1, 0.3, 0.7, 1.5, 3.0, 8.0}) {
        double lam = similarity_lambda(st);
        CHECK(lam > prev);
        prev = lam;
    }
}

TEST_CASE("front position follows the square-root law") {
    double lam = similarity_lambda(1.0);
    CHECK(similarity_front(lam, 0.5) == doctest::Approx(0.876900985553).epsilon(1e-9));
    CHECK(similarity_front(lam, 0.0) == 0.0);
    CHECK(similarity_front(lam, 4.0) == doctest::Approx(2.0 * similarity_front(lam, 1.0)).epsilon(1e-12));
}

TEST_CASE("temperature profile matches the frozen sample and vanishes past the front") {
    double lam = similarity_lambda(1.0);
    CHECK(similarity_temperature(1.0, lam, 0.4, 0.5) ==
          doctest::Approx(0.498202152837).epsilon(1e-9));
    CHECK(similarity_temperature(1.0, lam, 0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    double s = similarity_front(lam, 0.5);
    CHECK(similarity_temperature(1.0, lam, s * 1.0001, 0.5) == 0.0);
    CHECK(similarity_temperature(1.0, lam, 3.0, 0.5) == 0.0);
    // continuous at the front
    CHECK(std::fabs(similarity_temperature(1.0, lam, s * 0.9999, 0.5)) <= 1e-3);
}

TEST_CASE("oracle table is deterministic and parses back") {
    std::vector<double> sts;
    for (auto [st, lam] : kLambdaTable) sts.push_back(st);

    const std::string pa = "oracle_a.csv", pb = "oracle_b.csv";
    write_oracle_table(pa, sts);
    write_oracle_table(pb, sts);
    CHECK(testbed::same_bytes(pa, pb));

    std::ifstream in(pa);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "st,lambda");
    std::size_t row = 0;
    while (std::getline(in, line)) {
        REQUIRE(row < kLambdaTable.size());
        double st = 0.0, lam = 0.0;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &st, &lam) == 2);
        CHECK(st == doctest::Approx(kLambdaTable[row].first).epsilon(1e-12));
        CHECK(lam == doctest::Approx(kLambdaTable[row].second).epsilon(1e-9));
        ++row;
    }
    CHECK(row == kLambdaTable.size());
    std::remove(pa.c_str());
    std::remove(pb.c_str());
}
