#include "stefanlab/neumann.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace stefanlab {

namespace {
double residual(double lam, double st) {
    return lam * std::sqrt(M_PI) * std::exp(lam * lam) * std::erf(lam) - st;
}
}  // namespace

double similarity_lambda(double stefan_number) {
    if (stefan_number <= 0.0)
        throw std::invalid_argument("similarity_lambda: Stefan number must be positive");
    double lo = 1e-9, hi = 6.0;
    if (residual(hi, stefan_number) < 0.0)
        throw std::invalid_argument("similarity_lambda: Stefan number out of range");
    while (hi - lo > 1e-14) {
        double mid = 0.5 * (lo + hi);
        if (residual(mid, stefan_number) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double lam = 0.5 * (lo + hi);
    if (std::abs(residual(lam, stefan_number)) > 1e-10)
        throw std::runtime_error("similarity_lambda: bisection did not converge");
    return lam;
}

double similarity_front(double lambda, double t) { return 2.0 * lambda * std::sqrt(t); }

double similarity_temperature(double stefan_number, double lambda, double x, double t) {
    if (t <= 0.0) return x <= 0.0 ? stefan_number : 0.0;
    if (x >= similarity_front(lambda, t)) return 0.0;
    return stefan_number * (1.0 - std::erf(x / (2.0 * std::sqrt(t))) / std::erf(lambda));
}

void write_oracle_table(const std::string& path, const std::vector<double>& st_values) {
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "st,lambda\n");
    for (double st : st_values)
        std::fprintf(f, "%.17g,%.17g\n", st, similarity_lambda(st));
    std::fclose(f);
}

}  // namespace stefanlab
