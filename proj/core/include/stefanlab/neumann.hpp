#pragma once

#include <string>
#include <vector>

namespace stefanlab {

// Root of St = lambda sqrt(pi) exp(lambda^2) erf(lambda), the one-phase
// similarity (Neumann) transcendental; bisection to 1e-10.
double similarity_lambda(double stefan_number);

// Front position 2 lambda sqrt(t).
double similarity_front(double lambda, double t);

// Temperature at (x,t): St (1 - erf(x / 2 sqrt(t)) / erf(lambda)) ahead of the
// front, 0 beyond it.
double similarity_temperature(double stefan_number, double lambda, double x, double t);

// CSV table "st,lambda".
void write_oracle_table(const std::string& path, const std::vector<double>& st_values);

}  // namespace stefanlab
