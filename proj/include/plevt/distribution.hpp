#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "plevt/params.hpp"
#include "plevt/sorted_sample.hpp"

namespace plevt {

// Density theta (beta - 1 + theta x) e^{-theta x} / beta on x >= 0, 0 below.
double pdf(double x, const Params& p) noexcept;

// 1 - F(x) = (beta + theta x) e^{-theta x} / beta for x >= 0, 1 below.
double survival(double x, const Params& p) noexcept;

// log(1 - F(x)) = log1p(theta x / beta) - theta x, free of underflow.
double log_survival(double x, const Params& p) noexcept;

double cdf(double x, const Params& p) noexcept;

// Analytic derivative of the density, for x >= 0.
double pdf_derivative(double x, const Params& p) noexcept;

// log E[X^n] = log n! + log(beta + n) - n log theta - log beta.
double log_moment(unsigned n, const Params& p);

// E[X^n]. Throws OutOfRangeError when the value overflows a double and
// DomainError for n == 0.
double moment(unsigned n, const Params& p);

// r_k = (m_k / k!)^{1/k} for k = 1..n_max; converges to 1/theta, the
// reciprocal radius of the characteristic-function series.
std::vector<double> moment_radius_sequence(const Params& p, unsigned n_max);

// f'(x) (1 - F(x)) / f(x)^2. Tends to -1 as x grows. Throws
// NotEvaluableError where the density underflows.
double von_mises_ratio(double x, const Params& p);

// Method-of-moments fit from the first two raw empirical moments. Throws
// FitInfeasibleError (carrying the moments) when no theta > 0, beta > 1
// reproduces them, DomainError for fewer than two observations.
Params fit_method_of_moments(std::span<const double> values);
Params fit_method_of_moments(const SortedSample& sample);

// The same fit from given raw moments.
Params fit_from_moments(double m1, double m2);

}  // namespace plevt
