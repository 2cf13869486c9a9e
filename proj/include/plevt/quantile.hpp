#pragma once

#include "plevt/params.hpp"

namespace plevt {

// All quantile functions take the TAIL mass u = 1 - F(x), never F(x).

enum class QuantileMethod { root_solve, expansion, expansion_integral };

const char* to_string(QuantileMethod m) noexcept;

struct QuantileResult {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // survival(value) - u
  QuantileMethod method = QuantileMethod::root_solve;
};

// Solves survival(x) = u for u in (0, 1) by bisection-safeguarded Newton on
// log survival(x) - log u. Throws DomainError outside (0, 1).
QuantileResult quantile_exact(double u, const Params& p);

// Same solve given log u < 0 directly, so tail masses far below the smallest
// double (log u = -1e4, say) are still exact. `residual` is reported on the
// log scale: log survival(value) - log_u.
QuantileResult quantile_from_log_tail(double log_u, const Params& p);

// theta^{-1} (log(1/u) - log log(1/u)), defined for u < e^{-1}.
double quantile_expansion(double u, const Params& p);

// d + theta^{-1} (log(1/u) - int_u^{1/2} ds / (s log(1/s))) with
// d = -theta^{-1} log log 2, defined for u in (0, 1/2). The integral is taken
// in closed form, log log(1/u) - log log 2.
double quantile_expansion_integral_form(double u, const Params& p);

// Intermediate quantities linking x = quantile_exact(u) to log(1/u), with
// R = beta / theta:
//   A = log(1 + R/x),  B = -log R + log x + A,  D = -log R + A,
//   H = B / log(1/u).
// theta x = log(1/u) + B holds identically; `fixed_point_residual` is
// theta x - log(1/u) - B evaluated in floating point.
struct ExpansionTerms {
  double x = 0.0;
  double log_inv_u = 0.0;
  double ratio_r = 0.0;
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double h = 0.0;
  double fixed_point_residual = 0.0;
};

ExpansionTerms expansion_intermediates(double u, const Params& p);

}  // namespace plevt
