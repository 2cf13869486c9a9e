#include "plevt/params.hpp"

#include <cmath>
#include <sstream>

#include "plevt/error.hpp"

namespace plevt {

Params::Params(double theta, double beta) : theta_(theta), beta_(beta) {
  if (!std::isfinite(theta) || !(theta > 0.0)) {
    std::ostringstream msg;
    msg << "theta must be finite and > 0, got " << theta;
    throw DomainError(msg.str());
  }
  if (!std::isfinite(beta) || !(beta > 1.0)) {
    std::ostringstream msg;
    msg << "beta must be finite and > 1, got " << beta;
    throw DomainError(msg.str());
  }
}

MixtureWeights mixture_weights(const Params& p) noexcept {
  const double r2 = 1.0 / p.beta();
  return {(p.beta() - 1.0) / p.beta(), r2};
}

}  // namespace plevt
