#pragma once

namespace plevt {

// Parameter pair of the Pseudo-Lindley law: rate theta > 0 and shape beta > 1.
// Validated on construction; the extreme value index gamma is derived from
// theta and never stored.
class Params {
 public:
  Params(double theta, double beta);

  double theta() const noexcept { return theta_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return 1.0 / theta_; }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  double theta_;
  double beta_;
};

// Weights of the Exp(theta) / Gamma(2, theta) decomposition of the density.
struct MixtureWeights {
  double exponential;  // (beta - 1) / beta
  double gamma2;       // 1 / beta
};

MixtureWeights mixture_weights(const Params& p) noexcept;

}  // namespace plevt
