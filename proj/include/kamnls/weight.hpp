#pragma once

#include <numbers>
#include <optional>

namespace kamnls {

/// c(sigma) = max(c1, c2) with the closed forms for c1, c2 and c*.
double compute_c_sigma(double sigma);

/// The weight n -> ln^sigma(max(c, |n|)).
struct SigmaWeight {
  double sigma = 2.5;
  double c_sigma = 0.0;
  std::optional<double> c_override;

  /// Default cutoff is e; pass std::nullopt to use the true c(sigma).
  static SigmaWeight make(double sigma, std::optional<double> c_override = std::numbers::e);
  static SigmaWeight exact(double sigma) { return make(sigma, std::nullopt); }

  double cutoff() const { return c_override ? *c_override : c_sigma; }
  double operator()(long n) const;
  /// ln^sigma(max(c, x)) for real x.
  double at(double x) const;

  bool operator==(const SigmaWeight& o) const {
    return sigma == o.sigma && cutoff() == o.cutoff();
  }
};

double weight(long n, const SigmaWeight& w);

}  // namespace kamnls
