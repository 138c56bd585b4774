#include "kamnls/weight.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "kamnls/errors.hpp"

namespace kamnls {

double compute_c_sigma(double sigma) {
  if (!(sigma > 1.0)) throw DomainError("compute_c_sigma: sigma must exceed 1, got " + std::to_string(sigma));
  const double two_s = std::pow(2.0, sigma);
  const double c1 = std::exp(sigma * two_s * std::numbers::ln2);
  const double c_star = 2.0 * std::pow((sigma - 1.0) / std::numbers::e, sigma - 1.0);
  const double c2 = std::exp(std::pow(sigma * two_s * c_star, 1.0 / sigma));
  return std::max(c1, c2);
}

SigmaWeight SigmaWeight::make(double sigma, std::optional<double> c_override) {
  if (!(sigma > 2.0)) throw DomainError("SigmaWeight: sigma must exceed 2, got " + std::to_string(sigma));
  if (c_override && !(*c_override >= std::numbers::e))
    throw DomainError("SigmaWeight: c_override must be at least e");
  SigmaWeight w;
  w.sigma = sigma;
  w.c_sigma = compute_c_sigma(sigma);
  w.c_override = c_override;
  return w;
}

double SigmaWeight::at(double x) const {
  return std::pow(std::log(std::max(cutoff(), std::abs(x))), sigma);
}

double SigmaWeight::operator()(long n) const { return at(static_cast<double>(std::labs(n))); }

double weight(long n, const SigmaWeight& w) { return w(n); }

}  // namespace kamnls
