#include "kamnls/modes.hpp"

#include <cmath>

namespace kamnls {

ActionVector torus_actions(int window, const SigmaWeight& w, double factor) {
  ActionVector i0(window);
  for (int n = -window; n <= window; ++n) i0(n) = factor * std::exp(-2.0 * w(n));
  return i0;
}

bool within_action_bound(const ActionVector& i0, const SigmaWeight& w) {
  for (int n = -i0.window(); n <= i0.window(); ++n)
    if (i0(n) < 0.0 || i0(n) > std::exp(-2.0 * w(n))) return false;
  return true;
}

bool within_torus_band(const ActionVector& i0, const SigmaWeight& w) {
  for (int n = -i0.window(); n <= i0.window(); ++n) {
    const double base = std::exp(-2.0 * w(n));
    if (i0(n) < 0.25 * base || i0(n) > 4.0 * base) return false;
  }
  return true;
}

double seq_norm(const SequenceState& q, const SigmaWeight& w) {
  double s = 0.0;
  for (int n = -q.window(); n <= q.window(); ++n)
    if (q(n) != 0.0) s = std::max(s, std::abs(q(n)) * std::exp(w(n)));
  return s;
}

double sup_norm(const ModeVector& v) {
  return v.values().size() ? v.values().cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace kamnls
