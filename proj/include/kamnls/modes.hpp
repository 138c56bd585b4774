#pragma once

#include <Eigen/Core>

#include <complex>
#include <stdexcept>

#include "kamnls/weight.hpp"

namespace kamnls {

/// Dense per-mode values over the window [-M, M], indexed by the integer mode.
template <class T>
class ModeArray {
 public:
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

  ModeArray() = default;
  explicit ModeArray(int window, T fill = T(0))
      : window_(window), values_(Vector::Constant(2 * window + 1, fill)) {}
  ModeArray(int window, Vector values) : window_(window), values_(std::move(values)) {
    if (values_.size() != 2 * window + 1) throw std::invalid_argument("ModeArray: size does not match window");
  }

  int window() const { return window_; }
  bool contains(long n) const { return n >= -window_ && n <= window_; }

  T& operator()(long n) { return values_(n + window_); }
  const T& operator()(long n) const { return values_(n + window_); }
  T& at(long n) {
    if (!contains(n)) throw std::out_of_range("mode outside window");
    return (*this)(n);
  }
  const T& at(long n) const {
    if (!contains(n)) throw std::out_of_range("mode outside window");
    return (*this)(n);
  }
  /// Zero outside the window.
  T get(long n) const { return contains(n) ? (*this)(n) : T(0); }

  Vector& values() { return values_; }
  const Vector& values() const { return values_; }

  friend bool operator==(const ModeArray& a, const ModeArray& b) {
    return a.window_ == b.window_ && a.values_ == b.values_;
  }

 private:
  int window_ = 0;
  Vector values_;
};

using ModeVector = ModeArray<double>;
using ActionVector = ModeArray<double>;
using SequenceState = ModeArray<std::complex<double>>;

/// I_n(0) = factor * exp(-2 w(n)) over the window.
ActionVector torus_actions(int window, const SigmaWeight& w, double factor = 0.75);

/// I_n(0) <= exp(-2 w(n)) everywhere.
bool within_action_bound(const ActionVector& i0, const SigmaWeight& w);

/// (1/4) e^{-2w} <= I_n(0) <= 4 e^{-2w} everywhere.
bool within_torus_band(const ActionVector& i0, const SigmaWeight& w);

/// sup_n |q_n| e^{w(n)}.
double seq_norm(const SequenceState& q, const SigmaWeight& w);

double sup_norm(const ModeVector& v);

}  // namespace kamnls
