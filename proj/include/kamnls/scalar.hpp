#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <string>
#include <string_view>

namespace kamnls {

using Complex = std::complex<double>;

/// Complex number with exact rational parts.
struct ExactComplex {
  mpq_class re;
  mpq_class im;

  ExactComplex() : re(0), im(0) {}
  ExactComplex(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

  ExactComplex& operator+=(const ExactComplex& o) { re += o.re; im += o.im; return *this; }
  ExactComplex& operator-=(const ExactComplex& o) { re -= o.re; im -= o.im; return *this; }
  ExactComplex& operator*=(const ExactComplex& o) {
    mpq_class r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Exact conversion of a finite double.
inline mpq_class exact_rational(double x) { return mpq_class(x); }

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  using Real = double;
  static constexpr std::string_view backend = "float64";
  static Complex zero() { return {0.0, 0.0}; }
  static bool is_zero(const Complex& z) { return z.real() == 0.0 && z.imag() == 0.0; }
  static double abs(const Complex& z) { return std::abs(z); }
  static Complex from_double(double x) { return {x, 0.0}; }
  static Complex from_complex(Complex z) { return z; }
  static Complex from_int(long n) { return {static_cast<double>(n), 0.0}; }
  static Complex to_complex(const Complex& z) { return z; }
  static Real real_from_double(double x) { return x; }
  static double real_to_double(Real x) { return x; }
  static Complex times_i(const Complex& z) { return {-z.imag(), z.real()}; }
  static Complex scale(const Complex& z, long n) { return z * static_cast<double>(n); }
  static Complex div_real(const Complex& z, Real d) { return z / d; }
  static Complex mul_real(const Complex& z, Real d) { return z * d; }
};

template <>
struct ScalarTraits<ExactComplex> {
  using Real = mpq_class;
  static constexpr std::string_view backend = "rational";
  static ExactComplex zero() { return {}; }
  static bool is_zero(const ExactComplex& z) { return sgn(z.re) == 0 && sgn(z.im) == 0; }
  static double abs(const ExactComplex& z) { return std::hypot(z.re.get_d(), z.im.get_d()); }
  static ExactComplex from_double(double x) { return {exact_rational(x)}; }
  static ExactComplex from_complex(Complex z) {
    return {exact_rational(z.real()), exact_rational(z.imag())};
  }
  static ExactComplex from_int(long n) { return {mpq_class(n)}; }
  static Complex to_complex(const ExactComplex& z) { return {z.re.get_d(), z.im.get_d()}; }
  static Real real_from_double(double x) { return exact_rational(x); }
  static double real_to_double(const Real& x) { return x.get_d(); }
  static ExactComplex times_i(const ExactComplex& z) { return {-z.im, z.re}; }
  static ExactComplex scale(const ExactComplex& z, long n) {
    mpq_class f(n);
    return {z.re * f, z.im * f};
  }
  static ExactComplex div_real(const ExactComplex& z, const Real& d) { return {z.re / d, z.im / d}; }
  static ExactComplex mul_real(const ExactComplex& z, const Real& d) { return {z.re * d, z.im * d}; }
};

template <class S>
concept CoefficientScalar = requires { ScalarTraits<S>::backend; };

}  // namespace kamnls
