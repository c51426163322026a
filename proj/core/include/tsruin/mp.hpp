#pragma once

// Runtime-precision real and complex arithmetic on top of MPFR.
//
// Every value carries its own precision.  Binary operations produce a
// result at the larger of the operand precisions, so a computation seeded
// with M-digit inputs stays at M digits without any global state; this
// keeps the types safe to use from several threads at once.

#include <complex>
#include <iosfwd>
#include <string>

#include <mpfr.h>

namespace tsruin::mp {

// Binary precision that carries at least `digits` decimal digits.
mpfr_prec_t bits_for_digits(unsigned digits);

class Real {
 public:
  Real();
  Real(double value, unsigned digits);
  static Real with_bits(double value, mpfr_prec_t bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }
  unsigned digits() const;
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  std::string str(int significant = 20) const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(double rhs);
  Real& operator-=(double rhs);
  Real& operator*=(double rhs);
  Real& operator/=(double rhs);

 private:
  mpfr_t value_;
};

Real operator-(const Real& x);
Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator+(const Real& a, double b);
Real operator-(const Real& a, double b);
Real operator*(const Real& a, double b);
Real operator/(const Real& a, double b);
Real operator+(double a, const Real& b);
Real operator-(double a, const Real& b);
Real operator*(double a, const Real& b);
Real operator/(double a, const Real& b);

bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
bool operator<(const Real& a, double b);
bool operator>(const Real& a, double b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real cot(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& base, const Real& exponent);
Real tgamma(const Real& x);
Real pi(mpfr_prec_t bits);

std::ostream& operator<<(std::ostream& os, const Real& x);

class Complex {
 public:
  Complex() = default;
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit Complex(const Real& re);
  Complex(std::complex<double> z, unsigned digits);

  const Real& real() const { return re_; }
  const Real& imag() const { return im_; }
  mpfr_prec_t bits() const;
  std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

  Complex& operator+=(const Complex& rhs);
  Complex& operator-=(const Complex& rhs);
  Complex& operator*=(const Complex& rhs);
  Complex& operator/=(const Complex& rhs);

 private:
  Real re_;
  Real im_;
};

Complex operator-(const Complex& z);
Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator+(const Complex& a, const Real& b);
Complex operator-(const Complex& a, const Real& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator+(const Real& a, const Complex& b);
Complex operator-(const Real& a, const Complex& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Real& a, const Complex& b);
Complex operator+(const Complex& a, double b);
Complex operator-(const Complex& a, double b);
Complex operator*(const Complex& a, double b);
Complex operator/(const Complex& a, double b);
Complex operator+(double a, const Complex& b);
Complex operator-(double a, const Complex& b);
Complex operator*(double a, const Complex& b);
Complex operator/(double a, const Complex& b);

Real abs(const Complex& z);
Real arg(const Complex& z);
Complex conj(const Complex& z);
Complex exp(const Complex& z);
// Principal branch: arg in (-pi, pi].
Complex log(const Complex& z);
Complex sqrt(const Complex& z);
Complex pow(const Complex& base, const Real& exponent);

}  // namespace tsruin::mp
