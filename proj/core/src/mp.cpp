#include "tsruin/mp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

namespace tsruin::mp {
namespace {

constexpr mpfr_prec_t kDoubleBits = 53;

Real make(mpfr_prec_t bits) { return Real::with_bits(0.0, bits); }

mpfr_prec_t wider(const Real& a, const Real& b) { return std::max(a.bits(), b.bits()); }

template <class Op>
Real binary(const Real& a, const Real& b, Op op) {
  Real r = make(wider(a, b));
  op(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

template <class Op>
Real unary(const Real& a, Op op) {
  Real r = make(a.bits());
  op(r.get(), a.get(), MPFR_RNDN);
  return r;
}

}  // namespace

mpfr_prec_t bits_for_digits(unsigned digits) {
  // log2(10) ~= 3.3219; a few guard bits on top.
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 8;
}

Real::Real() { mpfr_init2(value_, kDoubleBits); mpfr_set_zero(value_, 1); }

Real::Real(double value, unsigned digits) {
  mpfr_init2(value_, bits_for_digits(digits));
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real Real::with_bits(double value, mpfr_prec_t bits) {
  Real r;
  mpfr_set_prec(r.value_, std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN));
  mpfr_set_d(r.value_, value, MPFR_RNDN);
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, kDoubleBits);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

unsigned Real::digits() const {
  return static_cast<unsigned>(std::floor((bits() - 8) / 3.321928094887362));
}

std::string Real::str(int significant) const {
  std::vector<char> buf(static_cast<std::size_t>(significant) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", significant, value_);
  return buf.data();
}

Real& Real::operator+=(const Real& rhs) { return *this = *this + rhs; }
Real& Real::operator-=(const Real& rhs) { return *this = *this - rhs; }
Real& Real::operator*=(const Real& rhs) { return *this = *this * rhs; }
Real& Real::operator/=(const Real& rhs) { return *this = *this / rhs; }
Real& Real::operator+=(double rhs) { mpfr_add_d(value_, value_, rhs, MPFR_RNDN); return *this; }
Real& Real::operator-=(double rhs) { mpfr_sub_d(value_, value_, rhs, MPFR_RNDN); return *this; }
Real& Real::operator*=(double rhs) { mpfr_mul_d(value_, value_, rhs, MPFR_RNDN); return *this; }
Real& Real::operator/=(double rhs) { mpfr_div_d(value_, value_, rhs, MPFR_RNDN); return *this; }

Real operator-(const Real& x) { return unary(x, mpfr_neg); }
Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }

Real operator+(const Real& a, double b) { Real r(a); r += b; return r; }
Real operator-(const Real& a, double b) { Real r(a); r -= b; return r; }
Real operator*(const Real& a, double b) { Real r(a); r *= b; return r; }
Real operator/(const Real& a, double b) { Real r(a); r /= b; return r; }
Real operator+(double a, const Real& b) { return b + a; }
Real operator-(double a, const Real& b) {
  Real r = make(b.bits());
  mpfr_d_sub(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}
Real operator*(double a, const Real& b) { return b * a; }
Real operator/(double a, const Real& b) {
  Real r = make(b.bits());
  mpfr_d_div(r.get(), a, b.get(), MPFR_RNDN);
  return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) < 0; }
bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) > 0; }

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real log(const Real& x) { return unary(x, mpfr_log); }
Real sin(const Real& x) { return unary(x, mpfr_sin); }
Real cos(const Real& x) { return unary(x, mpfr_cos); }
Real cot(const Real& x) { return unary(x, mpfr_cot); }
Real tgamma(const Real& x) { return unary(x, mpfr_gamma); }
Real atan2(const Real& y, const Real& x) { return binary(y, x, mpfr_atan2); }
Real pow(const Real& base, const Real& exponent) { return binary(base, exponent, mpfr_pow); }

Real pi(mpfr_prec_t bits) {
  Real r = make(bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.str(); }

// ---------------------------------------------------------------- Complex

Complex::Complex(const Real& re) : re_(re), im_(Real::with_bits(0.0, re.bits())) {}

Complex::Complex(std::complex<double> z, unsigned digits)
    : re_(z.real(), digits), im_(z.imag(), digits) {}

mpfr_prec_t Complex::bits() const { return std::max(re_.bits(), im_.bits()); }

Complex& Complex::operator+=(const Complex& rhs) { return *this = *this + rhs; }
Complex& Complex::operator-=(const Complex& rhs) { return *this = *this - rhs; }
Complex& Complex::operator*=(const Complex& rhs) { return *this = *this * rhs; }
Complex& Complex::operator/=(const Complex& rhs) { return *this = *this / rhs; }

Complex operator-(const Complex& z) { return {-z.real(), -z.imag()}; }
Complex operator+(const Complex& a, const Complex& b) {
  return {a.real() + b.real(), a.imag() + b.imag()};
}
Complex operator-(const Complex& a, const Complex& b) {
  return {a.real() - b.real(), a.imag() - b.imag()};
}
Complex operator*(const Complex& a, const Complex& b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
Complex operator/(const Complex& a, const Complex& b) {
  // Smith's algorithm keeps intermediate magnitudes bounded.
  if (abs(b.real()) >= abs(b.imag())) {
    Real ratio = b.imag() / b.real();
    Real denom = b.real() + b.imag() * ratio;
    return {(a.real() + a.imag() * ratio) / denom, (a.imag() - a.real() * ratio) / denom};
  }
  Real ratio = b.real() / b.imag();
  Real denom = b.real() * ratio + b.imag();
  return {(a.real() * ratio + a.imag()) / denom, (a.imag() * ratio - a.real()) / denom};
}

Complex operator+(const Complex& a, const Real& b) { return {a.real() + b, a.imag()}; }
Complex operator-(const Complex& a, const Real& b) { return {a.real() - b, a.imag()}; }
Complex operator*(const Complex& a, const Real& b) { return {a.real() * b, a.imag() * b}; }
Complex operator/(const Complex& a, const Real& b) { return {a.real() / b, a.imag() / b}; }
Complex operator+(const Real& a, const Complex& b) { return b + a; }
Complex operator-(const Real& a, const Complex& b) { return {a - b.real(), -b.imag()}; }
Complex operator*(const Real& a, const Complex& b) { return b * a; }
Complex operator/(const Real& a, const Complex& b) { return Complex(a) / b; }

Complex operator+(const Complex& a, double b) { return {a.real() + b, a.imag()}; }
Complex operator-(const Complex& a, double b) { return {a.real() - b, a.imag()}; }
Complex operator*(const Complex& a, double b) { return {a.real() * b, a.imag() * b}; }
Complex operator/(const Complex& a, double b) { return {a.real() / b, a.imag() / b}; }
Complex operator+(double a, const Complex& b) { return b + a; }
Complex operator-(double a, const Complex& b) { return {a - b.real(), -b.imag()}; }
Complex operator*(double a, const Complex& b) { return b * a; }
Complex operator/(double a, const Complex& b) {
  return Complex(Real::with_bits(a, b.bits())) / b;
}

Real abs(const Complex& z) {
  Real r = Real::with_bits(0.0, z.bits());
  mpfr_hypot(r.get(), z.real().get(), z.imag().get(), MPFR_RNDN);
  return r;
}

Real arg(const Complex& z) { return atan2(z.imag(), z.real()); }

Complex conj(const Complex& z) { return {z.real(), -z.imag()}; }

Complex exp(const Complex& z) {
  Real scale = exp(z.real());
  return {scale * cos(z.imag()), scale * sin(z.imag())};
}

Complex log(const Complex& z) { return {log(abs(z)), arg(z)}; }

Complex sqrt(const Complex& z) {
  if (z.real().sign() == 0 && z.imag().sign() == 0) return z;
  Real modulus = abs(z);
  Real re = sqrt((modulus + z.real()) / 2.0);
  Real im = sqrt((modulus - z.real()) / 2.0);
  if (z.imag().sign() < 0) im = -im;
  return {re, im};
}

Complex pow(const Complex& base, const Real& exponent) {
  if (base.real().sign() == 0 && base.imag().sign() == 0) return base;
  return exp(log(base) * exponent);
}

}  // namespace tsruin::mp
