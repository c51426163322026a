#pragma once

// Numerical inversion of Laplace transforms.
//
//   * Fixed-Talbot: trapezoidal rule on the deformed contour
//     delta(theta) = shift + r theta (cot theta + i), r = 2M/(5t), evaluated
//     in arithmetic carrying M decimal digits.
//   * Levin: the real-part Bromwich integral
//       f(t) = (2 e^{eps t} / pi) int_0^inf Re F(eps + i u) cos(t u) du
//     by Chebyshev collocation of the Levin ODE on adaptively refined
//     panels, plus an asymptotic correction for the tail beyond the cutoff.

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tsruin/mp.hpp"

namespace tsruin::laplace {

enum class Engine { Talbot, Levin };

const char* to_string(Engine engine);

struct InversionSpec {
  Engine engine = Engine::Talbot;
  int digits = 32;                // Talbot: terms M and working precision (decimal digits)
  int nodes = 64;                 // Levin: collocation nodes per panel
  std::optional<double> cutoff;   // Levin: truncation U (defaults to nodes)
  std::optional<double> shift;    // Talbot contour shift; max(0, abscissa) when unset
  std::optional<double> eps;      // Levin abscissa; max(0, abscissa) + 1/t when unset

  // Throws DomainError when M < 8, n < 8, U <= 0, shift < 0 or eps <= 0.
  void validate() const;
};

// Caller-supplied transform.  Implementations guarantee analyticity to the
// right of abscissa() and provide both a double-precision evaluation (Levin)
// and an extended-precision one (Talbot; result precision follows the
// argument's).
class TransformFn {
 public:
  virtual ~TransformFn() = default;

  virtual std::complex<double> operator()(std::complex<double> s) const = 0;
  virtual mp::Complex operator()(const mp::Complex& s) const = 0;

  // Upper bound on the real parts of all singularities.
  virtual double abscissa() const = 0;

  // Whether concurrent evaluation is allowed.  Transforms that carry
  // continuation state return false and are evaluated serially.
  virtual bool thread_safe() const { return true; }
};

// Adapts a generic callable usable with both std::complex<double> and
// mp::Complex arguments.
template <class F>
class GenericTransform final : public TransformFn {
 public:
  GenericTransform(F f, double abscissa) : f_(std::move(f)), abscissa_(abscissa) {}

  std::complex<double> operator()(std::complex<double> s) const override { return f_(s); }
  mp::Complex operator()(const mp::Complex& s) const override { return f_(s); }
  double abscissa() const override { return abscissa_; }

 private:
  F f_;
  double abscissa_;
};

template <class F>
GenericTransform<F> make_transform(F f, double abscissa) {
  return GenericTransform<F>(std::move(f), abscissa);
}

// Fixed-Talbot inversion at precision `digits`.  The contour is shifted by
// `shift` (default max(0, abscissa)) so every singularity stays enclosed.
mp::Real talbot_invert_mp(const TransformFn& f, double t, int digits,
                          std::optional<double> shift = std::nullopt);
double talbot_invert(const TransformFn& f, double t, int digits,
                     std::optional<double> shift = std::nullopt);

struct LevinReport {
  double value = 0.0;
  int panels = 0;
  double worst_condition = 0.0;  // largest estimated condition number
  double error_estimate = 0.0;   // adaptive refinement estimate
};

// Levin inversion.  `eps` defaults to max(0, abscissa) + 1/t.
LevinReport levin_invert_report(const TransformFn& f, double t, int nodes, double cutoff,
                                std::optional<double> eps = std::nullopt);
double levin_invert(const TransformFn& f, double t, int nodes, double cutoff,
                    std::optional<double> eps = std::nullopt);

// Single-point dispatch on spec.engine.
double invert(const TransformFn& f, double t, const InversionSpec& spec);

// Elementwise inversion over a strictly increasing grid.  Failures are
// rethrown with the offending index prepended to the message.
std::vector<double> invert_grid(const TransformFn& f, std::span<const double> ts,
                                const InversionSpec& spec);

}  // namespace tsruin::laplace
