#include "tsruin/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>
#include <numbers>
#include <string>
#include <thread>

#include <Eigen/Dense>

#include "tsruin/diagnostics.hpp"
#include "tsruin/errors.hpp"

namespace tsruin::laplace {
namespace {

using cplx = std::complex<double>;

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("inversion requires t > 0, got " + std::to_string(t));
  }
}

double default_shift(const TransformFn& f) { return std::max(0.0, f.abscissa()); }

// ---------------------------------------------------------------- Levin

// One collocation panel of the Levin system
//   p1' + t p2 = g,   p2' - t p1 = 0,
// whose solution satisfies d/du [p1 cos(tu) + p2 sin(tu)] = g(u) cos(tu).
class LevinPanelSolver {
 public:
  LevinPanelSolver(int nodes, double t) : n_(nodes), t_(t) {
    x_.resize(n_);
    for (int j = 0; j < n_; ++j) x_[j] = std::cos(std::numbers::pi * j / (n_ - 1));
    basis_.resize(n_, n_);
    slope_.resize(n_, n_);
    for (int j = 0; j < n_; ++j) {
      // T_k(x) and T_k'(x) = k U_{k-1}(x) by the three-term recurrences.
      double t_prev = 1.0, t_cur = x_[j];
      double u_prev = 0.0, u_cur = 1.0;  // U_{-1}, U_0
      basis_(j, 0) = 1.0;
      slope_(j, 0) = 0.0;
      for (int k = 1; k < n_; ++k) {
        basis_(j, k) = t_cur;
        slope_(j, k) = k * u_cur;
        const double t_next = 2.0 * x_[j] * t_cur - t_prev;
        const double u_next = 2.0 * x_[j] * u_cur - u_prev;
        t_prev = t_cur;
        t_cur = t_next;
        u_prev = u_cur;
        u_cur = u_next;
      }
    }
  }

  struct Result {
    double integral;
    double condition;
  };

  template <class G>
  Result solve(const G& g, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int m = 2 * n_;
    Eigen::MatrixXd system(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < n_; ++j) {
      for (int k = 0; k < n_; ++k) {
        const double d = slope_(j, k) / half;
        const double v = t_ * basis_(j, k);
        system(j, k) = d;
        system(j, n_ + k) = v;
        system(n_ + j, k) = -v;
        system(n_ + j, n_ + k) = d;
      }
      rhs(j) = g(mid + half * x_[j]);
    }
    // The homogeneous solutions (cos(tu+phi), sin(tu+phi)) make the system
    // numerically rank deficient whenever the panel resolves the
    // oscillation; they are annihilated by the boundary functional, so a
    // rank-revealing minimum-norm solve is used.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(system);
    const Eigen::VectorXd coef = cod.solve(rhs);
    const auto& r = cod.matrixQTZ();
    const Eigen::Index rank = cod.rank();
    double condition = 1.0;
    if (rank > 0) condition = std::abs(r(0, 0)) / std::abs(r(rank - 1, rank - 1));

    double p1_hi = 0.0, p1_lo = 0.0, p2_hi = 0.0, p2_lo = 0.0;
    for (int k = 0; k < n_; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // T_k(-1)
      p1_hi += coef(k);
      p1_lo += sign * coef(k);
      p2_hi += coef(n_ + k);
      p2_lo += sign * coef(n_ + k);
    }
    const double integral = (p1_hi * std::cos(t_ * b) + p2_hi * std::sin(t_ * b)) -
                            (p1_lo * std::cos(t_ * a) + p2_lo * std::sin(t_ * a));
    return {integral, condition};
  }

 private:
  int n_;
  double t_;
  std::vector<double> x_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd slope_;
};

// Integral of g(u) cos(tu) over (cutoff, inf) by repeated integration by
// parts; derivatives from central differences.
template <class G>
double oscillatory_tail(const G& g, double t, double cutoff) {
  const double h = cutoff / 50.0;
  const double g0 = g(cutoff);
  const double gp = g(cutoff + h), gm = g(cutoff - h);
  const double gp2 = g(cutoff + 2 * h), gm2 = g(cutoff - 2 * h);
  const double d1 = (gp - gm) / (2 * h);
  const double d2 = (gp - 2 * g0 + gm) / (h * h);
  const double d3 = (gp2 - 2 * gp + 2 * gm - gm2) / (2 * h * h * h);
  const double s = std::sin(t * cutoff), c = std::cos(t * cutoff);
  return -g0 * s / t - d1 * c / (t * t) + d2 * s / (t * t * t) + d3 * c / (t * t * t * t);
}

}  // namespace

const char* to_string(Engine engine) {
  return engine == Engine::Talbot ? "talbot" : "levin";
}

void InversionSpec::validate() const {
  if (digits < 8) throw DomainError("talbot precision M must be >= 8");
  if (nodes < 8) throw DomainError("levin node count n must be >= 8");
  if (cutoff && !(*cutoff > 0.0)) throw DomainError("levin cutoff U must be positive");
  if (shift && !(*shift >= 0.0)) throw DomainError("contour shift must be nonnegative");
  if (eps && !(*eps > 0.0)) throw DomainError("levin eps must be positive");
}

mp::Real talbot_invert_mp(const TransformFn& f, double t, int digits,
                          std::optional<double> shift) {
  require_time(t);
  if (digits < 8) throw DomainError("talbot precision M must be >= 8");
  const double sigma = shift.value_or(default_shift(f));
  if (sigma < f.abscissa()) {
    throw DomainError("talbot shift " + std::to_string(sigma) + " left of the abscissa " +
                      std::to_string(f.abscissa()));
  }
  const unsigned prec = static_cast<unsigned>(digits);
  const int terms = digits;
  const mp::Real time(t, prec);
  const mp::Real shift_mp(sigma, prec);
  const mp::Real r = mp::Real(2.0 * terms, prec) / (mp::Real(5.0, prec) * time);
  const mp::Real pi = mp::pi(mp::bits_for_digits(prec));
  const mp::Real zero(0.0, prec);

  auto eval = [&](const mp::Complex& s) {
    mp::Complex v = f(s);
    if (!v.real().is_finite() || !v.imag().is_finite()) {
      throw NumericalError("talbot: transform not finite at s=" +
                           std::to_string(s.to_complex().real()) + "+" +
                           std::to_string(s.to_complex().imag()) + "i");
    }
    return v;
  };

  mp::Real sum = eval(mp::Complex(shift_mp + r, zero)).real() * mp::exp(r * time) / 2.0;
  for (int j = 1; j < terms; ++j) {
    const mp::Real theta = pi * static_cast<double>(j) / static_cast<double>(terms);
    const mp::Real cot = mp::cot(theta);
    const mp::Complex contour(r * theta * cot, r * theta);
    const mp::Real sigma_j = theta + (theta * cot - 1.0) * cot;
    const mp::Complex value = eval(contour + shift_mp);
    const mp::Complex weight = mp::exp(contour * time) * mp::Complex(mp::Real(1.0, prec), sigma_j);
    sum += (value * weight).real();
  }
  return mp::exp(shift_mp * time) * r / static_cast<double>(terms) * sum;
}

double talbot_invert(const TransformFn& f, double t, int digits, std::optional<double> shift) {
  return talbot_invert_mp(f, t, digits, shift).to_double();
}

LevinReport levin_invert_report(const TransformFn& f, double t, int nodes, double cutoff,
                                std::optional<double> eps) {
  require_time(t);
  if (nodes < 8) throw DomainError("levin node count n must be >= 8");
  if (!(cutoff > 0.0)) throw DomainError("levin cutoff U must be positive");
  const double abscissa = eps.value_or(default_shift(f) + 1.0 / t);
  if (abscissa <= f.abscissa()) {
    throw DomainError("levin eps " + std::to_string(abscissa) +
                      " must exceed the transform abscissa " + std::to_string(f.abscissa()));
  }
  auto g = [&](double u) {
    const cplx v = f(cplx(abscissa, u));
    if (!std::isfinite(v.real())) {
      throw NumericalError("levin: transform not finite at u=" + std::to_string(u));
    }
    return v.real();
  };

  const LevinPanelSolver solver(nodes, t);
  LevinReport report;

  // Initial panel breakpoints at cot(i pi / 2m), rescaled to [0, U]; they
  // accumulate near zero where the transform varies fastest.
  constexpr int kInitialPanels = 8;
  const double top = 1.0 / std::tan(std::numbers::pi / (2.0 * kInitialPanels));
  std::vector<double> breaks;
  for (int i = kInitialPanels; i >= 1; --i) {
    breaks.push_back(cutoff * (1.0 / std::tan(i * std::numbers::pi / (2.0 * kInitialPanels))) /
                     top);
  }
  breaks.front() = 0.0;
  breaks.back() = cutoff;

  struct Panel {
    double a, b, estimate;
  };
  std::vector<Panel> pending;
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const auto r = solver.solve(g, breaks[i], breaks[i + 1]);
    report.worst_condition = std::max(report.worst_condition, r.condition);
    pending.push_back({breaks[i], breaks[i + 1], r.integral});
    scale += std::abs(r.integral);
  }
  const double tolerance = std::max(1e-13, 1e-11 * scale);

  constexpr int kMaxPanels = 4096;
  double total = 0.0;
  double error = 0.0;
  while (!pending.empty()) {
    const Panel p = pending.back();
    pending.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    const auto left = solver.solve(g, p.a, mid);
    const auto right = solver.solve(g, mid, p.b);
    report.worst_condition = std::max({report.worst_condition, left.condition, right.condition});
    const double refined = left.integral + right.integral;
    const double diff = std::abs(refined - p.estimate);
    const bool small = (p.b - p.a) < 1e-9 * cutoff;
    if (diff <= tolerance * (p.b - p.a) / cutoff || small) {
      total += refined;
      error += diff;
      ++report.panels;
      continue;
    }
    if (report.panels + static_cast<int>(pending.size()) > kMaxPanels) {
      throw NumericalError("levin: adaptive refinement exceeded panel budget", diff);
    }
    pending.push_back({p.a, mid, left.integral});
    pending.push_back({mid, p.b, right.integral});
  }

  if (report.worst_condition > 1e12) {
    diag::warn("levin: collocation condition number " + std::to_string(report.worst_condition) +
               " at t=" + std::to_string(t));
  }
  total += oscillatory_tail(g, t, cutoff);
  const double factor = 2.0 * std::exp(abscissa * t) / std::numbers::pi;
  report.value = factor * total;
  report.error_estimate = factor * error;
  return report;
}

double levin_invert(const TransformFn& f, double t, int nodes, double cutoff,
                    std::optional<double> eps) {
  return levin_invert_report(f, t, nodes, cutoff, eps).value;
}

double invert(const TransformFn& f, double t, const InversionSpec& spec) {
  spec.validate();
  if (spec.engine == Engine::Talbot) return talbot_invert(f, t, spec.digits, spec.shift);
  const double cutoff = spec.cutoff.value_or(static_cast<double>(spec.nodes));
  return levin_invert(f, t, spec.nodes, cutoff, spec.eps);
}

std::vector<double> invert_grid(const TransformFn& f, std::span<const double> ts,
                                const InversionSpec& spec) {
  spec.validate();
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (!(ts[i] > ts[i - 1])) throw DomainError("invert_grid: times must be strictly increasing");
  }
  std::vector<double> out(ts.size());
  auto run = [&](std::size_t i) {
    try {
      out[i] = invert(f, ts[i], spec);
    } catch (const NumericalError& e) {
      throw NumericalError("grid point " + std::to_string(i) + ": " + e.what(), e.residual());
    } catch (const DomainError& e) {
      throw DomainError("grid point " + std::to_string(i) + ": " + e.what());
    }
  };
  const unsigned workers = std::min<std::size_t>(std::thread::hardware_concurrency(), ts.size());
  if (!f.thread_safe() || workers <= 1) {
    for (std::size_t i = 0; i < ts.size(); ++i) run(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < ts.size(); i += workers) run(i);
    }));
  }
  for (auto& job : jobs) job.get();
  return out;
}

}  // namespace tsruin::laplace
