#include "hwbarrier/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hwbarrier/errors.hpp"

namespace hwb::numerics {

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
  if (a == b) return 0.0;
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double hi = (p + 1 == panels) ? b : lo + h;
    sum += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
  }
  return sum;
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  // One integrator per thread: construction precomputes abscissas.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
  double err = 0.0;
  return integrator.integrate(f, a, b, tol, &err);
}

CumulativeTable::CumulativeTable(const std::function<double(double)>& f, double a, double b,
                                 std::size_t cells, double initial)
    : a_(a), b_(b) {
  if (!(b > a) || cells < 1) throw DomainError("CumulativeTable: need b > a and cells >= 1");
  const double dx = (b - a) / static_cast<double>(cells);
  values_.resize(cells + 1);
  slopes_.resize(cells + 1);
  values_[0] = initial;
  slopes_[0] = f(a);
  for (std::size_t i = 0; i < cells; ++i) {
    const double lo = a + static_cast<double>(i) * dx;
    const double hi = (i + 1 == cells) ? b : lo + dx;
    values_[i + 1] = values_[i] + boost::math::quadrature::gauss<double, 10>::integrate(f, lo, hi);
    slopes_[i + 1] = f(hi);
  }
  std::vector<double> y = values_;
  std::vector<double> dy = slopes_;
  spline_.emplace(std::move(y), std::move(dy), a, dx);
}

double CumulativeTable::clamp(double t) const {
  // Round-off at the ends of the table is tolerated; anything further out is a bug.
  const double slack = 1e-12 * std::max(1.0, b_ - a_);
  if (t < a_ - slack || t > b_ + slack) throw RangeError("CumulativeTable: argument outside table");
  return std::clamp(t, a_, b_);
}

double CumulativeTable::operator()(double t) const {
  t = clamp(t);
  if (t == b_) return values_.back();
  return (*spline_)(t);
}

double CumulativeTable::derivative(double t) const {
  t = clamp(t);
  if (t == b_) return slopes_.back();
  return spline_->prime(t);
}

double erf_diff(double a, double b) {
  if (a >= 0.0 && b >= 0.0) return std::erfc(b) - std::erfc(a);
  if (a <= 0.0 && b <= 0.0) return std::erfc(-a) - std::erfc(-b);
  return std::erf(a) - std::erf(b);
}

namespace {

// exp(e) * erfc(z) for z >= 0.
double exp_erfc(double e, double z) {
  const double c = std::erfc(z);
  if (c == 0.0) return 0.0;
  return std::exp(e + std::log(c));
}

}  // namespace

double exp_erf_diff(double e, double a, double b) {
  if (a == b) return 0.0;
  if (a > 4.0 && b > 4.0) return exp_erfc(e, b) - exp_erfc(e, a);
  if (a < -4.0 && b < -4.0) return exp_erfc(e, -a) - exp_erfc(e, -b);
  const double d = erf_diff(a, b);
  if (d == 0.0) return 0.0;
  return std::exp(e) * d;
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  std::vector<double> c(n, 0.0);
  double beta = diag[0];
  if (beta == 0.0) throw SingularityError("solve_tridiagonal: zero pivot");
  rhs[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    c[i] = upper[i - 1] / beta;
    beta = diag[i] - lower[i] * c[i];
    if (beta == 0.0) throw SingularityError("solve_tridiagonal: zero pivot");
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i + 1] * rhs[i + 1];
}

double interp_uniform(std::span<const double> values, double x0, double dx, double x) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n == 1 || x <= x0) return values.front();
  const double s = (x - x0) / dx;
  if (s >= static_cast<double>(n - 1)) return values.back();
  const auto i = static_cast<std::size_t>(s);
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

}  // namespace hwb::numerics
