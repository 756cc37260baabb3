#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <boost/math/interpolators/cubic_hermite.hpp>

namespace hwb::numerics {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;

// Composite 20-point Gauss-Legendre rule with `panels` equal panels on [a,b].
// Returns 0 for a == b and a signed value for a > b.
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels = 8);

// Adaptive tanh-sinh quadrature on [a,b]; tolerates integrable endpoint
// singularities. Used where the integrand carries 1/sqrt kernels.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

// Running integral F(t) = F(a) + int_a^t f on a uniform grid, interpolated by
// cubic Hermite polynomials that use the exact integrand as the derivative.
class CumulativeTable {
 public:
  CumulativeTable() = default;
  CumulativeTable(const std::function<double(double)>& f, double a, double b,
                  std::size_t cells, double initial = 0.0);

  double operator()(double t) const;
  double derivative(double t) const;

  double lower() const { return a_; }
  double upper() const { return b_; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  std::span<const double> nodes_values() const { return values_; }

 private:
  double clamp(double t) const;

  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
  // cardinal_cubic_hermite shares its storage, so copies are cheap.
  std::optional<boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>>> spline_;
};

// erf(a) - erf(b) without cancellation when both arguments share a sign.
double erf_diff(double a, double b);

// exp(e) * (erf(a) - erf(b)) with the exponential merged into the
// complementary error functions when they are tiny, so that a large `e` does
// not overflow before it meets a vanishing erfc.
double exp_erf_diff(double e, double a, double b);

// Thomas algorithm for a tridiagonal system. `lower[0]` and `upper[n-1]` are
// ignored. Throws SingularityError on a zero pivot.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs_inout);

// Piecewise-linear interpolation of values on the uniform grid
// x_i = x0 + i*dx, i = 0..n-1; clamps outside the grid.
double interp_uniform(std::span<const double> values, double x0, double dx, double x);

}  // namespace hwb::numerics
