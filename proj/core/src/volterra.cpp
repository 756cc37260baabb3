#include "hwbarrier/volterra.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hwbarrier/errors.hpp"
#include "hwbarrier/numerics.hpp"

namespace hwb {

namespace {

constexpr double kInvTwoSqrtPi = 0.5 / numerics::kSqrtPi;

void check_grid(const VolterraGrid& grid) {
  if (grid.nodes.size() < 2) throw ConfigError("Volterra grid needs at least one step");
  if (grid.nodes.front() != 0.0) throw ConfigError("Volterra grid must start at 0");
  for (std::size_t i = 1; i < grid.nodes.size(); ++i) {
    if (!(grid.nodes[i] > grid.nodes[i - 1])) {
      throw ConfigError("Volterra grid must be strictly increasing");
    }
  }
}

void check_rhs(const VolterraGrid& grid, std::span<const double> rhs) {
  if (rhs.size() != grid.size()) {
    throw DomainError("Volterra rhs has " + std::to_string(rhs.size()) + " values for " +
                      std::to_string(grid.size()) + " nodes");
  }
}

}  // namespace

VolterraGrid VolterraGrid::uniform(double horizon, std::size_t steps) {
  if (steps == 0) throw ConfigError("Volterra grid: M must be >= 1");
  if (!(horizon > 0.0)) throw ConfigError("Volterra grid: horizon must be > 0");
  VolterraGrid g;
  g.nodes.resize(steps + 1);
  const double h = horizon / static_cast<double>(steps);
  for (std::size_t i = 0; i <= steps; ++i) g.nodes[i] = h * static_cast<double>(i);
  g.nodes.back() = horizon;
  return g;
}

double DensitySolution::psi(double tau) const {
  const auto& x = grid.nodes;
  if (tau <= x.front()) return psi_values.front();
  if (tau >= x.back()) return psi_values.back();
  const double h = x[1] - x[0];
  return numerics::interp_uniform(psi_values, x.front(), h, tau);
}

double DensitySolution::phi(double tau) const {
  if (!phi_values) return 0.0;
  const auto& x = grid.nodes;
  if (tau <= x.front()) return phi_values->front();
  if (tau >= x.back()) return phi_values->back();
  const double h = x[1] - x[0];
  return numerics::interp_uniform(*phi_values, x.front(), h, tau);
}

LowerTriangularSystem::LowerTriangularSystem(std::size_t n)
    : n_(n), entries_(n * (n + 1) / 2, 0.0) {}

std::vector<double> LowerTriangularSystem::solve(std::span<const double> rhs) const {
  if (rhs.size() != n_) throw DomainError("LowerTriangularSystem::solve: size mismatch");
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = entries_.data() + offset(i);
    double s = rhs[i];
    for (std::size_t j = 0; j < i; ++j) s -= row[j] * x[j];
    const double d = row[i];
    if (!(d > 0.0)) throw SingularityError("Volterra system: non-positive diagonal entry");
    x[i] = s / d;
  }
  return x;
}

LowerTriangularSystem singular_weights(const VolterraGrid& grid, QuadratureRule rule) {
  check_grid(grid);
  const auto& t = grid.nodes;
  const std::size_t n = t.size();
  LowerTriangularSystem w(n);
  for (std::size_t i = 1; i < n; ++i) {
    const double c = t[i];
    if (rule == QuadratureRule::kTrapezoid) {
      for (std::size_t j = 0; j < i; ++j) {
        const double left = (j == 0) ? 0.0 : t[j] - t[j - 1];
        const double right = t[j + 1] - t[j];
        w.at(i, j) = 0.5 * (left + right) / std::sqrt(c - t[j]);
      }
      // The coincident-point value of the kernel is dropped.
      w.at(i, i) = 0.0;
      continue;
    }
    for (std::size_t j = 0; j < i; ++j) {
      // Interval [a,b] = [t_j, t_{j+1}], p = sqrt(c-a), q = sqrt(c-b):
      //   int (c-k)^{-1/2}        = 2 (p - q)
      //   int (k-a) (c-k)^{-1/2}  = 2/3 (p - q)^2 (2p + q)
      const double h = t[j + 1] - t[j];
      const double p = std::sqrt(c - t[j]);
      const double q = std::sqrt(c - t[j + 1]);
      const double pq = h / (p + q);
      const double i0 = 2.0 * pq;
      const double i1 = (2.0 / 3.0) * pq * pq * (2.0 * p + q);
      const double right = i1 / h;
      w.at(i, j) += i0 - right;
      w.at(i, j + 1) += right;
    }
  }
  return w;
}

LowerTriangularSystem assemble_second_kind(const VolterraGrid& grid, const NodeKernel& kernel,
                                           double sign, QuadratureRule rule) {
  LowerTriangularSystem m = singular_weights(grid, rule);
  const double c = sign * kInvTwoSqrtPi;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double w = m.at(i, j);
      m.at(i, j) = (w == 0.0) ? 0.0 : c * w * kernel(i, j);
    }
    m.at(i, i) += 1.0;
  }
  return m;
}

DensitySolution solve_second_kind(const VolterraGrid& grid, std::span<const double> rhs,
                                  const NodeKernel& kernel, double sign, QuadratureRule rule) {
  check_rhs(grid, rhs);
  const auto system = assemble_second_kind(grid, kernel, sign, rule);
  return DensitySolution{grid, system.solve(rhs), std::nullopt};
}

std::vector<DensitySolution> solve_second_kind(const VolterraGrid& grid,
                                               std::span<const std::vector<double>> rhs,
                                               const NodeKernel& kernel, double sign,
                                               QuadratureRule rule) {
  const auto system = assemble_second_kind(grid, kernel, sign, rule);
  std::vector<DensitySolution> out;
  out.reserve(rhs.size());
  for (const auto& r : rhs) {
    check_rhs(grid, r);
    out.push_back(DensitySolution{grid, system.solve(r), std::nullopt});
  }
  return out;
}

DensitySolution solve_block_2x2(const VolterraGrid& grid, std::span<const double> rhs1,
                                std::span<const double> rhs2, const BlockKernels& k,
                                QuadratureRule rule) {
  check_rhs(grid, rhs1);
  check_rhs(grid, rhs2);
  const auto w = singular_weights(grid, rule);
  const std::size_t n = grid.size();
  std::vector<double> psi(n, 0.0);
  std::vector<double> phi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s1 = rhs1[i];
    double s2 = rhs2[i];
    for (std::size_t j = 0; j < i; ++j) {
      const double c = kInvTwoSqrtPi * w.at(i, j);
      if (c == 0.0) continue;
      s1 -= c * (k.first_first(i, j) * psi[j] + k.first_second(i, j) * phi[j]);
      s2 -= c * (k.second_first(i, j) * psi[j] + k.second_second(i, j) * phi[j]);
    }
    const double c = kInvTwoSqrtPi * w.at(i, i);
    const double a11 = 1.0 + (c == 0.0 ? 0.0 : c * k.first_first(i, i));
    const double a12 = (c == 0.0 ? 0.0 : c * k.first_second(i, i));
    const double a21 = (c == 0.0 ? 0.0 : c * k.second_first(i, i));
    const double a22 = -1.0 + (c == 0.0 ? 0.0 : c * k.second_second(i, i));
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0 || !std::isfinite(det)) {
      throw SingularityError("Volterra 2x2 system: singular diagonal block");
    }
    psi[i] = (s1 * a22 - a12 * s2) / det;
    phi[i] = (a11 * s2 - a21 * s1) / det;
  }
  return DensitySolution{grid, std::move(psi), std::move(phi)};
}

double regular_kernel(double dy, double dtau_gap) {
  if (dy == 0.0) return 0.0;
  return dy / dtau_gap * std::exp(-dy * dy / (4.0 * dtau_gap));
}

double kernel_hp(const BarrierPath& y, double tau, double k) {
  if (k > tau) throw DomainError("kernel_hp: requires k <= tau");
  if (k == tau) {
    const double s = y.slope(tau);
    return s == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), s);
  }
  const double gap = tau - k;
  return regular_kernel(y(tau) - y(k), gap) / std::sqrt(gap);
}

double kernel_hp_regular(const BarrierPath& y, double tau, double k) {
  if (k > tau) throw DomainError("kernel_hp_regular: requires k <= tau");
  if (k == tau) return y.slope(tau);
  return regular_kernel(y(tau) - y(k), tau - k);
}

NodeKernel make_hp_kernel(const BarrierPath& y, const VolterraGrid& grid) {
  std::vector<double> yv(grid.size());
  std::vector<double> slope(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    yv[i] = y(grid.nodes[i]);
    slope[i] = y.slope(grid.nodes[i]);
  }
  return [yv = std::move(yv), slope = std::move(slope), nodes = grid.nodes](std::size_t i,
                                                                            std::size_t j) {
    if (i == j) return slope[i];
    return regular_kernel(yv[i] - yv[j], nodes[i] - nodes[j]);
  };
}

NodeKernel make_cross_kernel(const BarrierPath& to, const BarrierPath& from,
                             const VolterraGrid& grid) {
  std::vector<double> tv(grid.size());
  std::vector<double> fv(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    tv[i] = to(grid.nodes[i]);
    fv[i] = from(grid.nodes[i]);
  }
  return [tv = std::move(tv), fv = std::move(fv), nodes = grid.nodes](std::size_t i,
                                                                      std::size_t j) {
    if (i == j) return 0.0;
    return regular_kernel(tv[i] - fv[j], nodes[i] - nodes[j]);
  };
}

DensitySolution abel_closed_form([[maybe_unused]] double a, double b,
                                 const std::function<double(double)>& phi,
                                 const VolterraGrid& grid) {
  check_grid(grid);
  if (std::abs(phi(0.0)) > 1e-12) throw DomainError("abel_closed_form: requires phi(0) = 0");
  const double c2 = 0.25 * b * b;
  const auto phi1 = [&](double k) { return 2.0 * phi(k) * std::exp(c2 * k); };
  const std::size_t n = grid.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = grid.nodes[i];
    double abel = 0.0;
    if (b != 0.0 && tau > 0.0) {
      // k = tau - s^2 removes the square-root singularity.
      abel = numerics::tanh_sinh(
          [&](double s) { return 2.0 * phi1(tau - s * s); }, 0.0, std::sqrt(tau), 1e-13);
    }
    f[i] = phi1(tau) - b * kInvTwoSqrtPi * abel;
  }
  std::vector<double> psi(n);
  psi[0] = f[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double tau = grid.nodes[i];
    double conv = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double h = grid.nodes[j + 1] - grid.nodes[j];
      conv += 0.5 * h *
              (std::exp(c2 * (tau - grid.nodes[j])) * f[j] +
               std::exp(c2 * (tau - grid.nodes[j + 1])) * f[j + 1]);
    }
    psi[i] = (f[i] + c2 * conv) * std::exp(-c2 * tau);
  }
  return DensitySolution{grid, std::move(psi), std::nullopt};
}

}  // namespace hwb
