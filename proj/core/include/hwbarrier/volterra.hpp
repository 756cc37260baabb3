#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hwbarrier/heat_transform.hpp"

namespace hwb {

// Ordered heat-time nodes 0 = tau_0 < tau_1 < ... < tau_M.
struct VolterraGrid {
  std::vector<double> nodes;

  // M equal steps on [0, horizon], M + 1 nodes. Throws ConfigError for M = 0.
  static VolterraGrid uniform(double horizon, std::size_t steps);

  std::size_t size() const { return nodes.size(); }
  std::size_t steps() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  double horizon() const { return nodes.empty() ? 0.0 : nodes.back(); }

  bool operator==(const VolterraGrid&) const = default;
};

struct DensitySolution {
  VolterraGrid grid;
  std::vector<double> psi_values;
  std::optional<std::vector<double>> phi_values;

  // Piecewise-linear interpolation of the first (resp. second) density.
  double psi(double tau) const;
  double phi(double tau) const;
};

// How the weakly singular integral int_0^tau g(tau,k) f(k) / sqrt(tau - k) dk
// is discretized on the grid.
enum class QuadratureRule {
  // g f interpolated linearly between nodes, 1/sqrt(tau - k) integrated
  // exactly on every sub-interval (product trapezoid). Uses the limit
  // g(tau,tau) on the diagonal.
  kProductTrapezoid,
  // Plain trapezoid applied to the full kernel with the coincident-point
  // value set to zero.
  kTrapezoid,
};

// Regular part g(tau_i, tau_j) of a kernel K = g / sqrt(tau_i - tau_j),
// addressed by node indices j <= i; j == i must return the diagonal limit.
using NodeKernel = std::function<double(std::size_t i, std::size_t j)>;

// Dense lower-triangular matrix I + P with packed row storage.
class LowerTriangularSystem {
 public:
  explicit LowerTriangularSystem(std::size_t n = 0);

  std::size_t size() const { return n_; }
  double& at(std::size_t i, std::size_t j) { return entries_[offset(i) + j]; }
  double at(std::size_t i, std::size_t j) const { return entries_[offset(i) + j]; }

  // Forward substitution. Throws SingularityError on a non-positive diagonal.
  std::vector<double> solve(std::span<const double> rhs) const;

  bool operator==(const LowerTriangularSystem&) const = default;

 private:
  static std::size_t offset(std::size_t i) { return i * (i + 1) / 2; }
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

// Quadrature weights W(i,j) (including the 1/sqrt factor) so that
//   int_0^{tau_i} g(tau_i,k) f(k) / sqrt(tau_i - k) dk ~ sum_j W(i,j) g(tau_i,tau_j) f(tau_j).
// Row-packed like LowerTriangularSystem; row 0 is zero.
LowerTriangularSystem singular_weights(const VolterraGrid& grid, QuadratureRule rule);

// I + sign/(2 sqrt(pi)) W .* g, the discretization of
//   f(tau) + sign/(2 sqrt(pi)) int_0^tau K(tau,k) f(k) dk.
// Depends on the kernel only, so it is shared by every right-hand side.
LowerTriangularSystem assemble_second_kind(const VolterraGrid& grid, const NodeKernel& kernel,
                                           double sign,
                                           QuadratureRule rule = QuadratureRule::kProductTrapezoid);

// Solves Psi(tau) + sign/(2 sqrt(pi)) int_0^tau K(tau,k) Psi(k) dk = rhs(tau) on the grid.
DensitySolution solve_second_kind(const VolterraGrid& grid, std::span<const double> rhs,
                                  const NodeKernel& kernel, double sign,
                                  QuadratureRule rule = QuadratureRule::kProductTrapezoid);

// Several right-hand sides against one assembled matrix.
std::vector<DensitySolution> solve_second_kind(const VolterraGrid& grid,
                                               std::span<const std::vector<double>> rhs,
                                               const NodeKernel& kernel, double sign,
                                               QuadratureRule rule = QuadratureRule::kProductTrapezoid);

struct BlockKernels {
  NodeKernel first_first;    // Psi in the first equation
  NodeKernel first_second;   // Phi in the first equation
  NodeKernel second_first;   // Psi in the second equation
  NodeKernel second_second;  // Phi in the second equation
};

// Coupled system with identity signs (+1, -1):
//    Psi(tau) + 1/(2 sqrt(pi)) int (K11 Psi + K12 Phi) dk = rhs1(tau)
//   -Phi(tau) + 1/(2 sqrt(pi)) int (K21 Psi + K22 Phi) dk = rhs2(tau)
// Unknowns are interleaved per node so the system is block lower triangular;
// each node costs one 2x2 solve.
DensitySolution solve_block_2x2(const VolterraGrid& grid, std::span<const double> rhs1,
                                std::span<const double> rhs2, const BlockKernels& kernels,
                                QuadratureRule rule = QuadratureRule::kProductTrapezoid);

// g(tau, k) = dy / dtau_gap * exp(-dy^2 / (4 dtau_gap)) for the gap
// dtau_gap = tau - k > 0 and dy = y(tau) - y(k).
double regular_kernel(double dy, double dtau_gap);

// Heat-potential kernel
//   H(tau,k) = (y(tau) - y(k)) / (tau - k)^{3/2} exp(-(y(tau) - y(k))^2 / (4 (tau - k))).
// DomainError for k > tau. At k == tau the kernel is infinite unless the
// boundary is flat there; the discrete solvers use kernel_hp_regular instead.
double kernel_hp(const BarrierPath& y, double tau, double k);
// sqrt(tau - k) H(tau,k), with the limit y'(tau) at k == tau.
double kernel_hp_regular(const BarrierPath& y, double tau, double k);

// Node kernel for one boundary: g(i,j) = kernel_hp_regular at the nodes.
NodeKernel make_hp_kernel(const BarrierPath& y, const VolterraGrid& grid);
// Node kernel between two boundaries: g(i,j) = regular_kernel(to(tau_i) - from(tau_j), tau_i - tau_j),
// zero on the diagonal (the boundaries are disjoint).
NodeKernel make_cross_kernel(const BarrierPath& to, const BarrierPath& from, const VolterraGrid& grid);

// Density for the linear boundary y = a + b tau from the Laplace-transform
// solution of the Abel equation of the second kind:
//   phi1 = 2 phi e^{b^2 tau/4},  F = phi1 - b/(2 sqrt(pi)) int_0^tau phi1(k)/sqrt(tau-k) dk,
//   Psi1 = F + b^2/4 int_0^tau e^{b^2 (tau-k)/4} F(k) dk,  Psi = Psi1 e^{-b^2 tau/4}.
// The Abel integral is evaluated adaptively from `phi`, the outer convolution
// with the trapezoid rule on the grid. Requires |phi(0)| <= 1e-12.
DensitySolution abel_closed_form(double a, double b, const std::function<double(double)>& phi,
                                 const VolterraGrid& grid);

}  // namespace hwb
