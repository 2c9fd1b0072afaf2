#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bowtie/geometry.hpp"
#include "bowtie/vec2.hpp"

namespace bowtie {

/// Influence-row machinery for single-layer potentials over panels.
/// Rows map a panel's nodal density values to integrals against a kernel:
///   row[j] ~ int_P k(x, y) l_j(y) ds(y)
/// Far panels use the panel's own Gauss rule; near panels are subdivided
/// recursively until target distance exceeds 3 subpanel lengths, with the
/// density carried by the panel's Lagrange interpolant; the log-singular self
/// panel splits the kernel and integrates the log factor by monomial moments.

enum class KernelKind {
  potential,   // N(x - y)
  grad_x,      // d/dx1 N
  grad_y,      // d/dx2 N
  dnu_target,  // nu(x) . grad_x N, for boundary targets
};

struct PanelQuadrature {
  explicit PanelQuadrature(int nodes_per_panel);

  int q() const { return q_; }

  /// row of int_P N(x-y) l_j ds for a target x on panel P at node index i_self
  void self_log_row(const Panel& p, int i_self, double* row) const;

  /// row of the requested kernel for an off-panel target (handles near and far)
  void target_row(const Panel& p, const Vec2& x, KernelKind kind,
                  const Vec2& target_normal, double* row) const;

  /// dnu row when the target node lies on the panel itself
  void self_dnu_row(const Panel& p, int i_self, const Vec2& target_normal,
                    double* row) const;

  /// moments int_{-1}^{1} t^n log|a - t| dt for n = 0..q-1 (exposed for tests)
  std::vector<double> log_moments(double a) const;

  static double kernel_value(KernelKind kind, const Vec2& x, const Vec2& y,
                             const Vec2& target_normal);

 private:
  void subdivide(const Panel& p, const Vec2& x, KernelKind kind,
                 const Vec2& target_normal, double t0, double t1, int depth,
                 double* row) const;

  int q_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> bary_;
  // factored transposed Vandermonde (monomials at Gauss nodes)
  Eigen::PartialPivLU<Eigen::MatrixXd> vt_lu_;
};

}  // namespace bowtie
