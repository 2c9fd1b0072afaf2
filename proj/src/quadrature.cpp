#include "bowtie/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bowtie/gauss.hpp"

namespace bowtie {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInv2Pi = 1.0 / (2.0 * std::numbers::pi);
constexpr int kMaxDepth = 48;
constexpr double kNearFactor = 3.0;
}  // namespace

PanelQuadrature::PanelQuadrature(int nodes_per_panel) : q_(nodes_per_panel) {
  const GaussRule& gr = gauss_legendre(q_);
  nodes_ = gr.nodes;
  weights_ = gr.weights;
  bary_ = barycentric_weights(nodes_);

  // V^T with V[m][n] = t_m^n, for nodal -> monomial coefficient solves
  Eigen::MatrixXd vt(q_, q_);
  for (int n = 0; n < q_; ++n)
    for (int m = 0; m < q_; ++m) vt(n, m) = std::pow(nodes_[m], n);
  vt_lu_.compute(vt);
}

std::vector<double> PanelQuadrature::log_moments(double a) const {
  // mu_n = int_{-1}^{1} t^n log|t - a| dt, |a| < 1
  std::vector<double> mu(q_);
  const double lp = std::log(std::abs(1.0 - a));
  const double lm = std::log(std::abs(1.0 + a));
  double apow = 1.0;  // a^{n+1} built incrementally
  for (int n = 0; n < q_; ++n) {
    apow *= 1.0;  // placeholder, recomputed below
    double an1 = std::pow(a, n + 1);
    double boundary = (lp - ((n % 2 == 0) ? -1.0 : 1.0) * lm) / (n + 1);
    // boundary term: [t^{n+1} log|t-a|]/(n+1) at 1 and -1
    // at t=1: lp/(n+1); at t=-1: (-1)^{n+1} lm/(n+1)
    boundary = (lp - std::pow(-1.0, n + 1) * lm) / (n + 1);
    double poly = 0.0;  // int of sum_{k=0}^{n} a^{n-k} t^k
    for (int k = 0; k <= n; ++k) {
      if (k % 2 == 0) poly += std::pow(a, n - k) * 2.0 / (k + 1);
    }
    double tail = an1 * (lp - lm);
    mu[n] = boundary - (poly + tail) / (n + 1);
  }
  return mu;
}

double PanelQuadrature::kernel_value(KernelKind kind, const Vec2& x,
                                     const Vec2& y, const Vec2& tn) {
  const Vec2 r = x - y;
  const double n2 = r.norm2();
  switch (kind) {
    case KernelKind::potential:
      return 0.5 * kInv2Pi * std::log(n2);
    case KernelKind::grad_x:
      return kInv2Pi * r.x / n2;
    case KernelKind::grad_y:
      return kInv2Pi * r.y / n2;
    case KernelKind::dnu_target:
      return kInv2Pi * tn.dot(r) / n2;
  }
  return 0.0;
}

void PanelQuadrature::self_log_row(const Panel& p, int i_self,
                                   double* row) const {
  const double ti = nodes_[i_self];
  // log|x(t)-x(s)| = log chord_factor(t,s) + log|t-s|; the first part is
  // smooth and uses the panel rule, the second integrates exactly against
  // the monomial basis
  std::vector<double> mu = log_moments(ti);
  Eigen::Map<Eigen::VectorXd> muv(mu.data(), q_);
  Eigen::VectorXd c = vt_lu_.solve(muv);  // Lagrange-basis coefficients
  const double half_len = 0.5 * p.length;
  for (int j = 0; j < q_; ++j) {
    double smooth = weights_[j] * std::log(p.chord_factor(ti, nodes_[j]));
    row[j] = kInv2Pi * half_len * (smooth + c(j));
  }
}

void PanelQuadrature::self_dnu_row(const Panel& p, int i_self,
                                   const Vec2& tn, double* row) const {
  if (p.kind == Panel::Kind::line) {
    // nu(x) . (x - y) vanishes identically on a straight panel
    for (int j = 0; j < q_; ++j) row[j] = 0.0;
    return;
  }
  // on a common circle the kernel is exactly constant
  const Vec2 x = p.point_at(nodes_[i_self]);
  const double eta = (tn.dot(x - p.center) > 0) ? 1.0 : -1.0;
  const double k = eta / (4.0 * kPi * p.radius);
  const double half_len = 0.5 * p.length;
  for (int j = 0; j < q_; ++j) row[j] = k * weights_[j] * half_len;
}

void PanelQuadrature::subdivide(const Panel& p, const Vec2& x, KernelKind kind,
                                const Vec2& tn, double t0, double t1, int depth,
                                double* row) const {
  const double sub_len = 0.5 * (t1 - t0) * p.length;
  const double d = p.distance_to(x, t0, t1);
  if (d > kNearFactor * sub_len || depth >= kMaxDepth) {
    double basis[64];
    for (int m = 0; m < q_; ++m) {
      double tau = t0 + 0.5 * (nodes_[m] + 1.0) * (t1 - t0);
      Vec2 y = p.point_at(tau);
      double w = weights_[m] * 0.5 * (t1 - t0) * 0.5 * p.length;
      double k = kernel_value(kind, x, y, tn);
      lagrange_basis(nodes_, bary_, tau, basis);
      for (int j = 0; j < q_; ++j) row[j] += w * k * basis[j];
    }
    return;
  }
  const double tm = 0.5 * (t0 + t1);
  subdivide(p, x, kind, tn, t0, tm, depth + 1, row);
  subdivide(p, x, kind, tn, tm, t1, depth + 1, row);
}

void PanelQuadrature::target_row(const Panel& p, const Vec2& x, KernelKind kind,
                                 const Vec2& tn, double* row) const {
  const double d = p.distance_to(x);
  if (d > kNearFactor * p.length) {
    for (int j = 0; j < q_; ++j) {
      Vec2 y = p.point_at(nodes_[j]);
      row[j] = weights_[j] * 0.5 * p.length * kernel_value(kind, x, y, tn);
    }
    return;
  }
  for (int j = 0; j < q_; ++j) row[j] = 0.0;
  subdivide(p, x, kind, tn, -1.0, 1.0, 0, row);
}

}  // namespace bowtie
