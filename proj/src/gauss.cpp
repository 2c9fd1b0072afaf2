#include "bowtie/gauss.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace bowtie {

static GaussRule compute_gauss(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n, symmetric pairs
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
  return it->second;
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> w(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) w[i] /= (nodes[i] - nodes[j]);
  return w;
}

void lagrange_basis(const std::vector<double>& nodes,
                    const std::vector<double>& bary, double t, double* out) {
  const int n = static_cast<int>(nodes.size());
  // exact hit on a node
  for (int i = 0; i < n; ++i) {
    if (t == nodes[i]) {
      for (int j = 0; j < n; ++j) out[j] = (i == j) ? 1.0 : 0.0;
      return;
    }
  }
  double denom = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = bary[i] / (t - nodes[i]);
    denom += out[i];
  }
  for (int i = 0; i < n; ++i) out[i] /= denom;
}

}  // namespace bowtie
