#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "bowtie/bie.hpp"
#include "bowtie/gauss.hpp"
#include "bowtie/geometry.hpp"
#include "bowtie/quadrature.hpp"

using namespace bowtie;

namespace {
constexpr double kPi = std::numbers::pi;

// adaptive Simpson, the independent reference for the singular integrals
double simpson(const std::function<double(double)>& f, double a, double b,
               int depth, double fa, double fm, double fb) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  if (depth > 42 || std::abs(left + right - whole) < 1e-15)
    return left + right;
  return simpson(f, a, m, depth + 1, fa, flm, fm) +
         simpson(f, m, b, depth + 1, fm, frm, fb);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  return simpson(f, a, b, 0, f(a), f(0.5 * (a + b)), f(b));
}
}  // namespace

TEST_CASE("gauss rules integrate polynomials exactly") {
  for (int q : {4, 8, 10, 16}) {
    const GaussRule& gr = gauss_legendre(q);
    double sum = 0;
    for (int i = 0; i < q; ++i) sum += gr.weights[i];
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-15));
    int d = 2 * q - 1;
    double acc = 0;
    for (int i = 0; i < q; ++i) acc += gr.weights[i] * std::pow(gr.nodes[i], d);
    CHECK(std::abs(acc) < 1e-14);  // odd power
    acc = 0;
    for (int i = 0; i < q; ++i)
      acc += gr.weights[i] * std::pow(gr.nodes[i], d - 1);
    CHECK(acc == doctest::Approx(2.0 / d).epsilon(1e-12));
  }
}

TEST_CASE("log moments match adaptive quadrature") {
  PanelQuadrature quad(8);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ua(-0.95, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    double a = ua(rng);
    auto mu = quad.log_moments(a);
    for (int n = 0; n < 8; ++n) {
      auto f = [&](double t) {
        return std::pow(t, n) * std::log(std::abs(t - a));
      };
      double ref = integrate(f, -1.0, a - 1e-14) + integrate(f, a + 1e-14, 1.0);
      CHECK(mu[n] == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("uniform layer density on the unit circle gives log|x| outside") {
  PanelMesh mesh = build_disk_boundary({0, 0}, 1.0, 32);
  Eigen::VectorXd density = Eigen::VectorXd::Ones(mesh.total_nodes());
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ur(1.05, 5.0);
  std::uniform_real_distribution<double> uth(0, 2 * kPi);
  for (int i = 0; i < 50; ++i) {
    double r = ur(rng), th = uth(rng);
    Vec2 x{r * std::cos(th), r * std::sin(th)};
    double u = layer_potential(mesh, density, x);
    CHECK(u == doctest::Approx(std::log(r)).epsilon(1e-12));
    Vec2 g = layer_gradient(mesh, density, x);
    CHECK(g.x == doctest::Approx(x.x / (r * r)).epsilon(1e-11));
    CHECK(g.y == doctest::Approx(x.y / (r * r)).epsilon(1e-11));
  }
  for (double d : {1e-2, 1e-4, 1e-6}) {
    Vec2 x{1.0 + d, 0.0};
    CHECK(layer_potential(mesh, density, x) ==
          doctest::Approx(std::log(1.0 + d)).epsilon(1e-10));
  }
}

TEST_CASE("self rows reproduce the uniform-density potential on the circle") {
  // S[1] = log R = 0 on the unit circle itself
  PanelMesh mesh = build_disk_boundary({0, 0}, 1.0, 24);
  PanelQuadrature quad(mesh.nodes_per_panel);
  const int q = mesh.nodes_per_panel;
  std::vector<double> row(q);
  for (int i : {0, 5, 100, 150}) {
    const Vec2 x = mesh.node_pos[i];
    double u = 0;
    for (size_t pi = 0; pi < mesh.panels.size(); ++pi) {
      const Panel& p = mesh.panels[pi];
      if ((int)pi == mesh.node_panel[i])
        quad.self_log_row(p, i - p.first_node, row.data());
      else
        quad.target_row(p, x, KernelKind::potential, {}, row.data());
      for (int j = 0; j < q; ++j) u += row[j];
    }
    CHECK(std::abs(u) < 1e-12);
  }
}

TEST_CASE("self rows on a straight panel match adaptive reference") {
  Panel p;
  p.kind = Panel::Kind::line;
  p.a = {0.2, -0.3};
  p.b = {0.9, 0.5};
  p.length = dist(p.a, p.b);
  PanelQuadrature quad(8);
  const GaussRule& gr = gauss_legendre(8);
  std::vector<double> row(8);
  auto dens = [](double t) { return 1.0 + t + 0.5 * t * t * t; };
  for (int i : {0, 3, 7}) {
    quad.self_log_row(p, i, row.data());
    double val = 0;
    for (int j = 0; j < 8; ++j) val += row[j] * dens(gr.nodes[j]);
    Vec2 x = p.point_at(gr.nodes[i]);
    double ti = gr.nodes[i];
    auto f = [&](double t) {
      Vec2 y = p.point_at(t);
      return std::log(dist(x, y)) * dens(t) * 0.5 * p.length / (2 * kPi);
    };
    double ref = integrate(f, -1.0, ti - 1e-14) + integrate(f, ti + 1e-14, 1.0);
    CHECK(val == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("self rows on an arc panel match adaptive reference") {
  Panel p;
  p.kind = Panel::Kind::arc;
  p.center = {0.1, 0.2};
  p.radius = 0.8;
  p.ang_a = 0.3;
  p.ang_b = 0.9;
  p.length = p.radius * 0.6;
  p.a = p.point_at(-1);
  p.b = p.point_at(1);
  PanelQuadrature quad(8);
  const GaussRule& gr = gauss_legendre(8);
  std::vector<double> row(8);
  auto dens = [](double t) { return 0.7 - 0.4 * t + t * t; };
  for (int i : {1, 4, 6}) {
    quad.self_log_row(p, i, row.data());
    double val = 0;
    for (int j = 0; j < 8; ++j) val += row[j] * dens(gr.nodes[j]);
    Vec2 x = p.point_at(gr.nodes[i]);
    double ti = gr.nodes[i];
    auto f = [&](double t) {
      Vec2 y = p.point_at(t);
      return std::log(dist(x, y)) * dens(t) * 0.5 * p.length / (2 * kPi);
    };
    double ref = integrate(f, -1.0, ti - 1e-14) + integrate(f, ti + 1e-14, 1.0);
    CHECK(val == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("near-singular target rows match adaptive reference") {
  Panel p;
  p.kind = Panel::Kind::line;
  p.a = {-0.5, 0.0};
  p.b = {0.5, 0.0};
  p.length = 1.0;
  PanelQuadrature quad(8);
  const GaussRule& gr = gauss_legendre(8);
  std::vector<double> row(8);
  auto dens = [](double t) { return std::exp(0.3 * t); };
  for (double d : {0.5, 1e-2, 1e-5}) {
    Vec2 x{0.13, d};
    quad.target_row(p, x, KernelKind::potential, {}, row.data());
    double val = 0;
    for (int j = 0; j < 8; ++j) val += row[j] * dens(gr.nodes[j]);
    auto f = [&](double t) {
      Vec2 y = p.point_at(t);
      return std::log(dist(x, y)) * dens(t) * 0.5 / (2 * kPi);
    };
    double ref = integrate(f, -1.0, 1.0);
    CHECK(val == doctest::Approx(ref).epsilon(5e-8));
  }
}
