#include "bowtie/oracles.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bowtie/io.hpp"
#include "json.hpp"

namespace bowtie {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInv2Pi = 1.0 / (2.0 * std::numbers::pi);
}

std::string OracleReport::to_json() const {
  nlohmann::json j;
  j["oracle_name"] = oracle_name;
  j["max_abs_error"] = max_abs_error;
  j["max_rel_error"] = max_rel_error;
  j["sample_count"] = sample_count;
  j["runtime_seconds"] = runtime_seconds;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Disk image oracle

void DiskOracle::validate() const {
  if (!(radius > 0)) throw std::invalid_argument("DiskOracle: radius <= 0");
  if (std::abs(a.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("DiskOracle: direction must be a unit vector");
  if (dist(source, center) <= radius)
    throw std::invalid_argument("DiskOracle: emitter inside the closed disk");
}

Vec2 DiskOracle::image_point() const {
  const Vec2 d = source - center;
  return center + d * (radius * radius / d.norm2());
}

Vec2 DiskOracle::image_moment() const {
  // reflection of the moment through the source direction, scaled by R^2/|d|^2
  const Vec2 d = source - center;
  const Vec2 dh = d.normalized();
  return (a - dh * (2.0 * a.dot(dh))) * (radius * radius / d.norm2());
}

double DiskOracle::boundary_constant() const {
  const Vec2 d = source - center;
  return -kInv2Pi * a.dot(d) / d.norm2();
}

double DiskOracle::potential(const Vec2& x) const {
  return dipole_potential_at(x, a, source) -
         dipole_potential_at(x, image_moment(), image_point());
}

Vec2 DiskOracle::gradient(const Vec2& x) const {
  return dipole_gradient_at(x, a, source) -
         dipole_gradient_at(x, image_moment(), image_point());
}

// ---------------------------------------------------------------------------
// Circular-harmonics series

DiskSeriesOracle DiskSeriesOracle::build(const DiskOracle& prob, int n_modes) {
  prob.validate();
  DiskSeriesOracle s;
  s.problem = prob;
  s.n_modes = n_modes;
  s.ac.assign(n_modes + 1, 0.0);
  s.as.assign(n_modes + 1, 0.0);
  // Fourier data of the free dipole field on the circle, trapezoid rule
  // (spectrally accurate for periodic integrands)
  const int nq = 8192;
  std::vector<double> fvals(nq);
  for (int k = 0; k < nq; ++k) {
    double th = 2.0 * kPi * k / nq;
    Vec2 x = prob.center + Vec2{std::cos(th), std::sin(th)} * prob.radius;
    fvals[k] = dipole_potential_at(x, prob.a, prob.source);
  }
  double mean = 0.0;
  for (double v : fvals) mean += v;
  s.mean = mean / nq;
  for (int m = 1; m <= n_modes; ++m) {
    double c = 0.0, d = 0.0;
    for (int k = 0; k < nq; ++k) {
      double th = 2.0 * kPi * k / nq;
      c += fvals[k] * std::cos(m * th);
      d += fvals[k] * std::sin(m * th);
    }
    s.ac[m] = 2.0 * c / nq;
    s.as[m] = 2.0 * d / nq;
  }
  return s;
}

double DiskSeriesOracle::potential(const Vec2& x) const {
  const Vec2 rel = x - problem.center;
  const double r = rel.norm();
  if (r <= problem.radius * (1.0 + 1e-12))
    throw std::invalid_argument("DiskSeriesOracle: point not exterior");
  const double th = std::atan2(rel.y, rel.x);
  // exterior correction cancels every nonconstant mode of the free trace
  double u = dipole_potential_at(x, problem.a, problem.source);
  double ratio = problem.radius / r;
  double rp = 1.0;
  for (int m = 1; m <= n_modes; ++m) {
    rp *= ratio;
    u -= rp * (ac[m] * std::cos(m * th) + as[m] * std::sin(m * th));
    if (rp < 1e-18) break;
  }
  return u;
}

Vec2 DiskSeriesOracle::gradient(const Vec2& x) const {
  const Vec2 rel = x - problem.center;
  const double r = rel.norm();
  if (r <= problem.radius * (1.0 + 1e-12))
    throw std::invalid_argument("DiskSeriesOracle: point not exterior");
  const double th = std::atan2(rel.y, rel.x);
  Vec2 er = rel / r;
  Vec2 et = er.perp();
  Vec2 g = dipole_gradient_at(x, problem.a, problem.source);
  double ratio = problem.radius / r;
  double rp = 1.0;
  for (int m = 1; m <= n_modes; ++m) {
    rp *= ratio;
    double cm = ac[m] * std::cos(m * th) + as[m] * std::sin(m * th);
    double sm = -ac[m] * std::sin(m * th) + as[m] * std::cos(m * th);
    // d/dr of -(R/r)^m f(theta) and the angular part
    g += er * (m * rp / r * cm) - et * (m * rp / r * sm);
    if (rp < 1e-18) break;
  }
  return g;
}

OracleReport disk_oracle_self_check(const DiskOracle& prob, int n_points,
                                    int n_modes) {
  auto t0 = std::chrono::steady_clock::now();
  DiskSeriesOracle series = DiskSeriesOracle::build(prob, n_modes);
  OracleReport rep;
  rep.oracle_name = "disk_image_vs_series";
  rep.sample_count = n_points;
  std::mt19937_64 rng(20260810ull);
  std::uniform_real_distribution<double> uth(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> ur(1.1, 6.0);
  for (int i = 0; i < n_points; ++i) {
    double r = prob.radius * ur(rng);
    double th = uth(rng);
    Vec2 x = prob.center + Vec2{std::cos(th), std::sin(th)} * r;
    if (dist(x, prob.source) < 0.05 * prob.radius) continue;
    double du = std::abs(prob.potential(x) - series.potential(x));
    Vec2 dg = prob.gradient(x) - series.gradient(x);
    double scale = std::max(1e-30, series.gradient(x).norm());
    rep.max_abs_error = std::max({rep.max_abs_error, du, dg.norm()});
    rep.max_rel_error = std::max(rep.max_rel_error, dg.norm() / scale);
  }
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

// ---------------------------------------------------------------------------
// Manufactured solutions

void ManufacturedSolution::validate(const BowtieConfig& config,
                                    int n_components) const {
  if (poles.size() != coefficients.size())
    throw std::invalid_argument("ManufacturedSolution: size mismatch");
  double total = 0.0;
  for (double c : coefficients) total += c;
  if (std::abs(total) > 1e-14)
    throw std::invalid_argument("ManufacturedSolution: coefficients must sum to 0");
  for (const Vec2& p : poles) {
    bool inside = n_components == 2 ? inside_any_inclusion(p, config)
                                    : inside_inclusion(p, 1, config);
    if (!inside)
      throw std::invalid_argument(
          "ManufacturedSolution: pole outside the inclusions");
  }
}

double ManufacturedSolution::potential(const Vec2& x) const {
  double u = 0.0;
  for (size_t i = 0; i < poles.size(); ++i)
    u += coefficients[i] * newton_potential(x, poles[i]);
  return u;
}

Vec2 ManufacturedSolution::gradient(const Vec2& x) const {
  Vec2 g{0.0, 0.0};
  for (size_t i = 0; i < poles.size(); ++i)
    g += grad_newton_potential(x, poles[i]) * coefficients[i];
  return g;
}

SolveResult solve_manufactured(std::shared_ptr<const PanelMesh> mesh,
                               const ManufacturedSolution& exact,
                               const MeshParams& params) {
  exact.validate(mesh->config, mesh->n_components);
  ProblemSpec spec;
  spec.kind = ProblemKind::auxiliary_v;
  spec.geometry = mesh->config;
  spec.dipole.epsilon = mesh->config.epsilon;
  spec.dirichlet_data = [exact](const Vec2& x) { return exact.potential(x); };
  return solve(assemble(mesh, spec, params), params);
}

// ---------------------------------------------------------------------------
// Finite-difference reference

double FdGrid::interpolate(const Vec2& x) const {
  double fx = (x.x - origin.x) / h;
  double fy = (x.y - origin.y) / h;
  int i = (int)std::floor(fx), j = (int)std::floor(fy);
  if (i < 0 || j < 0 || i + 1 >= n || j + 1 >= n)
    throw std::invalid_argument("FdGrid::interpolate: point outside the grid");
  double sx = fx - i, sy = fy - j;
  return (1 - sx) * (1 - sy) * at(i, j) + sx * (1 - sy) * at(i + 1, j) +
         (1 - sx) * sy * at(i, j + 1) + sx * sy * at(i + 1, j + 1);
}

void FdGrid::write_binary(const std::string& prefix) const {
  {
    FILE* f = std::fopen((prefix + ".bin").c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + prefix + ".bin");
    std::fwrite(u.data(), sizeof(double), u.size(), f);
    std::fclose(f);
  }
  FILE* f = std::fopen((prefix + ".csv").c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + prefix + ".csv");
  std::fprintf(f, "nx,ny,h,origin_x,origin_y\n%d,%d,%s,%s,%s\n", n, n,
               fmt_g17(h).c_str(), fmt_g17(origin.x).c_str(),
               fmt_g17(origin.y).c_str());
  std::fclose(f);
}

FdGrid fd_reference_solve(const SolveResult& bie, double box_halfwidth,
                          int grid_n) {
  if (grid_n > 4096) throw std::invalid_argument("fd_reference_solve: grid too large");
  if (grid_n < 16) throw std::invalid_argument("fd_reference_solve: grid too small");
  const ProblemSpec& spec = bie.spec;
  if (spec.kind != ProblemKind::emitter || spec.dipole.a.x != 0.0)
    throw std::invalid_argument(
        "fd_reference_solve: needs a vertical-dipole emitter solve (case 2 or 3)");

  const BowtieConfig& cfg = spec.geometry;
  FdGrid g;
  g.n = grid_n;
  g.h = 2.0 * box_halfwidth / (grid_n - 1);
  g.origin = {-box_halfwidth, -box_halfwidth};
  g.u.assign((size_t)grid_n * grid_n, 0.0);
  g.mask.assign((size_t)grid_n * grid_n, 0);

  // Solve for the correction w = u - u_part, harmonic across the emitter.
  // Staircase mask: grid nodes inside an inclusion carry w = c_j - u_part.
  std::vector<double> w((size_t)grid_n * grid_n, 0.0);
  std::vector<int> unknown_id((size_t)grid_n * grid_n, -1);
  int n_unknown = 0;
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      size_t idx = (size_t)j * grid_n + i;
      Vec2 x = g.point(i, j);
      bool edge = (i == 0 || j == 0 || i == grid_n - 1 || j == grid_n - 1);
      int comp = inside_inclusion(x, 1, cfg) ? 1
                 : inside_inclusion(x, 2, cfg) ? 2
                                               : 0;
      if (comp != 0) {
        g.mask[idx] = 1;
        w[idx] = bie.constants[comp - 1] - spec.u_particular(x);
      } else if (edge) {
        w[idx] = eval_potential(bie, x) - spec.u_particular(x);
      } else {
        unknown_id[idx] = n_unknown++;
      }
    }
  }

  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  trips.reserve((size_t)5 * n_unknown);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_unknown);
  for (int j = 1; j < grid_n - 1; ++j) {
    for (int i = 1; i < grid_n - 1; ++i) {
      size_t idx = (size_t)j * grid_n + i;
      int r = unknown_id[idx];
      if (r < 0) continue;
      trips.emplace_back(r, r, 4.0);
      const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (auto& o : off) {
        size_t nidx = (size_t)(j + o[1]) * grid_n + (i + o[0]);
        int c = unknown_id[nidx];
        if (c >= 0)
          trips.emplace_back(r, c, -1.0);
        else
          rhs(r) += w[nidx];
      }
    }
  }
  Eigen::SparseMatrix<double> A(n_unknown, n_unknown);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                           Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(20000);
  cg.compute(A);
  Eigen::VectorXd sol = cg.solve(rhs);
  if (cg.info() != Eigen::Success)
    throw std::runtime_error("fd_reference_solve: CG did not converge");

  const Vec2 emitter = spec.dipole.location();
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      size_t idx = (size_t)j * grid_n + i;
      double wv = unknown_id[idx] >= 0 ? sol(unknown_id[idx]) : w[idx];
      Vec2 x = g.point(i, j);
      if (g.mask[idx]) {
        int comp = inside_inclusion(x, 1, cfg) ? 1 : 2;
        g.u[idx] = bie.constants[comp - 1];
      } else if (dist(x, emitter) < 0.25 * g.h) {
        g.u[idx] = std::numeric_limits<double>::quiet_NaN();
      } else {
        g.u[idx] = wv + spec.u_particular(x);
      }
    }
  }
  return g;
}

}  // namespace bowtie
