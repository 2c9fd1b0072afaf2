#include "bowtie/bie.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bowtie/io.hpp"
#include "json.hpp"

namespace bowtie {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------------------
// ProblemSpec

double ProblemSpec::u_particular(const Vec2& x) const {
  switch (kind) {
    case ProblemKind::emitter:
    case ProblemKind::single_inclusion:
      return dipole_potential(x, dipole);
    case ProblemKind::background_linear:
      return background_a.dot(x);
    default:
      return 0.0;
  }
}

Vec2 ProblemSpec::grad_u_particular(const Vec2& x) const {
  switch (kind) {
    case ProblemKind::emitter:
    case ProblemKind::single_inclusion:
      return dipole_gradient(x, dipole);
    case ProblemKind::background_linear:
      return background_a;
    default:
      return {0.0, 0.0};
  }
}

static DipoleSpec case_dipole(int case_id, double epsilon, double p) {
  DipoleSpec d;
  d.epsilon = epsilon;
  switch (case_id) {
    case 1:
      d.a = {1.0, 0.0};
      d.p = p;
      break;
    case 2:
      d.a = {0.0, 1.0};
      d.p = 0.0;
      break;
    case 3:
      d.a = {0.0, 1.0};
      d.p = p;
      if (p == 0.0)
        throw std::invalid_argument("case 3 requires a nonzero emitter height");
      break;
    default:
      throw std::invalid_argument("case_id must be 1, 2 or 3");
  }
  return d;
}

ProblemSpec ProblemSpec::emitter_case(int case_id, double alpha, double epsilon,
                                      double p) {
  ProblemSpec s;
  s.kind = ProblemKind::emitter;
  s.geometry.alpha = alpha;
  s.geometry.epsilon = epsilon;
  s.dipole = case_dipole(case_id, epsilon, p);
  return s;
}

ProblemSpec ProblemSpec::capacity(double alpha, double epsilon) {
  ProblemSpec s;
  s.kind = ProblemKind::capacity_q;
  s.geometry.alpha = alpha;
  s.geometry.epsilon = epsilon;
  return s;
}

ProblemSpec ProblemSpec::auxiliary(int case_id, double alpha, double epsilon,
                                   double p) {
  ProblemSpec s;
  s.kind = ProblemKind::auxiliary_v;
  s.geometry.alpha = alpha;
  s.geometry.epsilon = epsilon;
  s.dipole = case_dipole(case_id, epsilon, p);
  return s;
}

ProblemSpec ProblemSpec::background(double alpha, double epsilon, const Vec2& a) {
  ProblemSpec s;
  s.kind = ProblemKind::background_linear;
  s.geometry.alpha = alpha;
  s.geometry.epsilon = epsilon;
  s.background_a = a.normalized();
  return s;
}

ProblemSpec ProblemSpec::single(double alpha, double epsilon) {
  ProblemSpec s;
  s.kind = ProblemKind::single_inclusion;
  s.geometry.alpha = alpha;
  s.geometry.epsilon = epsilon;
  s.dipole.a = {1.0, 0.0};
  s.dipole.epsilon = epsilon;
  s.dipole.p = 0.0;
  return s;
}

int default_panels_per_side(double epsilon) {
  int n = (int)std::ceil(46.0 * std::cbrt(0.01 / epsilon));
  return std::max(32, n);
}

double default_grading(double alpha) {
  double beta = exponents(alpha).beta;
  return std::max(3.0, 2.0 / beta);
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

// Dirichlet data for the collocation right-hand side
double boundary_data(const ProblemSpec& spec, const Vec2& x) {
  switch (spec.kind) {
    case ProblemKind::auxiliary_v:
      if (spec.dirichlet_data) return spec.dirichlet_data(x);
      return dipole_potential(x, spec.dipole);
    default:
      return -spec.u_particular(x);
  }
}

void check_emitter_standoff(const PanelMesh& mesh, const Vec2& loc) {
  double d = mesh.distance_to_boundary(loc);
  double len = mesh.local_panel_length(loc);
  if (d < 10.0 * len)
    throw std::invalid_argument(
        "emitter closer than 10 local panel lengths to the boundary");
}

}  // namespace

LinearSystem assemble(std::shared_ptr<const PanelMesh> mesh,
                      const ProblemSpec& spec, const MeshParams& params) {
  (void)params;
  const PanelMesh& m = *mesh;
  const int n = m.total_nodes();
  if (n == 0) throw std::invalid_argument("assemble: empty mesh");
  // auxiliary_v (a pure Dirichlet solve) runs on either geometry
  if (spec.kind != ProblemKind::auxiliary_v &&
      spec.components() != m.n_components)
    throw std::invalid_argument("assemble: mesh/spec component mismatch");

  const bool needs_dipole =
      spec.kind == ProblemKind::emitter ||
      spec.kind == ProblemKind::single_inclusion ||
      (spec.kind == ProblemKind::auxiliary_v && !spec.dirichlet_data);
  if (needs_dipole) check_emitter_standoff(m, spec.dipole.location());

  int n_extra = 0;
  std::vector<std::string> names;
  switch (spec.kind) {
    case ProblemKind::emitter:
    case ProblemKind::background_linear:
      n_extra = 2;
      names = {"c1", "c2"};
      break;
    case ProblemKind::capacity_q:
      n_extra = 2;
      names = {"lambda1", "lambda2"};
      break;
    case ProblemKind::auxiliary_v:
      n_extra = 1;
      names = {"c_infinity"};
      break;
    case ProblemKind::single_inclusion:
      n_extra = 1;
      names = {"c1"};
      break;
  }

  LinearSystem sys;
  sys.n_nodes = n;
  sys.n_extra = n_extra;
  sys.extra_names = names;
  sys.mesh = mesh;
  sys.spec = spec;
  sys.A = Eigen::MatrixXd::Zero(n + n_extra, n + n_extra);
  sys.b = Eigen::VectorXd::Zero(n + n_extra);

  const PanelQuadrature quad(m.nodes_per_panel);
  const int q = m.nodes_per_panel;
  std::vector<double> row(q);

  // collocation rows; unknowns are node charges rho_j * w_j
  for (int i = 0; i < n; ++i) {
    const Vec2 x = m.node_pos[i];
    for (size_t pi = 0; pi < m.panels.size(); ++pi) {
      const Panel& p = m.panels[pi];
      if ((int)pi == m.node_panel[i]) {
        quad.self_log_row(p, i - p.first_node, row.data());
      } else {
        quad.target_row(p, x, KernelKind::potential, {}, row.data());
      }
      for (int j = 0; j < q; ++j) {
        int col = p.first_node + j;
        sys.A(i, col) += row[j] / m.node_weight[col];
      }
    }
    sys.b(i) = boundary_data(spec, x);
    // constant columns
    switch (spec.kind) {
      case ProblemKind::emitter:
      case ProblemKind::background_linear:
      case ProblemKind::capacity_q:
        sys.A(i, n + m.node_component[i] - 1) = -1.0;
        break;
      case ProblemKind::auxiliary_v:
        sys.A(i, n) = 1.0;
        break;
      case ProblemKind::single_inclusion:
        sys.A(i, n) = -1.0;
        break;
    }
  }

  // flux / decay rows in charge variables
  auto component_row = [&](int r, int comp) {
    for (int j = 0; j < n; ++j)
      if (m.node_component[j] == comp) sys.A(r, j) = 1.0;
  };
  switch (spec.kind) {
    case ProblemKind::emitter:
    case ProblemKind::background_linear:
      component_row(n, 1);
      component_row(n + 1, 2);
      sys.b(n) = 0.0;
      sys.b(n + 1) = 0.0;
      break;
    case ProblemKind::capacity_q:
      // inward-normal flux -1 on component 1 means total charge +1
      component_row(n, 1);
      component_row(n + 1, 2);
      sys.b(n) = 1.0;
      sys.b(n + 1) = -1.0;
      break;
    case ProblemKind::auxiliary_v:
    case ProblemKind::single_inclusion:
      for (int j = 0; j < n; ++j) sys.A(n, j) = 1.0;
      sys.b(n) = 0.0;
      break;
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Solve

SolveResult solve(const LinearSystem& sys, const MeshParams& params) {
  const int nn = (int)sys.A.rows();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.A);
  double rcond = lu.rcond();
  double cond = (rcond > 0) ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(cond < params.condition_limit)) {
    std::ostringstream msg;
    msg << "solve: condition estimate " << cond << " above limit "
        << params.condition_limit;
    throw std::runtime_error(msg.str());
  }

  Eigen::VectorXd x = lu.solve(sys.b);
  // two rounds of iterative refinement with a long double residual
  Eigen::VectorXd r(nn);
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < nn; ++i) {
      long double acc = sys.b(i);
      for (int j = 0; j < nn; ++j)
        acc -= (long double)sys.A(i, j) * (long double)x(j);
      r(i) = (double)acc;
    }
    x += lu.solve(r);
  }
  for (int i = 0; i < nn; ++i) {
    long double acc = sys.b(i);
    for (int j = 0; j < nn; ++j)
      acc -= (long double)sys.A(i, j) * (long double)x(j);
    r(i) = (double)acc;
  }
  double scale = sys.b.norm() + sys.A.norm() * x.norm();
  double residual = (scale > 0) ? r.norm() / scale : r.norm();

  SolveResult res;
  res.mesh = sys.mesh;
  res.spec = sys.spec;
  res.condition_estimate = cond;
  res.residual = residual;

  const PanelMesh& m = *sys.mesh;
  const int n = sys.n_nodes;
  res.charges = x.head(n);
  res.density.resize(n);
  for (int j = 0; j < n; ++j) res.density(j) = x(j) / m.node_weight[j];

  if (sys.spec.kind == ProblemKind::auxiliary_v) {
    res.c_infinity = x(n);
  } else {
    for (int k = 0; k < sys.n_extra; ++k) res.constants.push_back(x(n + k));
  }

  // flux post-check by quadrature of the exterior normal derivative
  res.fluxes.assign(m.n_components, 0.0);
  for (int i = 0; i < n; ++i) {
    double dn = boundary_normal_derivative(res, i);
    res.fluxes[m.node_component[i] - 1] += m.node_weight[i] * dn;
  }
  return res;
}

SolveResult solve_problem(const ProblemSpec& spec, const MeshParams& params) {
  MeshParams p = params;
  if (p.panels_per_side <= 0)
    p.panels_per_side = default_panels_per_side(spec.geometry.epsilon);
  double g = p.grading > 0 ? p.grading : default_grading(spec.geometry.alpha);
  std::shared_ptr<PanelMesh> mesh;
  if (spec.kind == ProblemKind::single_inclusion)
    mesh = std::make_shared<PanelMesh>(build_single_inclusion_boundary(
        spec.geometry, p.panels_per_side, g, p.nodes_per_panel));
  else
    mesh = std::make_shared<PanelMesh>(build_bowtie_boundary(
        spec.geometry, p.panels_per_side, g, p.nodes_per_panel));
  return solve(assemble(mesh, spec, p), p);
}

// ---------------------------------------------------------------------------
// Layer-potential evaluation

double layer_potential(const PanelMesh& m, const Eigen::VectorXd& density,
                       const Vec2& x) {
  const PanelQuadrature quad(m.nodes_per_panel);
  const int q = m.nodes_per_panel;
  std::vector<double> row(q);
  double u = 0.0;
  for (const Panel& p : m.panels) {
    quad.target_row(p, x, KernelKind::potential, {}, row.data());
    for (int j = 0; j < q; ++j) u += row[j] * density(p.first_node + j);
  }
  return u;
}

Vec2 layer_gradient(const PanelMesh& m, const Eigen::VectorXd& density,
                    const Vec2& x) {
  const PanelQuadrature quad(m.nodes_per_panel);
  const int q = m.nodes_per_panel;
  std::vector<double> rx(q), ry(q);
  Vec2 g{0.0, 0.0};
  for (const Panel& p : m.panels) {
    quad.target_row(p, x, KernelKind::grad_x, {}, rx.data());
    quad.target_row(p, x, KernelKind::grad_y, {}, ry.data());
    for (int j = 0; j < q; ++j) {
      g.x += rx[j] * density(p.first_node + j);
      g.y += ry[j] * density(p.first_node + j);
    }
  }
  return g;
}

double boundary_normal_derivative(const SolveResult& res, int i) {
  const PanelMesh& m = *res.mesh;
  const PanelQuadrature quad(m.nodes_per_panel);
  const int q = m.nodes_per_panel;
  const Vec2 x = m.node_pos[i];
  const Vec2 nu = m.node_normal[i];
  std::vector<double> row(q);
  double dn = 0.0;
  for (size_t pi = 0; pi < m.panels.size(); ++pi) {
    const Panel& p = m.panels[pi];
    if ((int)pi == m.node_panel[i])
      quad.self_dnu_row(p, i - p.first_node, nu, row.data());
    else
      quad.target_row(p, x, KernelKind::dnu_target, nu, row.data());
    for (int j = 0; j < q; ++j) dn += row[j] * res.density(p.first_node + j);
  }
  // exterior side of the jump relation (nu points into the inclusion)
  dn -= 0.5 * res.density(i);
  dn += nu.dot(res.spec.grad_u_particular(x));
  return dn;
}

// ---------------------------------------------------------------------------
// Serialization

std::string SolveResult::to_json() const {
  nlohmann::json j;
  switch (spec.kind) {
    case ProblemKind::emitter: j["kind"] = "emitter"; break;
    case ProblemKind::capacity_q: j["kind"] = "capacity_q"; break;
    case ProblemKind::auxiliary_v: j["kind"] = "auxiliary_v"; break;
    case ProblemKind::background_linear: j["kind"] = "background_linear"; break;
    case ProblemKind::single_inclusion: j["kind"] = "single_inclusion"; break;
  }
  j["spec"] = {{"alpha", spec.geometry.alpha},
               {"epsilon", spec.geometry.epsilon},
               {"mu", spec.geometry.mu},
               {"a", {spec.dipole.a.x, spec.dipole.a.y}},
               {"p", spec.dipole.p}};
  j["constants"] = constants;
  j["c_infinity"] = c_infinity;
  j["fluxes"] = fluxes;
  j["residual"] = residual;
  j["condition_estimate"] = condition_estimate;
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                (unsigned long long)mesh->hash());
  j["mesh_hash"] = hash;
  return j.dump(2);
}

void SolveResult::write_density_csv(const std::string& path) const {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "x,y,density\n");
  for (int i = 0; i < mesh->total_nodes(); ++i) {
    std::fprintf(f, "%s,%s,%s\n", fmt_g17(mesh->node_pos[i].x).c_str(),
                 fmt_g17(mesh->node_pos[i].y).c_str(),
                 fmt_g17(density(i)).c_str());
  }
  std::fclose(f);
}

}  // namespace bowtie
