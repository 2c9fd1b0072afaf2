#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bowtie/analytic.hpp"
#include "bowtie/geometry.hpp"
#include "bowtie/quadrature.hpp"

namespace bowtie {

/// The five exterior problem classes. All share the representation
/// u = u_particular + S[rho]; floating boundary constants and the constant at
/// infinity enter as extra unknowns where the problem calls for them.
enum class ProblemKind {
  emitter,           // dipole source, floating c1, c2, zero component fluxes
  capacity_q,        // no source, fluxes -1/+1, floating lambda1, lambda2
  auxiliary_v,       // Dirichlet data a.grad N_{eps e}, finite energy
  background_linear, // linear potential a.X at infinity, floating c1, c2
  single_inclusion,  // dipole source, one component, c1 from the decay row
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::emitter;
  BowtieConfig geometry;
  DipoleSpec dipole;            // emitter/auxiliary_v/single_inclusion
  Vec2 background_a{1.0, 0.0};  // background_linear
  /// optional Dirichlet data override (auxiliary_v only); defaults to the
  /// dipole trace when absent
  std::function<double(const Vec2&)> dirichlet_data;

  int components() const {
    return kind == ProblemKind::single_inclusion ? 1 : 2;
  }
  bool has_particular() const {
    return kind == ProblemKind::emitter || kind == ProblemKind::background_linear ||
           kind == ProblemKind::single_inclusion;
  }
  double u_particular(const Vec2& x) const;
  Vec2 grad_u_particular(const Vec2& x) const;

  static ProblemSpec emitter_case(int case_id, double alpha, double epsilon,
                                  double p);
  static ProblemSpec capacity(double alpha, double epsilon);
  static ProblemSpec auxiliary(int case_id, double alpha, double epsilon,
                               double p);
  static ProblemSpec background(double alpha, double epsilon, const Vec2& a);
  static ProblemSpec single(double alpha, double epsilon);
};

struct MeshParams {
  int panels_per_side = 32;
  double grading = 0.0;  // <= 0 picks max(3, 2/beta)
  int nodes_per_panel = 8;
  double condition_limit = 3e15;
};

/// panels_per_side rule used by the sweeps; grows like eps^{-1/3} so the
/// corner-singular densities keep a fixed relative accuracy.
int default_panels_per_side(double epsilon);
double default_grading(double alpha);

struct LinearSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  int n_nodes = 0;
  int n_extra = 0;  // boundary constants and/or constant at infinity
  std::vector<std::string> extra_names;
  std::shared_ptr<const PanelMesh> mesh;
  ProblemSpec spec;
};

struct SolveResult {
  std::shared_ptr<const PanelMesh> mesh;
  ProblemSpec spec;
  Eigen::VectorXd density;  // rho at mesh nodes
  Eigen::VectorXd charges;  // rho * weight (the solved unknowns)
  std::vector<double> constants;  // c1[, c2] or lambda1, lambda2
  double c_infinity = 0.0;        // auxiliary_v only
  std::vector<double> fluxes;     // quadrature post-check per component
  double residual = 0.0;          // relative linear-system residual
  double condition_estimate = 0.0;

  double gap() const {
    return constants.size() == 2 ? constants[1] - constants[0] : 0.0;
  }
  std::string to_json() const;
  void write_density_csv(const std::string& path) const;
};

LinearSystem assemble(std::shared_ptr<const PanelMesh> mesh,
                      const ProblemSpec& spec,
                      const MeshParams& params = {});
SolveResult solve(const LinearSystem& system,
                  const MeshParams& params = {});
SolveResult solve_problem(const ProblemSpec& spec, const MeshParams& params);

/// Layer-potential evaluation S[rho] and grad S[rho] at off-boundary points.
double layer_potential(const PanelMesh& mesh, const Eigen::VectorXd& density,
                       const Vec2& x);
Vec2 layer_gradient(const PanelMesh& mesh, const Eigen::VectorXd& density,
                    const Vec2& x);

/// One-sided exterior normal derivative of the full solution at a mesh node,
/// via the single-layer jump relation.
double boundary_normal_derivative(const SolveResult& result, int node_index);

}  // namespace bowtie
