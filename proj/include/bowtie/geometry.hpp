#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bowtie/vec2.hpp"

namespace bowtie {

/// Two cone-tipped inclusions facing each other across a gap of width epsilon.
/// Vertices sit at V1 = (-eps/2, 0) and V2 = (eps/2, 0); inside B_mu the
/// boundary is exactly conical with aperture alpha, outside it is closed by a
/// vertex-centered circular cap joined to the edges by fillets.
struct BowtieConfig {
  double alpha = 1.5707963267948966;  // aperture angle, in (0, pi)
  double epsilon = 0.1;               // vertex separation, in (0, 1/4)
  double mu = 1.5;                    // conical-region radius, > 1
  double cap_fillet = 0.1;            // fillet radius as a fraction of mu
  bool symmetric = true;

  void validate() const;

  double half_aperture() const { return 0.5 * alpha; }
  double edge_length() const { return mu + 0.5 * epsilon; }
  double fillet_radius() const { return cap_fillet * mu; }
  double cap_radius() const;

  Vec2 vertex(int component) const;         // V1 or V2 (component 1 or 2)
  Vec2 scaled_vertex(int component) const;  // S1 or S2
};

struct Panel {
  enum class Kind { line, arc };
  Kind kind = Kind::line;
  Vec2 a, b;          // endpoints in traversal order
  Vec2 center;        // arc only
  double radius = 0;  // arc only
  double ang_a = 0, ang_b = 0;  // arc angles at a and b (signed sweep)
  double length = 0;
  int component = 1;
  double arc_coord = 0;  // arc distance of midpoint to nearest corner
  int first_node = 0;    // index of this panel's first quadrature node

  Vec2 point_at(double tau) const;
  Vec2 tangent_at(double tau) const;  // unit, traversal direction
  Vec2 inward_normal_at(double tau) const { return tangent_at(tau).perp(); }
  /// chord-to-parameter ratio |x(t)-x(s)| / |t-s| (smooth, = length/2 on lines)
  double chord_factor(double t, double s) const;
  /// exact distance from a point to the sub-panel tau in [t0, t1]
  double distance_to(const Vec2& p, double t0 = -1.0, double t1 = 1.0) const;
};

/// Corner-graded panel discretization of one or two closed boundary curves.
/// Normals point into the inclusions.
struct PanelMesh {
  std::vector<Panel> panels;
  int nodes_per_panel = 8;
  double grading = 3.0;
  int n_components = 0;

  // per-node arrays, aligned
  std::vector<Vec2> node_pos;
  std::vector<Vec2> node_normal;
  std::vector<double> node_weight;
  std::vector<double> node_arc;  // arc distance to nearest corner
  std::vector<int> node_component;
  std::vector<int> node_panel;
  std::vector<double> node_tau;

  std::vector<Vec2> corners;             // V_j for components that have one
  std::vector<int> corner_component;
  std::vector<double> component_length;  // closed-loop length per component
  bool has_corners = true;

  BowtieConfig config;

  int total_nodes() const { return static_cast<int>(node_pos.size()); }
  uint64_t hash() const;
  /// smallest panel length (vertex-adjacent on graded meshes)
  double min_panel_length() const;
  double distance_to_boundary(const Vec2& p) const;
  /// length of the panel nearest to p
  double local_panel_length(const Vec2& p) const;
  void write_csv(const std::string& path) const;
};

/// Bow-tie mesh with `panels_per_side` graded panels on each straight edge.
PanelMesh build_bowtie_boundary(const BowtieConfig& config, int panels_per_side,
                                double grading, int nodes_per_panel = 8);

/// Single left inclusion (corner at V1), same grading contract.
PanelMesh build_single_inclusion_boundary(const BowtieConfig& config,
                                          int panels_per_side, double grading,
                                          int nodes_per_panel = 8);

/// Smooth validation geometry: one circle, uniform panels.
PanelMesh build_disk_boundary(const Vec2& center, double radius, int n_panels,
                              int nodes_per_panel = 8);

/// Vertex-local polar coordinates (scaled frame, about S_j). theta is measured
/// from the upper edge ray and sweeps the exterior, in [0, 2*pi - alpha].
struct PolarChart {
  int vertex_id = 1;
  double r = 0;
  double theta = 0;
};

PolarChart polar_about_vertex(const Vec2& y, int vertex_id,
                              const BowtieConfig& config);
/// Inverse of polar_about_vertex: Y = S_j + r * dir(theta).
Vec2 polar_to_point(double r, double theta, int vertex_id,
                    const BowtieConfig& config);
/// Unit direction of increasing r at angle theta, plus the exterior-sweep
/// orientation sign (+1 for vertex 2, -1 for vertex 1).
Vec2 polar_direction(double theta, int vertex_id, const BowtieConfig& config);
int polar_orientation(int vertex_id);

/// Membership tests. Scaled cones are the open sets of the model; the physical
/// test knows about caps and fillets and is exact.
bool inside_scaled_cone(const Vec2& y, int component, const BowtieConfig& config);
bool inside_inclusion(const Vec2& x, int component, const BowtieConfig& config);
bool inside_any_inclusion(const Vec2& x, const BowtieConfig& config);

/// Geometric condition (A): the circle through S1, S2 and e = (0, p) misses
/// the four open edge rays.
struct ConditionAResult {
  bool holds = false;
  Vec2 circle_center;
  double circle_radius = 0;
  struct Hit {
    int component;    // 1 or 2
    int edge;         // +1 upper, -1 lower
    double s;         // arc-length ray parameter of the intersection
    Vec2 point;
  };
  std::vector<Hit> hits;  // empty when the condition holds
};

ConditionAResult check_condition_a(const BowtieConfig& config, double p);

/// Self-test of Eq.-level scaling: eps*Y in Omega agrees with Y in Gamma.
bool scale_relation_check(const BowtieConfig& config, const Vec2& y);

}  // namespace bowtie
